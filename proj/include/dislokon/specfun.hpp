#pragma once

// Confluent hypergeometric 1F1, its large-|a| cosine form, and the
// biconfluent Heun power series used by the linear-potential problem.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dislokon/error.hpp"

namespace dislokon {

struct KummerParams {
    double a = 0.0;
    double b = 1.0;
    double x = 0.0;
};

namespace detail {

inline bool is_nonpositive_integer(double v) {
    return v <= 0.0 && std::floor(v) == v;
}

/// Kahan-compensated running sum.
template <class Real>
struct CompensatedSum {
    Real sum = Real(0);
    Real carry = Real(0);

    void add(const Real& v) {
        const Real y = v - carry;
        const Real t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

/// Power series of 1F1(a; b; x), evaluated in `Real` arithmetic.
///
/// The summation stops once the running term has stayed below
/// rel_tol * |partial sum| for three consecutive terms while the terms are
/// shrinking, or immediately when a term is exactly zero (a = -nbar).
/// For large negative a the series alternates with terms far larger than
/// the result; the cancellation loss is roughly eps(Real) * max|term|, so
/// root finding in that regime should run with an extended `Real`.
template <class Real = double>
Real kummer_1f1(const KummerParams& p, double rel_tol = 1e-15, int max_terms = 10000) {
    using std::abs;
    if (!(p.x >= 0.0))
        throw Error(ErrorKind::DomainError, "kummer_1f1 requires x >= 0");
    if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
        throw Error(ErrorKind::InvalidParams, "rel_tol must lie in (0, 1e-6]");
    if (max_terms < 100)
        throw Error(ErrorKind::InvalidParams, "max_terms must be >= 100");
    if (detail::is_nonpositive_integer(p.b))
        throw Error(ErrorKind::InvalidB, "b = " + std::to_string(p.b) + " is a pole of 1F1");

    const Real a(p.a);
    const Real b(p.b);
    const Real x(p.x);
    const Real tol(rel_tol);

    detail::CompensatedSum<Real> acc;
    Real term(1);
    acc.add(term);
    int small_run = 0;
    for (int j = 0; j < max_terms; ++j) {
        const Real jj(j);
        const Real ratio = (a + jj) / (b + jj) * x / (jj + Real(1));
        term *= ratio;
        if (term == Real(0))
            return acc.sum;
        acc.add(term);
        if (abs(term) < tol * abs(acc.sum) && abs(ratio) < Real(1)) {
            if (++small_run == 3)
                return acc.sum;
        } else {
            small_run = 0;
        }
    }
    throw Error(ErrorKind::NonConvergence,
                "1F1 series did not converge within " + std::to_string(max_terms) + " terms");
}

/// cos(sqrt(2bx - 4ax) - b pi/2 + pi/4): zero pattern of 1F1 for large negative a.
/// The amplitude prefactor is dropped.
inline double kummer_asymptotic_cos(const KummerParams& p) {
    const double radicand = 2.0 * p.b * p.x - 4.0 * p.a * p.x;
    if (!(radicand > 0.0))
        throw Error(ErrorKind::DomainError,
                    "asymptotic 1F1 form needs 2bx - 4ax > 0, got " + std::to_string(radicand));
    return std::cos(std::sqrt(radicand) - p.b * std::numbers::pi / 2.0 + std::numbers::pi / 4.0);
}

/// Power-series coefficients of a biconfluent Heun function
/// H(x) = sum_j a_j x^j, with a_0 = 1.
struct SeriesSolution {
    std::vector<double> coeffs;
    double mu_or_theta = 0.0;    ///< linear drive (mu, or theta for the oscillator)
    double l_eff_abs = 0.0;
    double spectral_ratio = 0.0; ///< tau/delta, or Lambda/lambda
    std::optional<int> terminated_at; ///< polynomial degree when the series terminates

    /// Number of coefficients that carry the function value.
    std::size_t active_size() const {
        return terminated_at ? static_cast<std::size_t>(*terminated_at) + 1 : coeffs.size();
    }
};

inline constexpr double kHeunTerminationTol = 1e-12;

/// a_1 = (drive/2) a_0, then
/// a_{j+2} = drive (2j+3+2s) a_{j+1} / [2 (j+2)(j+2+2s)]
///         - (4 ratio + drive^2 - 8 - 8s - 8j) a_j / [4 (j+2)(j+2+2s)],  s = |l_eff|.
///
/// The series is reported terminated at degree n when a_{n+1} and a_{n+2}
/// both vanish relative to the largest coefficient; two consecutive zeros
/// force every later coefficient to zero.
inline SeriesSolution heun_coefficients(double mu_or_theta, double l_eff_abs, double spectral_ratio,
                                        int count) {
    if (count < 2)
        throw Error(ErrorKind::InvalidParams, "heun_coefficients needs count >= 2");
    if (!(l_eff_abs >= 0.0))
        throw Error(ErrorKind::InvalidParams, "l_eff_abs must be >= 0");

    const double drive = mu_or_theta;
    const double s = l_eff_abs;
    const double energy_term = 4.0 * spectral_ratio + drive * drive - 8.0 - 8.0 * s;

    // One extra coefficient so termination at the last stored index can be confirmed.
    const auto total = static_cast<std::size_t>(count) + 1;
    std::vector<double> a(total, 0.0);
    a[0] = 1.0;
    a[1] = 0.5 * drive * a[0];
    for (std::size_t j = 0; j + 2 < total; ++j) {
        const double jd = static_cast<double>(j);
        const double denom = (jd + 2.0) * (jd + 2.0 + 2.0 * s);
        a[j + 2] = drive * (2.0 * jd + 3.0 + 2.0 * s) * a[j + 1] / (2.0 * denom) -
                   (energy_term - 8.0 * jd) * a[j] / (4.0 * denom);
    }

    SeriesSolution out;
    out.mu_or_theta = mu_or_theta;
    out.l_eff_abs = l_eff_abs;
    out.spectral_ratio = spectral_ratio;

    double scale = 0.0;
    for (double v : a)
        scale = std::max(scale, std::abs(v));
    const double cut = kHeunTerminationTol * scale;
    for (std::size_t n = 0; n + 2 < total; ++n) {
        if (std::abs(a[n + 1]) <= cut && std::abs(a[n + 2]) <= cut) {
            out.terminated_at = static_cast<int>(n);
            break;
        }
    }
    a.resize(static_cast<std::size_t>(count));
    out.coeffs = std::move(a);
    return out;
}

/// Sum of a_j xbar^j over the active coefficients (Horner form).
inline double heun_eval(const SeriesSolution& s, double xbar) {
    if (!(xbar >= 0.0))
        throw Error(ErrorKind::DomainError, "heun_eval requires xbar >= 0");
    double value = 0.0;
    for (std::size_t i = s.active_size(); i-- > 0;)
        value = value * xbar + s.coeffs[i];
    return value;
}

} // namespace dislokon
