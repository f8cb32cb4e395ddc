#pragma once

// Independent numerical checks of the closed-form spectra.
//
// The radial equation R'' + R'/r - l_eff^2/r^2 R - (c2 r^2 + c1 r) R + tau R = 0
// is rewritten with u = sqrt(r) R as
//   -u'' + [(l_eff^2 - 1/4)/r^2 + c2 r^2 + c1 r] u = tau u,  u(0) = u(r_max) = 0,
// and discretized with second-order central differences on a uniform grid.
// The centrifugal term is sampled so the stencil is exact for the regular
// small-r behaviour u ~ r^{|l_eff| + 1/2}; this keeps O(h^2) convergence for
// |l_eff| < 1/2, where the Dirichlet condition at the origin selects the
// regular solution. The symmetric tridiagonal matrix is diagonalized by
// Sturm-sequence bisection.
//
// The hard-wall problem has a second, unrelated route: roots in tau of
// 1F1(a(tau), b; x0) = 0 at the wall.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dislokon/error.hpp"
#include "dislokon/model.hpp"
#include "dislokon/specfun.hpp"
#include "dislokon/spectra.hpp"

namespace dislokon {

inline constexpr int kDefaultGridN = 4000;
inline constexpr int kMinGridN = 500;

/// Oracle resolution: DISLOKON_GRID_N when set, else kDefaultGridN.
inline int default_grid_n() {
    const char* env = std::getenv("DISLOKON_GRID_N");
    if (env == nullptr || *env == '\0')
        return kDefaultGridN;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0 || v > 10'000'000)
        throw Error(ErrorKind::InvalidParams, std::string("bad DISLOKON_GRID_N value '") + env + "'");
    return static_cast<int>(v);
}

struct RadialEigenproblem {
    double l_eff_abs = 0.0;
    double quad_coeff = 0.0; ///< coefficient of r^2 in the potential
    double lin_coeff = 0.0;  ///< coefficient of r
    std::optional<double> wall;
    int grid_n = kDefaultGridN; ///< interior points
    double r_max = 0.0;         ///< ignored when `wall` is set

    double extent() const { return wall ? *wall : r_max; }
    double spacing() const { return extent() / (grid_n + 1); }

    double potential(double r) const {
        return (l_eff_abs * l_eff_abs - 0.25) / (r * r) + quad_coeff * r * r + lin_coeff * r;
    }

    void validate() const {
        if (grid_n < kMinGridN)
            throw Error(ErrorKind::GridTooCoarse, "grid_n = " + std::to_string(grid_n) +
                                                      " is below the minimum of " +
                                                      std::to_string(kMinGridN));
        if (!(l_eff_abs >= 0.0) || !(quad_coeff >= 0.0) || !(lin_coeff >= 0.0))
            throw Error(ErrorKind::InvalidParams, "radial problem coefficients must be >= 0");
        if (!(extent() > 0.0) || !std::isfinite(extent()))
            throw Error(ErrorKind::InvalidParams, "radial problem needs a positive wall or r_max");
    }

    RadialEigenproblem with_grid(int n) const {
        auto copy = *this;
        copy.grid_n = n;
        return copy;
    }
};

namespace detail {

struct Tridiagonal {
    std::vector<double> diag;
    double off = 0.0; ///< constant off-diagonal

    explicit Tridiagonal(const RadialEigenproblem& prob) {
        const double h = prob.spacing();
        const double inv_h2 = 1.0 / (h * h);
        diag.resize(static_cast<std::size_t>(prob.grid_n));
        const double p = prob.l_eff_abs + 0.5;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            const double r = static_cast<double>(i + 1) * h;
            diag[i] = 2.0 * inv_h2 + centrifugal(p, static_cast<double>(i + 1)) * inv_h2 +
                      prob.quad_coeff * r * r + prob.lin_coeff * r;
        }
        off = -inv_h2;
    }

    // (l^2 - 1/4)/r^2 in units of 1/h^2, taken as the value that makes the
    // three-point stencil exact for u = r^p, p = |l| + 1/2. Tends to
    // p (p - 1) / i^2 for large i.
    static double centrifugal(double p, double i) {
        const double ip = std::pow(i, p);
        return (std::pow(i + 1.0, p) - 2.0 * ip + std::pow(i - 1.0, p)) / ip;
    }

    /// Number of eigenvalues strictly below x (Sturm sequence of the LDL^T pivots).
    std::size_t count_below(double x) const {
        const double off2 = off * off;
        const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
        std::size_t count = 0;
        double pivot = 1.0;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            pivot = diag[i] - x - (i == 0 ? 0.0 : off2 / pivot);
            if (pivot == 0.0)
                pivot = -tiny;
            if (pivot < 0.0)
                ++count;
        }
        return count;
    }

    double eigenvalue(std::size_t index, double lo, double hi) const {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            if (count_below(mid) > index)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    }

    std::pair<double, double> gershgorin() const {
        const auto [mn, mx] = std::minmax_element(diag.begin(), diag.end());
        return {*mn - 2.0 * std::abs(off), *mx + 2.0 * std::abs(off)};
    }
};

} // namespace detail

/// Lowest `n_states` eigenvalues, ascending.
///
/// With `shift_tol` set, the solve is repeated on a doubled grid and
/// GridTooCoarse is raised if any eigenvalue moves by more than
/// shift_tol relative.
inline std::vector<double> solve_radial(const RadialEigenproblem& prob, int n_states,
                                        std::optional<double> shift_tol = std::nullopt) {
    prob.validate();
    if (n_states < 1 || n_states > prob.grid_n)
        throw Error(ErrorKind::InvalidParams, "n_states out of range");

    const detail::Tridiagonal mat(prob);
    auto [lo, hi] = mat.gershgorin();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_states));
    for (int k = 0; k < n_states; ++k) {
        const double lower = out.empty() ? lo : out.back();
        out.push_back(mat.eigenvalue(static_cast<std::size_t>(k), lower, hi));
    }

    if (shift_tol) {
        const auto fine = solve_radial(prob.with_grid(2 * prob.grid_n), n_states);
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double shift = std::abs(fine[k] - out[k]) / std::abs(fine[k]);
            if (shift > *shift_tol)
                throw Error(ErrorKind::GridTooCoarse,
                            "state " + std::to_string(k) + " moves by " + std::to_string(shift) +
                                " (relative) when grid_n doubles from " +
                                std::to_string(prob.grid_n) + "; tolerance " +
                                std::to_string(*shift_tol));
        }
    }
    return out;
}

/// Eigenvector for a known eigenvalue by inverse iteration, values at the
/// interior grid points r_i = i h, normalized to max |u| = 1.
inline std::vector<double> radial_eigenvector(const RadialEigenproblem& prob, double eigenvalue) {
    prob.validate();
    const detail::Tridiagonal mat(prob);
    const std::size_t n = mat.diag.size();
    // Nudge off the exact eigenvalue so the factorization stays finite.
    const double shift = eigenvalue + 1e-10 * std::max(1.0, std::abs(eigenvalue));

    std::vector<double> rhs(n, 1.0);
    std::vector<double> c(n), d(n);
    for (int sweep = 0; sweep < 3; ++sweep) {
        // Thomas algorithm on (T - shift I) y = rhs.
        double denom = mat.diag[0] - shift;
        c[0] = mat.off / denom;
        d[0] = rhs[0] / denom;
        for (std::size_t i = 1; i < n; ++i) {
            denom = mat.diag[i] - shift - mat.off * c[i - 1];
            if (denom == 0.0)
                denom = std::numeric_limits<double>::epsilon();
            c[i] = mat.off / denom;
            d[i] = (rhs[i] - mat.off * d[i - 1]) / denom;
        }
        rhs[n - 1] = d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            rhs[i] = d[i] - c[i] * rhs[i + 1];
        double norm = 0.0;
        for (double v : rhs)
            norm = std::max(norm, std::abs(v));
        for (double& v : rhs)
            v /= norm;
    }
    // Sign convention: positive near the origin.
    const auto first = std::find_if(rhs.begin(), rhs.end(), [](double v) { return std::abs(v) > 1e-6; });
    if (first != rhs.end() && *first < 0.0)
        for (double& v : rhs)
            v = -v;
    return rhs;
}

/// Interior sign changes, ignoring values below `floor` of the peak.
inline int count_nodes(std::span<const double> u, double floor = 1e-9) {
    double peak = 0.0;
    for (double v : u)
        peak = std::max(peak, std::abs(v));
    int nodes = 0;
    int last_sign = 0;
    for (double v : u) {
        if (std::abs(v) <= floor * peak)
            continue;
        const int sign = v > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign)
            ++nodes;
        last_sign = sign;
    }
    return nodes;
}

/// Largest |u| over the outer 10% of the grid relative to the peak.
inline double tail_fraction(std::span<const double> u) {
    double peak = 0.0;
    for (double v : u)
        peak = std::max(peak, std::abs(v));
    const std::size_t start = u.size() - u.size() / 10;
    double tail = 0.0;
    for (std::size_t i = start; i < u.size(); ++i)
        tail = std::max(tail, std::abs(u[i]));
    return peak > 0.0 ? tail / peak : 0.0;
}

/// Linear extrapolation in h^2 from two grids.
inline double richardson(double tau_coarse, double h_coarse, double tau_fine, double h_fine) {
    const double hc2 = h_coarse * h_coarse;
    const double hf2 = h_fine * h_fine;
    return (hc2 * tau_fine - hf2 * tau_coarse) / (hc2 - hf2);
}

inline constexpr double kTailLimit = 1e-8;

/// Problem without a wall, with r_max set to 1.5x the outer turning point of
/// `tau_estimate` and grown until the top state's tail is below kTailLimit.
inline RadialEigenproblem confined_problem(double l_eff_abs, double quad, double lin, double tau_estimate,
                                           int n_states, int grid_n) {
    if (!(quad > 0.0) && !(lin > 0.0))
        throw Error(ErrorKind::InvalidParams, "no confining potential; a wall is required");
    const double tau = std::max(tau_estimate, 1e-12);
    const double turning = quad > 0.0 ? (-lin + std::sqrt(lin * lin + 4.0 * quad * tau)) / (2.0 * quad)
                                      : tau / lin;

    RadialEigenproblem prob{l_eff_abs, quad, lin, std::nullopt, grid_n, 1.5 * turning};
    for (int attempt = 0; attempt < 6; ++attempt) {
        const auto taus = solve_radial(prob, n_states);
        const auto u = radial_eigenvector(prob, taus.back());
        if (tail_fraction(u) <= kTailLimit)
            break;
        prob.r_max *= 1.5;
    }
    return prob;
}

inline RadialEigenproblem landau_problem(const PhysicalParams& p, const QuantumNumbers& qn, int n_states,
                                         int grid_n) {
    const auto s = derived_scales(p);
    const double half = 0.5 * p.m * s.varpi;
    QuantumNumbers top = qn;
    top.n_radial = n_states - 1;
    return confined_problem(std::abs(effective_angular_momentum(p, qn)), half * half, 0.0,
                            landau_spectral(p, top), n_states, grid_n);
}

inline RadialEigenproblem hardwall_problem(const PhysicalParams& p, const QuantumNumbers& qn, int grid_n) {
    if (!p.r0)
        throw Error(ErrorKind::MissingWall, "hard-wall oracle needs r0");
    const auto s = derived_scales(p);
    const double half = 0.5 * p.m * s.varpi;
    return RadialEigenproblem{std::abs(effective_angular_momentum(p, qn)), half * half, 0.0, p.r0, grid_n,
                              *p.r0};
}

/// Linear-potential problem at cyclotron frequency `omega`.
inline RadialEigenproblem linear_problem(const PhysicalParams& p, const QuantumNumbers& qn, double omega,
                                         int n_states, int grid_n) {
    const auto s = derived_scales_at(p, omega);
    QuantumNumbers top = qn;
    top.n_radial = std::max(1, n_states);
    return confined_problem(std::abs(effective_angular_momentum(p, qn)), s.lambda * s.lambda,
                            2.0 * p.m * p.nu, linear_spectral(p, top, omega), n_states, grid_n);
}

/// Extended precision for the alternating 1F1 series at large negative a.
using WideReal = boost::multiprecision::cpp_bin_float_quad;

/// Exact hard-wall spectral values: the `n_states` smallest Lambda > 0 with
/// 1F1(|l|/2 + 1/2 - Lambda/(2 m varpi), |l| + 1; m varpi r0^2 / 2) = 0.
inline std::vector<double> hardwall_exact(const PhysicalParams& p, const QuantumNumbers& qn, int n_states) {
    p.validate();
    if (!p.r0)
        throw Error(ErrorKind::MissingWall, "hard-wall oracle needs r0");
    if (n_states < 1)
        throw Error(ErrorKind::InvalidParams, "n_states must be >= 1");
    const auto s = derived_scales(p);
    if (!(s.varpi > 0.0))
        throw Error(ErrorKind::InvalidParams, "hard-wall 1F1 route needs varpi > 0");

    const double l_abs = std::abs(effective_angular_momentum(p, qn));
    const double scale = 2.0 * p.m * s.varpi;
    const double b = l_abs + 1.0;
    const double x0 = 0.5 * p.m * s.varpi * *p.r0 * *p.r0;
    const double a_top = 0.5 * l_abs + 0.5;
    const auto lambda_of = [&](double a) { return scale * (a_top - a); };

    const auto f = [&](double a) {
        return kummer_1f1<WideReal>(KummerParams{a, b, x0}, 1e-30, 100000);
    };

    // Upper bound on the highest requested root, with generous margin.
    QuantumNumbers top = qn;
    top.n_radial = n_states - 1;
    const double cap = 4.0 * std::max(hardwall_spectral_approx(p, top), landau_spectral(p, top)) + 4.0 * scale;
    const double a_bottom = a_top - cap / scale;
    // Consecutive roots in a are at least ~1 apart (the Landau spacing).
    constexpr double step = 0.05;

    std::vector<double> roots;
    double a_hi = a_top - 1e-9;
    WideReal f_hi = f(a_hi);
    while (static_cast<int>(roots.size()) < n_states && a_hi > a_bottom) {
        const double a_lo = a_hi - step;
        const WideReal f_lo = f(a_lo);
        if ((f_lo < 0) != (f_hi < 0)) {
            double lo = a_lo;
            double hi = a_hi;
            WideReal f_at_hi = f_hi;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const WideReal fm = f(mid);
                if ((fm < 0) == (f_at_hi < 0)) {
                    hi = mid;
                    f_at_hi = fm;
                } else {
                    lo = mid;
                }
            }
            roots.push_back(lambda_of(0.5 * (lo + hi)));
        }
        a_hi = a_lo;
        f_hi = f_lo;
    }
    if (static_cast<int>(roots.size()) < n_states)
        throw Error(ErrorKind::BracketFailure,
                    "found " + std::to_string(roots.size()) + " of " + std::to_string(n_states) +
                        " 1F1 roots scanning a in [" + std::to_string(a_bottom) + ", " +
                        std::to_string(a_top) + "]");
    return roots;
}

struct OracleReport {
    Scenario scenario = Scenario::landau;
    double closed_form_tau = 0.0;
    double numeric_tau = 0.0; ///< eigenvalue at grid_n
    double rel_err = 0.0;
    int grid_n = 0;
    std::optional<double> richardson_tau; ///< extrapolated from grid_n and 2 grid_n
    std::optional<double> exact_tau;      ///< hard wall: 1F1 root
    double fine_tau = 0.0;                ///< eigenvalue at 2 grid_n
    double closed_form_e = 0.0;           ///< E+ from the closed form
    double numeric_e = 0.0;               ///< E+ reassembled from the best numeric tau
    double cyclotron = 0.0;               ///< omega used (constrained for linear n = 1)
    double r_max = 0.0;

    double best_numeric_tau() const { return richardson_tau.value_or(numeric_tau); }

    double computed_rel_err() const {
        return std::abs(best_numeric_tau() - closed_form_tau) / std::abs(closed_form_tau);
    }
};

class MismatchError : public Error {
public:
    MismatchError(const OracleReport& report, double tol)
        : Error(ErrorKind::MismatchBeyondTolerance,
                "rel_err " + std::to_string(report.rel_err) + " exceeds tolerance " + std::to_string(tol)),
          report_(report) {}

    const OracleReport& report() const noexcept { return report_; }

private:
    OracleReport report_;
};

/// Runs the closed form and the finite-difference oracle (grid_n and
/// 2 grid_n, Richardson-extrapolated) for one state.
///
/// `linear` checks the n = 1 ground state at the cyclotron frequency from
/// frequency_n1; B0 in `p` is ignored for it. `hardwall` compares the cosine
/// approximation against the oracle and also records the exact 1F1 root.
inline OracleReport verify_scenario(const PhysicalParams& p, const QuantumNumbers& qn, Scenario scenario,
                                    double tol, int grid_n = default_grid_n()) {
    p.validate();
    OracleReport report;
    report.scenario = scenario;
    report.grid_n = grid_n;

    RadialEigenproblem prob;
    int state_index = qn.n_radial;
    EnergyLevel level;
    double omega = derived_scales(p).omega;
    switch (scenario) {
    case Scenario::landau:
        level = energy_landau(p, qn);
        prob = landau_problem(p, qn, qn.n_radial + 1, grid_n);
        break;
    case Scenario::hardwall:
        level = energy_hardwall_approx(p, qn);
        prob = hardwall_problem(p, qn, grid_n);
        report.exact_tau = hardwall_exact(p, qn, qn.n_radial + 1).back();
        break;
    case Scenario::linear:
        level = energy_ground_n1(p, qn);
        omega = frequency_n1(p, qn);
        // The degree-1 polynomial 1 + theta x/2 has no positive root: nodeless ground state.
        state_index = 0;
        prob = linear_problem(p, qn, omega, 1, grid_n);
        break;
    }
    report.cyclotron = omega;
    report.closed_form_tau = level.spectral;
    report.closed_form_e = level.e_plus;
    report.r_max = prob.extent();

    const int n_states = state_index + 1;
    auto fine_job = std::async(std::launch::async, [&] { return solve_radial(prob.with_grid(2 * grid_n), n_states); });
    const auto coarse = solve_radial(prob, n_states);
    const auto fine = fine_job.get();
    const auto idx = static_cast<std::size_t>(state_index);
    report.numeric_tau = coarse[idx];
    report.fine_tau = fine[idx];
    report.richardson_tau = richardson(coarse[idx], prob.spacing(), fine[idx],
                                       prob.with_grid(2 * grid_n).spacing());

    const double shift = std::abs(report.fine_tau - report.numeric_tau) / std::abs(report.fine_tau);
    if (shift > tol)
        throw Error(ErrorKind::GridTooCoarse, "eigenvalue moves by " + std::to_string(shift) +
                                                  " (relative) between grid_n = " + std::to_string(grid_n) +
                                                  " and " + std::to_string(2 * grid_n) + "; tolerance " +
                                                  std::to_string(tol));

    report.rel_err = report.computed_rel_err();
    const double e2 = energy_offset(p, qn, omega) + report.best_numeric_tau();
    report.numeric_e = e2 >= 0.0 ? std::sqrt(e2) : std::numeric_limits<double>::quiet_NaN();

    if (report.rel_err > tol)
        throw MismatchError(report, tol);
    return report;
}

} // namespace dislokon
