#pragma once

// Closed-form relativistic energy levels. Every scenario is written once with
// the Klein-Gordon oscillator frequency omega0 as a parameter; the plain
// charged-particle spectra are the omega0 = 0 case.
//
// Each level is assembled from a separated spectral parameter
//   Lambda = E^2 - m^2 - k^2 - 2 m omega0 - m omega l_eff
// (tau when omega0 = 0), which is also what the radial oracle computes.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "dislokon/error.hpp"
#include "dislokon/model.hpp"

namespace dislokon {

enum class Scenario { landau, hardwall, linear };

constexpr std::string_view to_string(Scenario s) noexcept {
    switch (s) {
    case Scenario::landau: return "landau";
    case Scenario::hardwall: return "hardwall";
    case Scenario::linear: return "linear";
    }
    return "unknown";
}

inline std::optional<Scenario> parse_scenario(std::string_view name) {
    if (name == "landau") return Scenario::landau;
    if (name == "hardwall") return Scenario::hardwall;
    if (name == "linear") return Scenario::linear;
    return std::nullopt;
}

struct EnergyLevel {
    double e_squared = 0.0;
    double e_plus = 0.0;
    double e_minus = 0.0;
    double l_eff = 0.0;
    Scenario scenario = Scenario::landau;
    double spectral = 0.0; ///< Lambda (tau at omega0 = 0)
    /// Hard wall only: Lambda / (2 m varpi); the cosine form needs this >> 1.
    std::optional<double> regime_ratio;

    bool regime_warning() const { return regime_ratio && *regime_ratio < 10.0; }
};

/// E^2 - Lambda: everything in E^2 that is not the radial eigenvalue.
inline double energy_offset(const PhysicalParams& p, const QuantumNumbers& qn, double omega) {
    const double l_eff = effective_angular_momentum(p, qn);
    return p.m * p.m + qn.k * qn.k + 2.0 * p.m * p.omega0 + p.m * omega * l_eff;
}

inline double spectral_from_e_squared(const PhysicalParams& p, const QuantumNumbers& qn, double omega,
                                      double e_squared) {
    return e_squared - energy_offset(p, qn, omega);
}

namespace detail {

inline EnergyLevel make_level(const PhysicalParams& p, const QuantumNumbers& qn, double omega,
                              double spectral, Scenario scenario) {
    EnergyLevel level;
    level.scenario = scenario;
    level.l_eff = effective_angular_momentum(p, qn);
    level.spectral = spectral;
    level.e_squared = energy_offset(p, qn, omega) + spectral;
    if (!(level.e_squared >= 0.0))
        throw Error(ErrorKind::NegativeESquared, "E^2 = " + std::to_string(level.e_squared));
    level.e_plus = std::sqrt(level.e_squared);
    level.e_minus = -level.e_plus;
    return level;
}

inline void require_radial_index(const QuantumNumbers& qn, int minimum) {
    if (qn.n_radial < minimum)
        throw Error(ErrorKind::InvalidParams, "radial quantum number must be >= " +
                                                  std::to_string(minimum) + ", got " +
                                                  std::to_string(qn.n_radial));
}

} // namespace detail

/// m varpi (2 nbar + |l_eff| + 1)
inline double landau_spectral(const PhysicalParams& p, const QuantumNumbers& qn) {
    const auto s = derived_scales(p);
    return p.m * s.varpi * (2.0 * qn.n_radial + std::abs(effective_angular_momentum(p, qn)) + 1.0);
}

inline EnergyLevel energy_landau(const PhysicalParams& p, const QuantumNumbers& qn) {
    p.validate();
    detail::require_radial_index(qn, 0);
    const auto s = derived_scales(p);
    if (s.omega == 0.0 && p.omega0 == 0.0)
        throw Error(ErrorKind::FreeParticle, "omega = omega0 = 0 leaves a continuous spectrum");
    return detail::make_level(p, qn, s.omega, landau_spectral(p, qn), Scenario::landau);
}

/// ((nbar + |l_eff|/2 + 3/4) pi / r0)^2, the zero condition of the
/// large-|a| cosine form of 1F1 at the wall.
inline double hardwall_spectral_approx(const PhysicalParams& p, const QuantumNumbers& qn) {
    if (!p.r0)
        throw Error(ErrorKind::MissingWall, "hard-wall spectrum needs r0");
    const double l_abs = std::abs(effective_angular_momentum(p, qn));
    const double phase = (qn.n_radial + 0.5 * l_abs + 0.75) * std::numbers::pi;
    return phase * phase / (*p.r0 * *p.r0);
}

inline EnergyLevel energy_hardwall_approx(const PhysicalParams& p, const QuantumNumbers& qn) {
    p.validate();
    detail::require_radial_index(qn, 0);
    const auto s = derived_scales(p);
    auto level = detail::make_level(p, qn, s.omega, hardwall_spectral_approx(p, qn), Scenario::hardwall);
    level.regime_ratio = s.varpi > 0.0 ? level.spectral / (2.0 * p.m * s.varpi)
                                       : std::numeric_limits<double>::infinity();
    return level;
}

/// 2 lambda (n + 1 + |l_eff|) - m^2 nu^2 / lambda^2: the spectral value that
/// makes the Heun recurrence stop at degree n.
inline double linear_spectral(const PhysicalParams& p, const QuantumNumbers& qn, double omega) {
    const auto s = derived_scales_at(p, omega);
    const double l_abs = std::abs(effective_angular_momentum(p, qn));
    return 2.0 * s.lambda * (qn.n_radial + 1.0 + l_abs) -
           p.m * p.m * p.nu * p.nu / (s.lambda * s.lambda);
}

namespace detail {

inline EnergyLevel linear_level(const PhysicalParams& p, const QuantumNumbers& qn, double omega) {
    p.validate();
    if (!(p.nu > 0.0))
        throw Error(ErrorKind::InvalidParams, "linear potential needs nu > 0");
    require_radial_index(qn, 1);
    return make_level(p, qn, omega, linear_spectral(p, qn, omega), Scenario::linear);
}

} // namespace detail

inline EnergyLevel energy_linear(const PhysicalParams& p, const QuantumNumbers& qn) {
    return detail::linear_level(p, qn, derived_scales(p).omega);
}

/// Cyclotron frequency at which the degree-1 Heun polynomial exists
/// (a_2 = 0 on top of the n = 1 energy condition):
///   omega^2 = (4/m^2) [m^2 nu^2 (3 + 2|l_eff|)/2]^{2/3} - 4 nu^2/m^2 - 4 omega0^2
inline double frequency_n1(const PhysicalParams& p, const QuantumNumbers& qn) {
    p.validate();
    const double l_abs = std::abs(effective_angular_momentum(p, qn));
    const double m2 = p.m * p.m;
    const double base = 0.5 * m2 * p.nu * p.nu * (3.0 + 2.0 * l_abs);
    const double radicand = 4.0 / m2 * std::cbrt(base * base) - 4.0 * p.nu * p.nu / m2 -
                            4.0 * p.omega0 * p.omega0;
    if (!(radicand > 0.0))
        throw Error(ErrorKind::NoRealFrequency,
                    "n = 1 frequency radicand is " + std::to_string(radicand));
    return std::sqrt(radicand);
}

/// Ground state (n = 1) of the linear potential with the cyclotron frequency
/// fixed by frequency_n1. B0 in `p` is ignored.
inline EnergyLevel energy_ground_n1(const PhysicalParams& p, const QuantumNumbers& qn) {
    if (qn.n_radial != 1)
        throw Error(ErrorKind::InvalidParams, "constrained ground state requires n = 1");
    return detail::linear_level(p, qn, frequency_n1(p, qn));
}

/// Copy of `p` with B0 set so that q B0 / m equals `omega`.
inline PhysicalParams with_cyclotron_frequency(PhysicalParams p, double omega) {
    if (p.q == 0.0)
        throw Error(ErrorKind::InvalidParams, "cannot set a cyclotron frequency with q = 0");
    p.b0 = p.m * omega / p.q;
    return p;
}

} // namespace dislokon
