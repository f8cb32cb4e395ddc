#pragma once

// Physical inputs, quantum numbers and the derived frequency scales for a
// charged scalar particle in a space-like dislocation background.
// Natural units throughout: c = hbar = 1.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "dislokon/error.hpp"

namespace dislokon {

struct PhysicalParams {
    double m = 1.0;      ///< rest mass
    double q = 1.0;      ///< electric charge
    double b0 = 0.0;     ///< uniform magnetic field magnitude
    double phi_b = 0.0;  ///< Aharonov-Bohm flux threading the defect
    double chi = 0.0;    ///< dislocation (torsion) length
    double omega0 = 0.0; ///< Klein-Gordon oscillator frequency
    double nu = 0.0;     ///< slope of the linear scalar potential
    std::optional<double> r0; ///< hard-wall radius

    /// Throws Error{InvalidParams} when a field is outside its physical range.
    void validate() const {
        if (!std::isfinite(m) || m <= 0.0)
            throw Error(ErrorKind::InvalidParams, "mass must be positive, got " + std::to_string(m));
        if (!std::isfinite(q) || !std::isfinite(phi_b) || !std::isfinite(chi))
            throw Error(ErrorKind::InvalidParams, "charge, flux and chi must be finite");
        if (!std::isfinite(b0) || b0 < 0.0)
            throw Error(ErrorKind::InvalidParams, "b0 must be >= 0");
        if (!std::isfinite(omega0) || omega0 < 0.0)
            throw Error(ErrorKind::InvalidParams, "omega0 must be >= 0");
        if (!std::isfinite(nu) || nu < 0.0)
            throw Error(ErrorKind::InvalidParams, "nu must be >= 0");
        if (r0 && (!std::isfinite(*r0) || *r0 <= 0.0))
            throw Error(ErrorKind::InvalidParams, "r0 must be positive when present");
    }

    /// Flux period 2*pi/q. Requires q != 0.
    double flux_period() const {
        if (q == 0.0)
            throw Error(ErrorKind::InvalidParams, "flux period undefined for q = 0");
        return 2.0 * std::numbers::pi / q;
    }
};

struct QuantumNumbers {
    int n_radial = 0; ///< nbar >= 0 for Landau/hard-wall, n >= 1 for Heun polynomials
    int l = 0;
    double k = 0.0;
};

struct DerivedScales {
    double omega = 0.0;  ///< cyclotron frequency qB0/m
    double varpi = 0.0;  ///< sqrt(4 omega0^2 + omega^2)
    double delta = 0.0;  ///< sqrt((m omega)^2/4 + nu^2)
    double lambda = 0.0; ///< sqrt(m^2 omega0^2 + (m omega)^2/4 + nu^2)
    double mu = 0.0;     ///< 2 m nu / delta^{3/2}
    double theta = 0.0;  ///< 2 m nu / lambda^{3/2}
    std::optional<double> tau;     ///< set by spectra/oracle once an energy is known
    std::optional<double> lam_cap; ///< oscillator analogue of tau
};

/// l - chi k - q Phi_B / (2 pi)
inline double effective_angular_momentum(const PhysicalParams& p, const QuantumNumbers& qn) {
    return static_cast<double>(qn.l) - p.chi * qn.k - p.q * p.phi_b / (2.0 * std::numbers::pi);
}

namespace detail {

inline double linear_drive(double m, double nu, double scale) {
    if (nu == 0.0)
        return 0.0;
    return 2.0 * m * nu / std::pow(scale, 1.5);
}

} // namespace detail

/// Scales for a given cyclotron frequency; the oracle and the constrained
/// ground state need them with omega overridden.
inline DerivedScales derived_scales_at(const PhysicalParams& p, double omega) {
    DerivedScales s;
    s.omega = omega;
    s.varpi = std::sqrt(4.0 * p.omega0 * p.omega0 + omega * omega);
    const double mw_half = 0.5 * p.m * omega;
    s.delta = std::sqrt(mw_half * mw_half + p.nu * p.nu);
    s.lambda = std::sqrt(p.m * p.m * p.omega0 * p.omega0 + mw_half * mw_half + p.nu * p.nu);
    s.mu = detail::linear_drive(p.m, p.nu, s.delta);
    s.theta = detail::linear_drive(p.m, p.nu, s.lambda);
    return s;
}

inline DerivedScales derived_scales(const PhysicalParams& p) {
    if (!(p.m > 0.0))
        throw Error(ErrorKind::InvalidParams, "mass must be positive");
    return derived_scales_at(p, p.q * p.b0 / p.m);
}

} // namespace dislokon
