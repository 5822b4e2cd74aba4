// bosonic_critical.hpp - squeezed oscillator near its critical coupling, and the driven
// dispersive Rabi (ultrastrong-coupling) probe
//
// Oscillator: xi = (1/4) ln(1 - g/omega) (negative for g > 0).
// Rabi: renormalized frequency omega sqrt(1 - g^2/g_c^2) = omega e^{-2 xi_usc}, g_c^2 = omega Omega.

#pragma once

#include <cmath>
#include <complex>

#include "critmet/gaussian.hpp"
#include "critmet/numerics.hpp"

namespace critmet::bosonic {

struct OscillatorParams {
    double omega = 1.0;
    double g = 0.0;
};

struct AdiabaticBudget {
    double time;
    double qfi_rewritten;
    double sql_crossover_n;
};

struct UscParams {
    double omega = 1.0;      // cavity
    double big_omega = 50.0; // qubit splitting
    double g = 0.0;
    double eta = 1.0;        // drive amplitude
    double kappa = 1.0;
    double omega_p = 1.0;    // drive frequency
};

struct UscQfi {
    double amplitude_part;
    double phase_part;
    double total;
    double enhancement_e4xi;
};

namespace detail {

inline void check_normal(const OscillatorParams& p) {
    if (!(p.omega > 0.0)) throw DomainError("oscillator: omega must be positive");
    if (p.g >= p.omega) throw DomainError("oscillator: g >= omega, past the critical point (superradiant breakdown)");
}

} // namespace detail

inline double xi(const OscillatorParams& p) {
    detail::check_normal(p);
    return 0.25 * std::log1p(-p.g / p.omega);
}

inline double dxi_domega(const OscillatorParams& p) {
    detail::check_normal(p);
    return p.g / (4.0 * p.omega * (p.omega - p.g));
}

inline double renormalized_frequency(const OscillatorParams& p) {
    detail::check_normal(p);
    return p.omega * std::sqrt(1.0 - p.g / p.omega);
}

inline double qfi_ho(const OscillatorParams& p) {
    detail::check_normal(p);
    const double d = p.g - p.omega;
    return p.g * p.g / (8.0 * p.omega * p.omega * d * d);
}

inline double vacuum_excitations(const OscillatorParams& p) {
    const double s = std::sinh(xi(p));
    return s * s;
}

inline double vacuum_excitations_asymptotic(const OscillatorParams& p) {
    detail::check_normal(p);
    return 0.25 / std::sqrt(1.0 - p.g / p.omega);
}

// squeezed vacuum, sigma = diag(e^{2xi}, e^{-2xi}), and its omega-derivative
inline std::pair<gaussian::GaussianState, gaussian::GaussianDerivative> squeezed_vacuum(const OscillatorParams& p) {
    const double x = xi(p), dx = dxi_domega(p);
    gaussian::GaussianState s;
    s.sigma << std::exp(2.0 * x), 0.0, 0.0, std::exp(-2.0 * x);
    gaussian::GaussianDerivative d;
    d.dsigma << 2.0 * std::exp(2.0 * x) * dx, 0.0, 0.0, -2.0 * std::exp(-2.0 * x) * dx;
    return {s, d};
}

// n readout: <n> = sinh^2 xi, Var n = 2 <n>(<n> + 1)
inline double snr_number(const OscillatorParams& p) {
    const double x = xi(p), dx = dxi_domega(p);
    const double n = std::sinh(x) * std::sinh(x);
    if (!(n > 0.0)) throw DomainError("snr_number: no excitations at g = 0, signal and noise both vanish");
    const double dn = std::sinh(2.0 * x) * dx;
    return dn * dn / (2.0 * n * (n + 1.0));
}

// x^2 readout: <x^2> = e^{2xi}/2 (unit-variance vacuum 1/2), Var x^2 = 2 <x^2>^2
inline double snr_quadrature(const OscillatorParams& p) {
    const double x = xi(p), dx = dxi_domega(p);
    const double m = 0.5 * std::exp(2.0 * x);
    const double dm = 2.0 * dx * m;
    return dm * dm / (2.0 * m * m);
}

inline AdiabaticBudget adiabatic_budget(const OscillatorParams& p, double gamma) {
    if (!(gamma > 0.0) || gamma >= 1.0) throw DomainError("adiabatic_budget: gamma must lie in (0, 1)");
    const double n = vacuum_excitations(p);
    const double t = 8.0 * n / (gamma * p.omega);
    return {t, 8.0 * gamma * gamma * t * t * n * n, 1.0 / (8.0 * gamma * gamma)};
}

// ---- driven dispersive Rabi probe ----

inline double usc_critical_coupling(const UscParams& p) {
    if (!(p.omega > 0.0) || !(p.big_omega > 0.0)) throw DomainError("usc: omega and Omega must be positive");
    return std::sqrt(p.omega * p.big_omega);
}

inline double usc_renormalized_frequency(const UscParams& p) {
    const double gc = usc_critical_coupling(p);
    const double r = p.g / gc;
    if (std::abs(r) >= 1.0) throw DomainError("usc: g >= g_c, superradiant regime");
    return p.omega * std::sqrt(1.0 - r * r);
}

// e^{4 xi_usc} = 1/(1 - g^2/g_c^2)
inline double usc_e4xi(const UscParams& p) {
    const double gc = usc_critical_coupling(p);
    const double r = p.g / gc;
    if (std::abs(r) >= 1.0) throw DomainError("usc: g >= g_c, superradiant regime");
    return 1.0 / (1.0 - r * r);
}

inline double usc_virtual_photons(const UscParams& p) {
    const double x = 0.25 * std::log(usc_e4xi(p));
    return std::sinh(x) * std::sinh(x);
}

inline double usc_detuning(const UscParams& p) { return usc_renormalized_frequency(p) - p.omega_p; }

// d delta / d omega through omega sqrt(1 - g^2/(omega Omega)) = sqrt(omega^2 - omega g^2/Omega)
inline double usc_ddetuning_domega(const UscParams& p) {
    const double wr = usc_renormalized_frequency(p);
    return (2.0 * p.omega - p.g * p.g / p.big_omega) / (2.0 * wr);
}

// drive frequency that puts the renormalized mode at detuning delta
inline UscParams usc_with_detuning(UscParams p, double delta) {
    p.omega_p = usc_renormalized_frequency(p) - delta;
    return p;
}

// steady state of d alpha/dt = (i delta - kappa/2) alpha - i sqrt(kappa) eta:
// |alpha| = 2 sqrt(kappa eta^2/(kappa^2 + 4 delta^2)), arg = -atan2(kappa, 2 delta)
inline cplx usc_steady_alpha(const UscParams& p) {
    if (!(p.kappa > 0.0)) throw DomainError("usc_steady_alpha: kappa must be positive");
    const double d = usc_detuning(p);
    const double a = 2.0 * std::sqrt(p.kappa * p.eta * p.eta / (p.kappa * p.kappa + 4.0 * d * d));
    return std::polar(a, -std::atan2(p.kappa, 2.0 * d));
}

inline cplx usc_mean_field_rhs(const UscParams& p, cplx alpha) {
    const double d = usc_detuning(p);
    return cplx(-0.5 * p.kappa, d) * alpha - cplx(0.0, std::sqrt(p.kappa) * p.eta);
}

inline UscQfi usc_qfi_omega(const UscParams& p) {
    if (!(p.kappa > 0.0)) throw DomainError("usc_qfi_omega: kappa must be positive");
    const double d = usc_detuning(p);
    const double dd = usc_ddetuning_domega(p);
    const double den = p.kappa * p.kappa + 4.0 * d * d;
    const double a = std::abs(usc_steady_alpha(p));
    const double da = -a * 4.0 * d / den * dd;
    const double dphi = 2.0 * p.kappa / den * dd;
    UscQfi out;
    out.amplitude_part = 4.0 * da * da;
    out.phase_part = 4.0 * a * a * dphi * dphi;
    out.total = out.amplitude_part + out.phase_part;
    out.enhancement_e4xi = usc_e4xi(p);
    return out;
}

// d alpha / d omega, for building the coherent output as a Gaussian manifold
inline cplx usc_dalpha_domega(const UscParams& p) {
    const double d = usc_detuning(p);
    const double dd = usc_ddetuning_domega(p);
    const double den = p.kappa * p.kappa + 4.0 * d * d;
    const cplx alpha = usc_steady_alpha(p);
    const double a = std::abs(alpha);
    const double da = -a * 4.0 * d / den * dd;
    const double dphi = 2.0 * p.kappa / den * dd;
    const double phi = std::arg(alpha);
    return std::polar(1.0, phi) * cplx(da, a * dphi);
}

inline std::pair<gaussian::GaussianState, gaussian::GaussianDerivative> usc_coherent_output(const UscParams& p) {
    const cplx a = usc_steady_alpha(p), da = usc_dalpha_domega(p);
    const double r2 = std::sqrt(2.0);
    gaussian::GaussianState s;
    s.v << r2 * a.real(), r2 * a.imag();
    gaussian::GaussianDerivative d;
    d.dv << r2 * da.real(), r2 * da.imag();
    return {s, d};
}

// near-critical form as printed: (amplitude term, phase term)
inline std::pair<double, double> usc_qfi_printed(const UscParams& p) {
    const double d = usc_detuning(p);
    const double a2 = std::norm(usc_steady_alpha(p));
    const double e4 = usc_e4xi(p);
    const double s = 4.0 * d * d + p.kappa * p.kappa;
    const double den = p.big_omega * s - 4.0 * p.g * p.g * p.omega;
    const double w2 = p.omega * p.omega;
    const double t1 = 4.0 * a2 * 4.0 * d * d * p.big_omega * s / (w2 * den * den * den) * e4;
    const double t2 = 4.0 * a2 * 4.0 * p.kappa * p.kappa / (w2 * den * den) * e4;
    return {t1, t2};
}

// leading behaviour near g_c from d delta/d omega -> e^{2 xi}/2
inline double usc_qfi_leading(const UscParams& p) {
    const double d = usc_detuning(p);
    return 4.0 * std::norm(usc_steady_alpha(p)) * usc_e4xi(p) / (p.kappa * p.kappa + 4.0 * d * d);
}

} // namespace critmet::bosonic
