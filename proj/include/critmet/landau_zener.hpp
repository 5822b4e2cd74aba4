// landau_zener.hpp - two-level probe H = (omega/2) sz - (g/2) sx at zero and finite temperature
//
// Basis index 0 = up, 1 = down. Parameters are ordered (omega, g) throughout.
// Thermal formulas use x = Delta / (2T) with k_B = 1.

#pragma once

#include <cmath>
#include <utility>

#include "critmet/estimation.hpp"

namespace critmet::lz {

struct LzParams {
    double omega = 1.0;
    double g = 0.0;
    double temperature = 0.0;
};

struct LzThermalQfi {
    double population_term = 0.0;
    double weight = 0.0;
    double ground_qfi = 0.0;
    double total = 0.0;
};

struct GroundState {
    double phi;     // mixing angle, atan2(g, omega)
    double energy;  // -Delta/2
    CVec state;
};

struct SldPair {
    CMat l_omega, l_g;
    double commutator_coeff;  // [L_omega, L_g] = +-i c sigma_y, c reported >= 0
    double weak_trace;        // Im Tr(rho [L_omega, L_g])
};

struct ThermalQfim {
    estimation::FisherMatrix qfim;
    double det;
};

struct EffectiveDirection {
    double eigenvalue;
    Vec unit_vector;
};

inline double gap(const LzParams& p) { return std::hypot(p.omega, p.g); }

namespace detail {

inline double checked_gap(const LzParams& p) {
    if (!std::isfinite(p.omega) || !std::isfinite(p.g)) throw ValidationError("LzParams: non-finite omega or g");
    const double d = gap(p);
    if (!(d > 0.0)) throw DomainError("landau_zener: omega = g = 0 is an exact level crossing");
    return d;
}

inline double checked_temperature(const LzParams& p) {
    if (p.temperature < 0.0 || !std::isfinite(p.temperature)) throw ValidationError("LzParams: temperature must be >= 0");
    if (p.temperature == 0.0) throw DomainError("landau_zener: T = 0; use the ground-state operation instead");
    return p.temperature;
}

inline double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

inline CMat pauli(char c) {
    CMat m(2, 2);
    switch (c) {
        case 'x': m << 0, 1, 1, 0; break;
        case 'y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'z': m << 1, 0, 0, -1; break;
        default: m.setIdentity();
    }
    return m;
}

} // namespace detail

inline CMat hamiltonian(const LzParams& p) {
    return 0.5 * p.omega * detail::pauli('z') - 0.5 * p.g * detail::pauli('x');
}

// ground = sin(phi/2)|up> + cos(phi/2)|down>, tan(phi/2) = g/(omega + Delta)
inline GroundState ground_state(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const double phi = std::atan2(p.g, p.omega);
    CVec s(2);
    s << std::sin(0.5 * phi), std::cos(0.5 * phi);
    return {phi, -0.5 * d, s};
}

inline CVec excited_state(const LzParams& p) {
    const double phi = ground_state(p).phi;
    CVec s(2);
    s << std::cos(0.5 * phi), -std::sin(0.5 * phi);
    return s;
}

// d phi / d omega, d phi / d g
inline std::pair<double, double> mixing_angle_gradient(const LzParams& p) {
    const double d = detail::checked_gap(p);
    return {-p.g / (d * d), p.omega / (d * d)};
}

inline double qfi_ground(const LzParams& p) {
    const double d = detail::checked_gap(p);
    return p.g * p.g / (d * d * d * d);
}

inline LzThermalQfi qfi_thermal(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const double t = detail::checked_temperature(p);
    const double x = d / (2.0 * t);
    LzThermalQfi out;
    out.population_term = p.omega * p.omega * detail::sech2(x) / (4.0 * t * t * d * d);
    const double th = std::tanh(x);
    out.weight = th * th;
    out.ground_qfi = qfi_ground(p);
    out.total = out.population_term + out.weight * out.ground_qfi;
    return out;
}

inline double snr_sigmaz(const LzParams& p) {
    const double d = detail::checked_gap(p);
    return p.g * p.g / (d * d * d * d);
}

// sech^2(x)[w^2 D + g^2 T sinh 2x]^2 / (2 T^2 D^4 [g^2 + 2w^2 + g^2 cosh 2x]), divided through by
// cosh^2 x so it stays finite as T -> 0
inline double snr_sigmaz_thermal(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const double t = detail::checked_temperature(p);
    const double x = d / (2.0 * t);
    const double s2 = detail::sech2(x), th = std::tanh(x);
    const double w2 = p.omega * p.omega, g2 = p.g * p.g;
    const double num = w2 * d * s2 + 2.0 * g2 * t * th;
    return num * num / (4.0 * t * t * std::pow(d, 4) * (w2 * s2 + g2));
}

inline double snr_ramsey(const LzParams& p, double omega_l, double t) {
    const double d = detail::checked_gap(p);
    if (t < 0.0) throw ValidationError("snr_ramsey: t must be non-negative");
    const double c = std::cos((omega_l - d) * t);
    return t * t * p.omega * p.omega * c * c / (d * d);
}

inline estimation::FisherMatrix qfim_ground(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const double d4 = std::pow(d, 4);
    Mat f(2, 2);
    f << p.g * p.g / d4, -p.g * p.omega / d4, -p.g * p.omega / d4, p.omega * p.omega / d4;
    return {{"omega", "g"}, f};
}

inline ThermalQfim qfim_thermal(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const double t = detail::checked_temperature(p);
    const double x = d / (2.0 * t);
    const double s2 = detail::sech2(x), th = std::tanh(x);
    const double w = p.omega, g = p.g, d2 = d * d, t2 = t * t;
    const double den = 4.0 * t2 * d2 * d2;
    Mat f(2, 2);
    f(0, 0) = ((d2 * w * w - 4.0 * g * g * t2) * s2 + 4.0 * g * g * t2) / den;
    f(1, 1) = ((d2 * g * g - 4.0 * w * w * t2) * s2 + 4.0 * w * w * t2) / den;
    f(0, 1) = f(1, 0) = g * w * ((d2 + 4.0 * t2) * s2 - 4.0 * t2) / den;
    // 4 sinh^6(x) / (sinh^4(2x) T^2 D^2) reduces to tanh^2 sech^2 / (4 T^2 D^2)
    const double det = th * th * s2 / (4.0 * t2 * d2);
    return {{{"omega", "g"}, f}, det};
}

// the determinant exactly as 4 sinh^6(D/2T) / (sinh^4(D/T) T^2 D^2); overflows for D/T > ~350
inline double qfim_thermal_det_printed(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const double t = detail::checked_temperature(p);
    const double sh = std::sinh(d / (2.0 * t)), sh2 = std::sinh(d / t);
    return 4.0 * std::pow(sh, 6) / (std::pow(sh2, 4) * t * t * d * d);
}

// Gibbs state with ground in column 0
inline estimation::SpectralState gibbs_state(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const double t = detail::checked_temperature(p);
    const double x = d / t;
    estimation::SpectralState s;
    s.populations = Vec(2);
    // logistic form; (1 - tanh)/2 cancels once D/T exceeds ~30
    s.populations << 1.0 / (1.0 + std::exp(-x)), 1.0 / (1.0 + std::exp(x));
    s.basis = CMat(2, 2);
    s.basis.col(0) = ground_state(p).state;
    s.basis.col(1) = excited_state(p);
    return s;
}

// derivatives with respect to (omega, g); T = 0 gives the pure ground-state manifold
inline std::vector<estimation::StateDerivative> gibbs_derivatives(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const auto [dphi_w, dphi_g] = mixing_angle_gradient(p);
    std::vector<estimation::StateDerivative> out;
    const double dphis[2] = {dphi_w, dphi_g};
    const double vals[2] = {p.omega, p.g};
    for (int a = 0; a < 2; ++a) {
        estimation::StateDerivative sd;
        sd.dpopulations = Vec::Zero(2);
        if (p.temperature > 0.0) {
            const double t = p.temperature;
            const double dx = vals[a] / (2.0 * t * d);
            const double dp = 0.5 * detail::sech2(d / (2.0 * t)) * dx;
            sd.dpopulations << dp, -dp;
        }
        sd.overlaps = CMat::Zero(2, 2);
        sd.overlaps(1, 0) = 0.5 * dphis[a];   // <e|d g>
        sd.overlaps(0, 1) = -0.5 * dphis[a];  // <g|d e>
        out.push_back(sd);
    }
    return out;
}

inline estimation::SpectralState ground_spectral(const LzParams& p) {
    estimation::SpectralState s;
    s.populations = Vec(2);
    s.populations << 1.0, 0.0;
    s.basis = CMat(2, 2);
    s.basis.col(0) = ground_state(p).state;
    s.basis.col(1) = excited_state(p);
    return s;
}

// rho = (I - tanh(x) n.sigma)/2 with n = (-g, 0, omega)/Delta gives
// L = -tanh(x) dx I - dx n.sigma - tanh(x) dn.sigma
inline SldPair sld_pair_thermal(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const double t = detail::checked_temperature(p);
    const double w = p.omega, g = p.g;
    const double th = std::tanh(d / (2.0 * t));
    const double u = 1.0 / (2.0 * t * d * d), v = th / (d * d * d);
    const CMat sx = detail::pauli('x'), sz = detail::pauli('z'), id = CMat::Identity(2, 2);

    SldPair out;
    out.l_omega = g * w * (u - v) * sx - (w * w * u + g * g * v) * sz - (w * th / (2.0 * t * d)) * id;
    out.l_g = (g * g * u + w * w * v) * sx - g * w * (u - v) * sz - (g * th / (2.0 * t * d)) * id;
    out.commutator_coeff = std::abs(th / (t * d));
    out.weak_trace = estimation::compatibility_trace(gibbs_state(p), out.l_omega, out.l_g);
    return out;
}

// the pair as printed; the sigma_z sign in L_g and most of L_omega differ from the exact SLD
inline SldPair sld_pair_thermal_printed(const LzParams& p) {
    const double d = detail::checked_gap(p);
    const double t = detail::checked_temperature(p);
    const double w = p.omega, g = p.g;
    const double th = std::tanh(d / (2.0 * t));
    const double d2 = d * d, d3 = d2 * d;
    const double alpha = g * th / (2.0 * t * d);
    const CMat sx = detail::pauli('x'), sz = detail::pauli('z'), id = CMat::Identity(2, 2);
    const double mix = g * th * th + w * (1.0 - th * th);

    SldPair out;
    out.l_g = (g * g / (2.0 * t * d2) + w * w * th / d3) * sx - (g * w / (2.0 * t * d2) + g * w * th / d3) * sz -
              alpha * id;
    out.l_omega = (g / (2.0 * t * d2 * d2)) * (d2 * mix - 2.0 * t * w * d * th) * sx -
                  ((w / (2.0 * t * d2)) * mix + g * g * th / d3) * sz - alpha * id;
    out.commutator_coeff = std::abs(th / (t * d));
    out.weak_trace = estimation::compatibility_trace(gibbs_state(p), out.l_omega, out.l_g);
    return out;
}

inline double effective_qfi(const LzParams& p) {
    if (p.omega == 0.0) throw DomainError("effective_qfi: omega = 0 leaves g/omega undefined");
    const double r = p.g / p.omega;
    return 1.0 / ((1.0 + r * r) * (1.0 + r * r));
}

// gradient of Omega = g/omega in (omega, g) order
inline Vec omega_ratio_jacobian(const LzParams& p) {
    if (p.omega == 0.0) throw DomainError("omega_ratio_jacobian: omega = 0 leaves g/omega undefined");
    Vec j(2);
    j << -p.g / (p.omega * p.omega), 1.0 / p.omega;
    return j;
}

// nonzero eigenpair of the ground-state QFIM: (g, -omega)/Delta with eigenvalue 1/Delta^2
inline EffectiveDirection effective_direction(const LzParams& p) {
    const double d = detail::checked_gap(p);
    Vec u(2);
    u << p.g / d, -p.omega / d;
    numerics::fix_sign(u);
    return {1.0 / (d * d), u};
}

inline double adiabatic_time(const LzParams& p, double gamma) {
    if (!(gamma > 0.0)) throw ValidationError("adiabatic_time: gamma must be positive");
    if (gamma >= 1.0) throw DomainError("adiabatic_time: gamma >= 1 violates the adiabatic condition");
    if (p.omega == 0.0) throw DomainError("adiabatic_time: omega must be nonzero");
    return (2.0 - std::sqrt(2.0)) / (2.0 * gamma * std::abs(p.omega));
}

} // namespace critmet::lz
