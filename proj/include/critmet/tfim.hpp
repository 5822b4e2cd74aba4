// tfim.hpp - transverse-field Ising ring H = omega sum sz_i - g sum sx_i sx_{i+1}
//
// Ground state lives in the sector with momenta k = pi(2j+1)/N, j = 0..N/2-1; each k
// is an independent two-level problem. Also carries a full-Hilbert-space ED reference
// for small rings.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "critmet/numerics.hpp"

namespace critmet::tfim {

struct TfimParams {
    double omega = 1.0;
    double g = 1.0;
    int n = 8;
};

// theta is half the Bloch angle of the block: tan(2 theta) = g sin k / (g cos k - omega)
struct MomentumBlock {
    double k;
    double theta;
    double dtheta_domega;
};

inline void validate(const TfimParams& p) {
    if (p.n < 4 || p.n % 2 != 0) throw ValidationError("TfimParams: n must be even and >= 4");
    if (!std::isfinite(p.omega) || !std::isfinite(p.g)) throw ValidationError("TfimParams: non-finite omega or g");
}

inline std::vector<double> momenta(int n) {
    std::vector<double> ks;
    for (int j = 0; j < n / 2; ++j) ks.push_back(std::numbers::pi * (2 * j + 1) / n);
    return ks;
}

namespace detail {

inline double r2(double omega, double g, double k) { return g * g + omega * omega - 2.0 * g * omega * std::cos(k); }

inline double r2_checked(double omega, double g, double k) {
    const double v = r2(omega, g, k);
    if (!(v > 0.0)) throw DomainError("tfim: vanishing block gap at k = " + std::to_string(k));
    return v;
}

} // namespace detail

inline std::vector<MomentumBlock> blocks(const TfimParams& p) {
    validate(p);
    std::vector<MomentumBlock> out;
    for (double k : momenta(p.n)) {
        const double rr = detail::r2_checked(p.omega, p.g, k);
        // atan2 never crosses its cut here: the first argument keeps the sign of g for k in (0, pi)
        const double th = 0.5 * std::atan2(p.g * std::sin(k), p.g * std::cos(k) - p.omega);
        out.push_back({k, th, p.g * std::sin(k) / (2.0 * rr)});
    }
    return out;
}

inline double dispersion(const TfimParams& p, double k) {
    return -2.0 * std::sqrt(detail::r2(p.omega, p.g, k));
}

inline double fidelity(const TfimParams& p, double omega_prime) {
    const auto a = blocks(p);
    const auto b = blocks({omega_prime, p.g, p.n});
    double f = 1.0;
    for (size_t i = 0; i < a.size(); ++i) f *= std::cos(a[i].theta - b[i].theta);
    return std::abs(f);
}

inline double fidelity_susceptibility(const TfimParams& p) {
    double s = 0.0;
    for (const auto& b : blocks(p)) s += b.dtheta_domega * b.dtheta_domega;
    return s;
}

inline double qfi(const TfimParams& p) {
    validate(p);
    double s = 0.0;
    for (double k : momenta(p.n)) {
        const double rr = detail::r2_checked(p.omega, p.g, k);
        const double sk = std::sin(k);
        s += p.g * p.g * sk * sk / (rr * rr);
    }
    return s;
}

// the closed form quoted for g = omega
inline double qfi_critical_closed_form(int n, double omega) {
    return (static_cast<double>(n) * n + n) / (8.0 * omega * omega);
}

inline double gap(const TfimParams& p) {
    validate(p);
    return 2.0 * std::sqrt(detail::r2(p.omega, p.g, 2.0 * std::numbers::pi / p.n));
}

inline double gap_approx(const TfimParams& p) {
    validate(p);
    return 4.0 * std::numbers::pi * p.omega / p.n;
}

// ramp from g = 0; k = 2 pi / N
inline double adiabatic_time(const TfimParams& p, double gamma) {
    validate(p);
    if (!(gamma > 0.0) || gamma >= 1.0) throw DomainError("adiabatic_time: gamma must lie in (0, 1)");
    if (p.omega == 0.0) throw DomainError("adiabatic_time: omega must be nonzero");
    const double k = 2.0 * std::numbers::pi / p.n;
    const double root = std::sqrt(detail::r2_checked(p.omega, p.g, k));
    const double bracket = 1.0 / std::tan(k) - (p.g - p.omega * std::cos(k)) / (std::sin(k) * root);
    return bracket / (4.0 * gamma * p.omega);
}

inline double adiabatic_time_critical_limit(int n, double omega, double gamma) {
    return n / (8.0 * std::numbers::pi * gamma * omega);
}

inline double qfi_from_time(double t, double gamma, double omega) {
    const double pi = std::numbers::pi;
    return 8.0 * pi * pi * gamma * gamma * t * t + pi * gamma * t / omega;
}

// <sigma_z> with its sign; ground state has it opposite to omega
inline double magnetization_z_signed(const TfimParams& p) {
    validate(p);
    double s = 0.0;
    for (double k : momenta(p.n)) s += (p.omega - p.g * std::cos(k)) / std::sqrt(detail::r2_checked(p.omega, p.g, k));
    return -2.0 * s / p.n;
}

inline double magnetization_z(const TfimParams& p) { return std::abs(magnetization_z_signed(p)); }

// d<sigma_z>/d omega
inline double susceptibility_z(const TfimParams& p) {
    validate(p);
    double s = 0.0;
    for (double k : momenta(p.n)) {
        const double rr = detail::r2_checked(p.omega, p.g, k);
        const double sk = std::sin(k);
        s += p.g * p.g * sk * sk / (rr * std::sqrt(rr));
    }
    return -2.0 * s / p.n;
}

inline double local_snr(const TfimParams& p) {
    const double m = magnetization_z_signed(p);
    const double var = 1.0 - m * m;
    if (var <= 1e-14) throw DomainError("local_snr: single-site variance vanishes (fully polarized readout)");
    const double chi = susceptibility_z(p);
    return chi * chi / var;
}

// G_r = (2/N) sum_k [cos(rk)(g cos k - omega) - g sin(rk) sin k] / r_k
inline double two_point_g(const TfimParams& p, int r) {
    validate(p);
    double s = 0.0;
    for (double k : momenta(p.n)) {
        const double num = std::cos(r * k) * (p.g * std::cos(k) - p.omega) - p.g * std::sin(r * k) * std::sin(k);
        s += num / std::sqrt(detail::r2_checked(p.omega, p.g, k));
    }
    return 2.0 * s / p.n;
}

inline double two_point_zz(const TfimParams& p, int r) {
    validate(p);
    if (r < 1 || r > p.n - 1) throw ValidationError("two_point_zz: r must lie in [1, N-1]");
    const double m = magnetization_z_signed(p);
    return m * m - two_point_g(p, r) * two_point_g(p, -r);
}

// Var(S_z) with S_z = (1/2) sum sigma_z, using translation invariance
inline double collective_variance(const TfimParams& p) {
    validate(p);
    const double m = magnetization_z_signed(p);
    double conn = 0.0;
    for (int r = 1; r < p.n; ++r) conn -= two_point_g(p, r) * two_point_g(p, -r);
    return 0.25 * p.n * ((1.0 - m * m) + conn);
}

inline double collective_snr(const TfimParams& p) {
    const double var = collective_variance(p);
    if (var <= 1e-14) throw DomainError("collective_snr: collective variance vanishes (fully polarized readout)");
    const double slope = 0.5 * p.n * susceptibility_z(p);
    return slope * slope / var;
}

// ---- exact diagonalization on the full 2^N space (bit i set = spin i up) ----

struct EdGround {
    int n;
    Vec energies;
    Mat vectors;
    Vec state;  // ground
};

inline EdGround ed_ground(const TfimParams& p) {
    validate(p);
    if (p.n > 12) throw ValidationError("ed_ground: N <= 12 only");
    const int dim = 1 << p.n;
    Mat h = Mat::Zero(dim, dim);
    for (int s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (int i = 0; i < p.n; ++i) diag += ((s >> i) & 1) ? 1.0 : -1.0;
        h(s, s) += p.omega * diag;
        for (int i = 0; i < p.n; ++i) {
            const int j = (i + 1) % p.n;
            h(s ^ (1 << i) ^ (1 << j), s) -= p.g;
        }
    }
    const auto es = numerics::eigh_symmetric(h);
    return {p.n, es.values, es.vectors, es.vectors.col(0)};
}

inline double ed_sigma_z(const EdGround& e, int i) {
    double m = 0.0;
    for (Eigen::Index s = 0; s < e.state.size(); ++s) m += e.state[s] * e.state[s] * (((s >> i) & 1) ? 1.0 : -1.0);
    return m;
}

inline double ed_zz(const EdGround& e, int i, int j) {
    double m = 0.0;
    for (Eigen::Index s = 0; s < e.state.size(); ++s) {
        const double a = ((s >> i) & 1) ? 1.0 : -1.0, b = ((s >> j) & 1) ? 1.0 : -1.0;
        m += e.state[s] * e.state[s] * a * b;
    }
    return m;
}

inline double ed_fidelity(const TfimParams& p, double omega_prime) {
    const auto a = ed_ground(p);
    const auto b = ed_ground({omega_prime, p.g, p.n});
    return std::abs(a.state.dot(b.state));
}

// 4 sum_{n>0} |<n| dH/domega |0>|^2 / (E_n - E_0)^2 with dH/domega = sum sigma_z (diagonal)
inline double ed_qfi(const EdGround& e) {
    const auto dim = e.state.size();
    Vec gen(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        double d = 0.0;
        for (int i = 0; i < e.n; ++i) d += ((s >> i) & 1) ? 1.0 : -1.0;
        gen[s] = d * e.state[s];
    }
    const double scale = std::max(1.0, e.energies.cwiseAbs().maxCoeff());
    if (e.energies[1] - e.energies[0] < 1e-10 * scale) throw DomainError("ed_qfi: degenerate ground state");
    const Vec amp = e.vectors.transpose() * gen;
    double q = 0.0;
    for (Eigen::Index k = 1; k < dim; ++k) {
        const double de = e.energies[k] - e.energies[0];
        q += amp[k] * amp[k] / (de * de);
    }
    return 4.0 * q;
}

} // namespace critmet::tfim
