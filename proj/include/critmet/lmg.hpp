// lmg.hpp - isotropic Lipkin-Meshkov-Glick model H = omega Sz - (g/N) Sx^2 in the Dicke basis
//
// Sx^2 only couples m to m, m +- 2, so H splits into two parity blocks (even / odd Dicke
// index). Sz is diagonal, so perturbation sums for d/d omega never cross blocks; eigenstates
// are computed per block and merged into one ascending spectrum.

#pragma once

#include <cmath>
#include <vector>

#include "critmet/numerics.hpp"
#include "critmet/ramsey_spin.hpp"

namespace critmet::lmg {

struct LmgParams {
    int n = 10;
    double omega = 1.0;
    double g = 0.0;
};

struct LevelQfi {
    double qfi = 0.0;
    bool degenerate_excluded = false;
};

struct ThermodynamicScalings {
    double static_qfi;
    double adiabatic;
    double excited_opt;
};

inline void validate(const LmgParams& p) {
    if (p.n < 2) throw ValidationError("LmgParams: n must be >= 2");
    if (!std::isfinite(p.omega) || !std::isfinite(p.g)) throw ValidationError("LmgParams: non-finite omega or g");
}

inline Mat hamiltonian(const LmgParams& p) {
    validate(p);
    const auto ops = ramsey::collective_ops(p.n);
    const CMat h = p.omega * ops.sz - (p.g / p.n) * ops.sx * ops.sx;
    Mat out = h.real();
    return 0.5 * (out + out.transpose());
}

namespace detail {

struct Level {
    double energy;
    int parity;     // Dicke index parity
    int local;      // column within the parity block
};

struct Spectrum {
    int n;
    double hnorm;
    numerics::EigenSystem block[2];
    std::vector<int> index[2];  // Dicke indices per block
    std::vector<Level> levels;  // ascending
};

inline Spectrum spectrum(const LmgParams& p) {
    const Mat h = hamiltonian(p);
    Spectrum s;
    s.n = p.n;
    s.hnorm = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
    for (int par = 0; par < 2; ++par) {
        for (int k = par; k <= p.n; k += 2) s.index[par].push_back(k);
        const auto d = static_cast<Eigen::Index>(s.index[par].size());
        Mat b(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) b(i, j) = h(s.index[par][i], s.index[par][j]);
        s.block[par] = numerics::eigh_symmetric(b);
        for (Eigen::Index i = 0; i < d; ++i)
            s.levels.push_back({s.block[par].values[i], par, static_cast<int>(i)});
    }
    std::stable_sort(s.levels.begin(), s.levels.end(), [](const Level& a, const Level& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.parity < b.parity;
    });
    return s;
}

inline double sz_of(const Spectrum& s, int par, int k) { return s.index[par][static_cast<size_t>(k)] - 0.5 * s.n; }

} // namespace detail

inline Vec energies(const LmgParams& p) {
    const auto s = detail::spectrum(p);
    Vec e(static_cast<Eigen::Index>(s.levels.size()));
    for (size_t i = 0; i < s.levels.size(); ++i) e[static_cast<Eigen::Index>(i)] = s.levels[i].energy;
    return e;
}

// eigenvector of a level in the full Dicke basis
inline Vec eigenstate(const LmgParams& p, int level) {
    const auto s = detail::spectrum(p);
    if (level < 0 || level > p.n) throw ValidationError("eigenstate: level beyond spectrum");
    const auto& lv = s.levels[static_cast<size_t>(level)];
    Vec v = Vec::Zero(p.n + 1);
    const auto& blk = s.block[lv.parity];
    for (size_t i = 0; i < s.index[lv.parity].size(); ++i)
        v[s.index[lv.parity][i]] = blk.vectors(static_cast<Eigen::Index>(i), lv.local);
    return v;
}

namespace detail {

// matrix elements <m|Sz|level> and gaps E_level - E_m within the level's parity block
struct Perturbation {
    std::vector<double> elements, gaps;
    double mean = 0.0, second = 0.0;
    bool excluded = false;
};

inline Perturbation perturbation(const LmgParams& p, int level) {
    if (level < 0 || level > p.n) throw ValidationError("lmg: requested level beyond spectrum");
    const auto s = spectrum(p);
    const auto& lv = s.levels[static_cast<size_t>(level)];
    const auto& blk = s.block[lv.parity];
    const auto d = blk.values.size();
    Vec szv(d);
    for (Eigen::Index i = 0; i < d; ++i) szv[i] = sz_of(s, lv.parity, static_cast<int>(i)) * blk.vectors(i, lv.local);
    const Vec amp = blk.vectors.transpose() * szv;
    Perturbation out;
    out.mean = amp[lv.local];
    out.second = szv.squaredNorm();
    for (Eigen::Index m = 0; m < d; ++m) {
        if (m == lv.local) continue;
        const double gap = blk.values[lv.local] - blk.values[m];
        if (std::abs(gap) <= 1e-10 * s.hnorm) {
            if (std::abs(amp[m]) > 1e-12) out.excluded = true;
            continue;
        }
        out.elements.push_back(amp[m]);
        out.gaps.push_back(gap);
    }
    return out;
}

} // namespace detail

inline LevelQfi qfi_eigenstate_flagged(const LmgParams& p, int level) {
    const auto pt = detail::perturbation(p, level);
    double q = 0.0;
    for (size_t i = 0; i < pt.elements.size(); ++i) q += pt.elements[i] * pt.elements[i] / (pt.gaps[i] * pt.gaps[i]);
    return {4.0 * q, pt.excluded};
}

inline double qfi_eigenstate(const LmgParams& p, int level) { return qfi_eigenstate_flagged(p, level).qfi; }

inline double snr_sz_eigenstate(const LmgParams& p, int level) {
    const auto pt = detail::perturbation(p, level);
    double ds = 0.0;
    for (size_t i = 0; i < pt.elements.size(); ++i) ds += pt.elements[i] * pt.elements[i] / pt.gaps[i];
    ds *= 2.0;
    const double var = pt.second - pt.mean * pt.mean;
    if (var <= 1e-14) throw DomainError("snr_sz_eigenstate: Sz variance vanishes in this eigenstate");
    return ds * ds / var;
}

// coarse scan over [g_lo, g_hi] then golden section; returns (g*, qfi*)
inline std::pair<double, double> optimal_coupling(int n, double omega, int level, double g_lo, double g_hi,
                                                  int coarse = 40) {
    if (!(g_hi > g_lo) || coarse < 3) throw ValidationError("optimal_coupling: bad search interval");
    auto f = [&](double g) { return qfi_eigenstate({n, omega, g}, level); };
    const double h = (g_hi - g_lo) / coarse;
    int best = 0;
    double fb = f(g_lo);
    for (int i = 1; i <= coarse; ++i) {
        const double v = f(g_lo + i * h);
        if (v > fb) {
            fb = v;
            best = i;
        }
    }
    double a = g_lo + std::max(0, best - 1) * h, b = g_lo + std::min(coarse, best + 1) * h;
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-6 * std::max(1.0, std::abs(b))) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b), fx = f(x);
    if (fx >= fb) return {x, fx};
    return {g_lo + best * h, fb};
}

// xi = (1/4) ln(omega / (omega - g))
inline double squeezed_fock_qfi(int n_level, double omega, double g) {
    if (n_level < 0) throw ValidationError("squeezed_fock_qfi: n_level must be >= 0");
    if (!(omega > 0.0)) throw DomainError("squeezed_fock_qfi: omega must be positive");
    if (g >= omega) throw DomainError("squeezed_fock_qfi: g >= omega is past the critical point");
    const double dxi = 0.25 * (1.0 / omega - 1.0 / (omega - g));
    const double nn = n_level;
    return 2.0 * (nn * nn + nn + 1.0) * dxi * dxi;
}

// printed quench forms with delta = 4(1 - g/omega): oscillatory below, t^6 at, sinh above
inline double quench_qfi(double omega, double g, double t) {
    if (t < 0.0) throw ValidationError("quench_qfi: t must be non-negative");
    if (!(omega > 0.0)) throw DomainError("quench_qfi: omega must be positive");
    const double delta = 4.0 * (1.0 - g / omega);
    const double w2 = omega * omega, t2 = t * t;
    if (std::abs(delta) <= 1e-8) return w2 * w2 * t2 * t2 * t2 / 18.0;
    if (delta > 0.0) {
        const double x = std::sqrt(delta) * omega * t;
        double f;
        if (x < 1e-2) {
            const double x2 = x * x;
            f = -1.0 / 6.0 + x2 / 120.0 - x2 * x2 / 5040.0;
        } else {
            f = (std::sin(x) - x) / (x * x * x);
        }
        return 2.0 * w2 * w2 * t2 * t2 * t2 * f * f;
    }
    const double ad = -delta;
    const double sh = std::sinh(std::sqrt(ad) * omega * t);
    return 2.0 * g * g * g / (w2 * w2 * omega) * sh * sh / (ad * ad * ad);
}

// Heisenberg flow of (x, p) after a quench from the vacuum: x' = omega p, p' = -(omega - g) x
inline Mat quench_flow(double omega, double g, double t) {
    const auto k = numerics::osc_kernel(omega * (omega - g), t);
    Mat m(2, 2);
    m << k.c, omega * k.s, -(omega - g) * k.s, k.c;
    return m;
}

inline double quench_photon_number(double omega, double g, double t) {
    if (t < 0.0) throw ValidationError("quench_photon_number: t must be non-negative");
    const Mat m = quench_flow(omega, g, t);
    return 0.25 * ((m * m.transpose()).trace() - 2.0);
}

// exact pure-Gaussian QFI of the vacuum-initial quench, 1/4 Tr[(S^-1 dS)^2]
inline double quench_qfi_gaussian(double omega, double g, double t) {
    if (t < 0.0) throw ValidationError("quench_qfi_gaussian: t must be non-negative");
    const double q = omega * (omega - g), dq = 2.0 * omega - g;
    const auto k = numerics::osc_kernel(q, t);
    Mat m(2, 2), dm(2, 2);
    m << k.c, omega * k.s, -(omega - g) * k.s, k.c;
    const double dc = k.dc_dq * dq, ds = k.ds_dq * dq;
    dm << dc, k.s + omega * ds, -k.s - (omega - g) * ds, dc;
    const Mat sig = m * m.transpose();
    const Mat dsig = dm * m.transpose() + m * dm.transpose();
    const Mat a = sig.inverse() * dsig;
    return 0.25 * (a * a).trace();
}

inline ThermodynamicScalings thermodynamic_qfi_scalings(int n, double omega, double gamma, double t) {
    if (n < 2) throw ValidationError("thermodynamic_qfi_scalings: n must be >= 2");
    if (!(omega > 0.0)) throw DomainError("thermodynamic_qfi_scalings: omega must be positive");
    const double nd = n;
    const double n13 = std::cbrt(nd);
    return {n13 * n13 * n13 * n13 / (omega * omega), gamma * gamma * n13 * n13 * t * t,
            gamma * gamma * n13 * n13 * n13 * n13 * t * t / 6.0};
}

// level with the largest QFI at its own optimal coupling, scanning levels 0..max_level
inline int best_level(int n, double omega, int max_level, double g_lo, double g_hi) {
    int best = 0;
    double qb = -1.0;
    for (int lev = 0; lev <= max_level; ++lev) {
        const double q = optimal_coupling(n, omega, lev, g_lo, g_hi).second;
        if (q > qb) {
            qb = q;
            best = lev;
        }
    }
    return best;
}

} // namespace critmet::lmg
