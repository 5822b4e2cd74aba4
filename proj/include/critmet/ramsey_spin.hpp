// ramsey_spin.hpp - collective-spin Ramsey probes in the symmetric Dicke subspace
//
// Index k = m + n/2 runs 0..n, so k = 0 is |m = -n/2> (all spins down).

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "critmet/numerics.hpp"

namespace critmet::ramsey {

struct DickeState {
    int n = 0;
    CVec amplitudes;  // length n + 1
};

struct CollectiveOps {
    CMat sx, sy, sz;
};

enum class Twist { one_axis, two_axis };

struct TradeoffRow {
    double t;
    double signal2;  // <Sx>^2, slope of the Ramsey signal per unit interrogation time
    double noise;    // smallest variance in the plane orthogonal to x
    double snr;
};

inline void validate(const DickeState& s) {
    if (s.n < 1) throw ValidationError("DickeState: n must be >= 1");
    if (s.amplitudes.size() != s.n + 1) throw ValidationError("DickeState: need n + 1 amplitudes");
    if (std::abs(s.amplitudes.norm() - 1.0) > 1e-10) throw ValidationError("DickeState: not normalized");
}

inline CollectiveOps collective_ops(int n) {
    if (n < 1) throw ValidationError("collective_ops: n must be >= 1");
    const int d = n + 1;
    const double s = 0.5 * n;
    CMat sp = CMat::Zero(d, d);
    CMat sz = CMat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = k - s;
        sz(k, k) = m;
        if (k + 1 < d) sp(k + 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    const CMat sm = sp.adjoint();
    CollectiveOps ops;
    ops.sx = 0.5 * (sp + sm);
    ops.sy = cplx(0.0, -0.5) * (sp - sm);
    ops.sz = sz;
    return ops;
}

// amplitudes ~ sqrt(C(n,k)) cos(theta/2)^(n-k) sin(theta/2)^k e^{i k phi}; the Bloch
// vector is (sin th cos ph, -sin th sin ph, -cos th) * n/2 in this convention
inline DickeState css(int n, double theta, double phi) {
    if (n < 1) throw ValidationError("css: n must be >= 1");
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    DickeState out;
    out.n = n;
    out.amplitudes.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        // log-binomial keeps large n finite
        const double lb = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        const double mag = std::exp(0.5 * lb) * std::pow(c, n - k) * std::pow(s, k);
        out.amplitudes[k] = std::polar(mag, k * phi);
    }
    out.amplitudes.normalize();
    return out;
}

// cat state of the two CSS polarized along -y and +y
inline DickeState ghz_state(int n) {
    const double h = 0.5 * std::numbers::pi;
    DickeState a = css(n, h, h), b = css(n, h, -h);
    DickeState out;
    out.n = n;
    out.amplitudes = (a.amplitudes + b.amplitudes).normalized();
    return out;
}

inline cplx expect(const DickeState& s, const CMat& op) { return s.amplitudes.dot(op * s.amplitudes); }

inline double variance(const DickeState& s, const CMat& op) {
    const double m = expect(s, op).real();
    return expect(s, op * op).real() - m * m;
}

inline double css_snr(int n, double omega, double t) {
    if (t < 0.0) throw ValidationError("css_snr: t must be non-negative");
    const double c = std::cos(omega * t);
    return n * t * t * c * c;
}

inline double ghz_snr(int n, double /*omega*/, double t) {
    if (t < 0.0) throw ValidationError("ghz_snr: t must be non-negative");
    return static_cast<double>(n) * n * t * t;
}

inline double qfi_rotation(const DickeState& psi, double t) {
    validate(psi);
    if (t < 0.0) throw ValidationError("qfi_rotation: t must be non-negative");
    const auto ops = collective_ops(psi.n);
    return 4.0 * t * t * variance(psi, ops.sy);
}

inline CMat twist_hamiltonian(Twist kind, double chi, int n) {
    const auto ops = collective_ops(n);
    if (kind == Twist::one_axis) return chi * ops.sz * ops.sz;
    return chi * (ops.sz * ops.sz - ops.sy * ops.sy);
}

inline double default_step(const CMat& h, double chi, int n) {
    const double a = 0.05 / (std::abs(chi) * n * n);
    const double b = 0.05 / std::max(numerics::norm_bound(h), 1e-300);
    return std::min(a, b);
}

inline DickeState twist_evolve(Twist kind, double chi, double t, const DickeState& psi0) {
    validate(psi0);
    if (t < 0.0) throw ValidationError("twist_evolve: t must be non-negative");
    if (std::abs(chi) * t * psi0.n > 50.0)
        throw ConfigError("twist_evolve: chi*t*n exceeds 50; dynamics would be under-resolved");
    if (t == 0.0 || chi == 0.0) return psi0;
    const CMat h = twist_hamiltonian(kind, chi, psi0.n);
    DickeState out;
    out.n = psi0.n;
    out.amplitudes = numerics::propagate_schrodinger(h, psi0.amplitudes, t, default_step(h, chi, psi0.n));
    return out;
}

namespace detail {

inline TradeoffRow tradeoff_row(double t, const DickeState& s, const CollectiveOps& ops) {
    const double sx = expect(s, ops.sx).real();
    const double my = expect(s, ops.sy).real(), mz = expect(s, ops.sz).real();
    const double cyy = expect(s, ops.sy * ops.sy).real() - my * my;
    const double czz = expect(s, ops.sz * ops.sz).real() - mz * mz;
    const double cyz = 0.5 * expect(s, ops.sy * ops.sz + ops.sz * ops.sy).real() - my * mz;
    const double tr = 0.5 * (cyy + czz), dif = 0.5 * (cyy - czz);
    const double vmin = tr - std::sqrt(dif * dif + cyz * cyz);
    return {t, sx * sx, vmin, sx * sx / vmin};
}

} // namespace detail

// two-axis twisting from the x-polarized CSS, propagated incrementally along t_grid
inline std::vector<TradeoffRow> snr_tradeoff_curve(int n, double chi, const std::vector<double>& t_grid) {
    if (n < 1) throw ValidationError("snr_tradeoff_curve: n must be >= 1");
    if (t_grid.empty()) throw ValidationError("snr_tradeoff_curve: empty time grid");
    for (size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0.0) throw ValidationError("snr_tradeoff_curve: times must be non-negative");
        if (i > 0 && t_grid[i] < t_grid[i - 1]) throw ValidationError("snr_tradeoff_curve: time grid must be monotone");
    }
    if (std::abs(chi) * t_grid.back() * n > 50.0)
        throw ConfigError("snr_tradeoff_curve: chi*t*n exceeds 50; dynamics would be under-resolved");
    const auto ops = collective_ops(n);
    const CMat h = twist_hamiltonian(Twist::two_axis, chi, n);
    const double dt = default_step(h, chi, n);
    DickeState s = css(n, 0.5 * std::numbers::pi, 0.0);
    double now = 0.0;
    std::vector<TradeoffRow> rows;
    for (double t : t_grid) {
        if (t > now && chi != 0.0) s.amplitudes = numerics::propagate_schrodinger(h, s.amplitudes, t - now, dt);
        now = t;
        rows.push_back(detail::tradeoff_row(t, s, ops));
    }
    return rows;
}

// index of the first interior local minimum of the noise column, or -1
inline int first_noise_minimum(const std::vector<TradeoffRow>& rows) {
    for (size_t i = 1; i + 1 < rows.size(); ++i)
        if (rows[i].noise < rows[i - 1].noise && rows[i].noise <= rows[i + 1].noise) return static_cast<int>(i);
    return -1;
}

inline int argmax_snr(const std::vector<TradeoffRow>& rows) {
    int best = 0;
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i].snr > rows[static_cast<size_t>(best)].snr) best = static_cast<int>(i);
    return best;
}

// Q(theta, phi) = |<css(theta, phi)|psi>|^2, rows follow theta_grid
inline Mat husimi_q(const DickeState& psi, const std::vector<double>& theta_grid, const std::vector<double>& phi_grid) {
    validate(psi);
    if (theta_grid.empty() || phi_grid.empty()) throw ValidationError("husimi_q: grids must be nonempty");
    Mat q(static_cast<Eigen::Index>(theta_grid.size()), static_cast<Eigen::Index>(phi_grid.size()));
    for (size_t i = 0; i < theta_grid.size(); ++i)
        for (size_t j = 0; j < phi_grid.size(); ++j) {
            const auto c = css(psi.n, theta_grid[i], phi_grid[j]);
            q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::min(1.0, std::norm(c.amplitudes.dot(psi.amplitudes)));
        }
    return q;
}

} // namespace critmet::ramsey
