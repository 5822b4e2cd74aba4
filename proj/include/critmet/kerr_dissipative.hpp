// kerr_dissipative.hpp - parametrically pumped Kerr resonator in the Gaussian (chi -> 0) regime
//
// Quadrature drift A = [[-G, w - e], [-(w + e), -G]], diffusion 2G I, vacuum at t = 0.
// Propagator e^{At} = e^{-Gt}(C I + S B) with B = A + G I, B^2 = -(w^2 - e^2) I, and C, S the
// uniform cos/sin kernels of q = w^2 - e^2 (cosh/sinh past the exceptional point e = w).

#pragma once

#include <cmath>
#include <complex>

#include "critmet/gaussian.hpp"
#include "critmet/numerics.hpp"

namespace critmet::kerr {

using gaussian::GaussianDerivative;
using gaussian::GaussianState;
using gaussian::Mat2;

struct KerrParams {
    double omega0 = 1.0;
    double epsilon = 0.0;
    double gamma = 1.0;
    double n_max = 0.0;  // photon cap, only read by optimal_protocol
};

struct HomodyneCheck {
    double phi_star;
    double fi_opt;
    double qfi;
    double ratio;
};

struct OptimalProtocol {
    double epsilon_opt;
    double t_opt;
    double qfi_single;
    double qfi_total_rate;
};

inline double critical_pump(const KerrParams& p) { return std::hypot(p.omega0, p.gamma); }

namespace detail {

inline void check_below(const KerrParams& p, double margin = 0.0) {
    if (p.gamma < 0.0) throw ValidationError("KerrParams: gamma must be >= 0");
    if (!std::isfinite(p.omega0) || !std::isfinite(p.epsilon)) throw ValidationError("KerrParams: non-finite entries");
    if (std::abs(p.epsilon) >= critical_pump(p) * (1.0 - margin))
        throw DomainError("kerr: pump at or above threshold (epsilon >= epsilon_c)");
}

inline Mat2 b_matrix(double w, double e) {
    Mat2 b;
    b << 0.0, w - e, -(w + e), 0.0;
    return b;
}

// e^{-G t} times the osc_kernel entries; past the exceptional point the growth e^{kt} is folded
// into the decay so long transients do not overflow
inline numerics::OscKernel damped_kernel(double q, double t, double gamma) {
    if (q < 0.0) {
        const double k = std::sqrt(-q), x = k * t;
        if (x > 20.0) {
            const double grow = 0.5 * std::exp((k - gamma) * t), tail = std::exp(-2.0 * x);
            const double ch = grow * (1.0 + tail), sh = grow * (1.0 - tail);
            return {ch, sh / k, -t * sh / (2.0 * k), -(t * ch * k - sh) / (2.0 * k * k * k)};
        }
    }
    const auto o = numerics::osc_kernel(q, t);
    const double e = std::exp(-gamma * t);
    return {e * o.c, e * o.s, e * o.dc_dq, e * o.ds_dq};
}

} // namespace detail

inline Mat2 drift(const KerrParams& p) {
    return detail::b_matrix(p.omega0, p.epsilon) - p.gamma * Mat2::Identity();
}

// lambda_pm = G pm sqrt(e^2 - w^2)
inline std::pair<cplx, cplx> liouvillian_rates(const KerrParams& p) {
    const cplx r = std::sqrt(cplx(p.epsilon * p.epsilon - p.omega0 * p.omega0, 0.0));
    return {p.gamma + r, p.gamma - r};
}

inline GaussianState steady_state(const KerrParams& p) {
    detail::check_below(p);
    const double w = p.omega0, e = p.epsilon, g = p.gamma;
    const double ec2 = w * w + g * g, d = ec2 - e * e;
    GaussianState s;
    s.sigma << ec2 - w * e, -g * e, -g * e, ec2 + w * e;
    s.sigma /= d;
    return s;
}

inline GaussianDerivative steady_state_derivative(const KerrParams& p) {
    const auto s = steady_state(p);
    const double w = p.omega0, e = p.epsilon;
    const double d = w * w + p.gamma * p.gamma - e * e;
    GaussianDerivative out;
    out.dsigma << (2.0 * w - e) / d, 0.0, 0.0, (2.0 * w + e) / d;
    out.dsigma -= s.sigma * (2.0 * w / d);
    return out;
}

inline double steady_photon_number(const KerrParams& p) {
    const auto s = steady_state(p);
    return 0.25 * s.sigma.trace() - 0.5;
}

inline double qfi_steady(const KerrParams& p) {
    detail::check_below(p);
    const double n = steady_photon_number(p);
    const double e2 = p.epsilon * p.epsilon, ec2 = std::pow(critical_pump(p), 2);
    if (e2 == 0.0) return 0.0;
    return (2.0 * n + 8.0 * p.omega0 * p.omega0 * n * n / e2) / (2.0 * ec2 - e2);
}

// steady homodyne FI as printed, at quadrature angle phi
inline double homodyne_fi_steady_printed(const KerrParams& p, double phi) {
    detail::check_below(p);
    const double w = p.omega0, e = p.epsilon, g = p.gamma;
    const double ec2 = w * w + g * g;
    const double c = std::cos(2.0 * phi), s = std::sin(2.0 * phi);
    const double num = (g * g - w * w - e * e) * c + 2.0 * w * e + 2.0 * w * g * s;
    const double den = ec2 - e * (w * c - g * s);
    return e * e * num * num / (2.0 * std::pow(ec2 - e * e, 2) * den * den);
}

inline Mat2 propagator(const KerrParams& p, double t) {
    const auto k = detail::damped_kernel(p.omega0 * p.omega0 - p.epsilon * p.epsilon, t, p.gamma);
    return k.c * Mat2::Identity() + k.s * detail::b_matrix(p.omega0, p.epsilon);
}

inline GaussianState dynamics_covariance(const KerrParams& p, double t) {
    detail::check_below(p);
    if (t < 0.0) throw ValidationError("dynamics_covariance: t must be non-negative");
    const auto ss = steady_state(p);
    const Mat2 m = propagator(p, t);
    GaussianState out;
    out.sigma = ss.sigma + m * (Mat2::Identity() - ss.sigma) * m.transpose();
    out.sigma = 0.5 * (out.sigma + out.sigma.transpose()).eval();
    return out;
}

// d sigma(t) / d omega at omega0
inline GaussianDerivative dynamics_derivative(const KerrParams& p, double t) {
    detail::check_below(p);
    if (t < 0.0) throw ValidationError("dynamics_derivative: t must be non-negative");
    const double w = p.omega0;
    const auto k = detail::damped_kernel(w * w - p.epsilon * p.epsilon, t, p.gamma);
    const Mat2 b = detail::b_matrix(w, p.epsilon);
    Mat2 db;
    db << 0.0, 1.0, -1.0, 0.0;
    const Mat2 m = k.c * Mat2::Identity() + k.s * b;
    const Mat2 dm = 2.0 * w * k.dc_dq * Mat2::Identity() + 2.0 * w * k.ds_dq * b + k.s * db;
    const auto ss = steady_state(p);
    const auto dss = steady_state_derivative(p);
    const Mat2 rest = Mat2::Identity() - ss.sigma;
    GaussianDerivative out;
    out.dsigma = dss.dsigma + dm * rest * m.transpose() - m * dss.dsigma * m.transpose() + m * rest * dm.transpose();
    out.dsigma = 0.5 * (out.dsigma + out.dsigma.transpose()).eval();
    return out;
}

// e^2/(2(ec^2 - e^2)) [1 - e^{-2Gt}(C2 + G S2)], C2, S2 the kernels at time 2t
inline double photon_number_t(const KerrParams& p, double t) {
    detail::check_below(p);
    if (t < 0.0) throw ValidationError("photon_number_t: t must be non-negative");
    const double e2 = p.epsilon * p.epsilon;
    const double pref = e2 / (2.0 * (std::pow(critical_pump(p), 2) - e2));
    const auto k = detail::damped_kernel(p.omega0 * p.omega0 - e2, 2.0 * t, p.gamma);
    return pref * (1.0 - (k.c + p.gamma * k.s));
}

// the e > w branch exactly as printed (no 1/2 on the exponentials)
inline double photon_number_t_printed_above(const KerrParams& p, double t) {
    const double e2 = p.epsilon * p.epsilon;
    if (std::abs(p.epsilon) <= std::abs(p.omega0)) throw DomainError("photon_number_t_printed_above: needs epsilon > omega");
    const double k = std::sqrt(e2 - p.omega0 * p.omega0);
    const double pref = e2 / (2.0 * (std::pow(critical_pump(p), 2) - e2));
    const double lp = p.gamma + k, lm = p.gamma - k;
    return pref * (1.0 - (p.gamma / k + 1.0) * std::exp(-2.0 * lm * t) + (p.gamma / k - 1.0) * std::exp(-2.0 * lp * t));
}

inline double qfi_dynamic(const KerrParams& p, double t) {
    detail::check_below(p, 1e-9);
    if (t == 0.0) return 0.0;
    return gaussian::qfi_gaussian(dynamics_covariance(p, t), dynamics_derivative(p, t));
}

// unitary near-critical scaling [2N + (8/9) N^2] t^2
inline double qfi_unitary_scaling(double n, double t) { return (2.0 * n + 8.0 / 9.0 * n * n) * t * t; }

inline HomodyneCheck homodyne_check(const GaussianState& s, const GaussianDerivative& d, int grid = 64) {
    const auto opt = gaussian::homodyne_fi_optimal(s, d, grid);
    const double q = gaussian::qfi_gaussian(s, d);
    const double ratio = (q > 0.0) ? opt.fi / q : (opt.fi == 0.0 ? 1.0 : INFINITY);
    return {opt.phi_star, opt.fi, q, ratio};
}

inline HomodyneCheck homodyne_check_steady(const KerrParams& p, int grid = 64) {
    return homodyne_check(steady_state(p), steady_state_derivative(p), grid);
}

inline HomodyneCheck homodyne_check_at(const KerrParams& p, double t, int grid = 64) {
    return homodyne_check(dynamics_covariance(p, t), dynamics_derivative(p, t), grid);
}

inline double optimal_epsilon(double n_max, double ec) {
    return std::sqrt(2.0 * n_max / (1.0 + 2.0 * n_max)) * ec;
}

inline OptimalProtocol optimal_protocol(const KerrParams& p) {
    if (!(p.n_max >= 1.0)) throw ValidationError("optimal_protocol: n_max must be >= 1");
    if (!(p.gamma > 0.0)) throw DomainError("optimal_protocol: needs gamma > 0");
    if (std::abs(p.omega0 - p.gamma) > 1e-12 * p.gamma)
        throw DomainError("optimal_protocol: the optimum is stated for omega0 = gamma");
    const double n = p.n_max;
    OptimalProtocol out;
    out.epsilon_opt = optimal_epsilon(n, critical_pump(p));
    out.t_opt = (1.0 + 2.0 * n + std::sqrt(2.0 * n * (1.0 + 2.0 * n))) / (2.0 * p.gamma);
    KerrParams q = p;
    q.epsilon = out.epsilon_opt;
    out.qfi_single = qfi_steady(q);
    out.qfi_total_rate = out.qfi_single / out.t_opt;
    return out;
}

} // namespace critmet::kerr
