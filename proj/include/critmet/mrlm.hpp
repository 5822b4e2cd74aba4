// mrlm.hpp - Majorana resonant-level model at the Emery-Kivelson point
//
// <n_d> = 1/2 - Im{ (e/(pi D)) [psi(1/2 + (G + iD)/(4 pi T)) - psi(1/2 + (G - iD)/(4 pi T))] },
// D = sqrt(4 e^2 - G^2) taken complex when 2|e| < G.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "critmet/numerics.hpp"

namespace critmet::mrlm {

struct MrlmParams {
    double eps_d = 0.0;
    double gamma_hyb = 1.0;
    double temperature = 0.01;
};

struct FanRow {
    double eps_d, temperature, occupation, qfi;
};

struct FanMax {
    double eps_d, t_star, qfi_max;
};

struct FanScan {
    std::vector<FanRow> rows;
    std::vector<FanMax> per_eps;
};

inline void validate(const MrlmParams& p) {
    if (!(p.gamma_hyb > 0.0)) throw ValidationError("MrlmParams: gamma_hyb must be positive");
    if (!(p.temperature > 0.0)) throw ValidationError("MrlmParams: temperature must be positive");
    if (!std::isfinite(p.eps_d)) throw ValidationError("MrlmParams: eps_d must be finite");
}

namespace detail {

// the bracket as a function of D^2 (it is even in D)
inline double occupation_at(double eps, double gam, double temp, double d2) {
    const double pi = std::numbers::pi;
    const cplx d = std::sqrt(cplx(d2, 0.0));
    const double s = 4.0 * pi * temp;
    cplx z1 = 0.5 + (gam + cplx(0, 1) * d) / s;
    const cplx z2 = 0.5 + (gam - cplx(0, 1) * d) / s;
    if (d2 < 0.0) {
        // G - kappa cancels for small eps; use (G^2 - kappa^2)/(G + kappa)
        const double kappa = std::sqrt(-d2);
        z1 = 0.5 + (gam * gam + d2) / (gam + kappa) / s;
    }
    const cplx x = eps / (pi * d) * (numerics::digamma(z1) - numerics::digamma(z2));
    if (std::abs(x.real()) > 1e-10 * std::max(1.0, std::abs(x)))
        throw NumericalError("dot_occupation: bracket is not purely imaginary (residue " + std::to_string(x.real()) + ")");
    return 0.5 - x.imag();
}

// near D = 0 the digamma difference cancels. With a = 1/2 + G/s, b = D/s,
// [psi(a+ib) - psi(a-ib)]/(2ib) = sum_k 1/((k+a)^2 + b^2), analytic in b^2.
// Direct sum up to x0 >= 100, Euler-Maclaurin tail after that.
inline double occupation_series(double eps, double gam, double temp, double d2) {
    const double pi = std::numbers::pi;
    const double s = 4.0 * pi * temp;
    const double a = 0.5 + gam / s, b2 = d2 / (s * s);
    const int k_direct = a < 100.0 ? static_cast<int>(std::ceil(100.0 - a)) : 0;
    double sum = 0.0;
    for (int k = 0; k < k_direct; ++k) {
        const double x = k + a;
        sum += 1.0 / (x * x + b2);
    }
    const double x0 = k_direct + a, u = b2 / (x0 * x0);
    // atan(sqrt u)/sqrt u, |u| <= 1e-4 here
    double g = 0.0, term = 1.0;
    for (int n = 0; n < 8; ++n, term *= -u) g += term / (2 * n + 1);
    const double q = x0 * x0 + b2;
    const double f0 = 1.0 / q, f1 = -2.0 * x0 / (q * q), f3 = -24.0 * x0 * (x0 * x0 - b2) / (q * q * q * q);
    sum += g / x0 + 0.5 * f0 - f1 / 12.0 + f3 / 720.0;
    return 0.5 - 2.0 * eps / (pi * s) * sum;
}

} // namespace detail

inline double dot_occupation(const MrlmParams& p) {
    validate(p);
    if (p.eps_d == 0.0) return 0.5;
    const double g2 = p.gamma_hyb * p.gamma_hyb;
    const double d2 = 4.0 * p.eps_d * p.eps_d - g2;
    if (std::abs(d2) <= 1e-4 * g2) return detail::occupation_series(p.eps_d, p.gamma_hyb, p.temperature, d2);
    return detail::occupation_at(p.eps_d, p.gamma_hyb, p.temperature, d2);
}

inline double docc_deps(const MrlmParams& p) {
    const double h = std::max(1e-6 * p.gamma_hyb, 1e-8);
    auto f = [&](double e) { return dot_occupation({e, p.gamma_hyb, p.temperature}); };
    const double d1 = numerics::richardson_diff(f, p.eps_d, h);
    const double d2 = numerics::richardson_diff(f, p.eps_d, 2.0 * h);
    if (std::abs(d1 - d2) > 1e-6 * std::abs(d1) + 1e-9)
        throw NumericalError("qfi_epsd: derivative not converged between step sizes");
    return d1;
}

inline double qfi_epsd(const MrlmParams& p) {
    const double n = dot_occupation(p);
    if (n <= 1e-14 || n >= 1.0 - 1e-14) throw DomainError("qfi_epsd: occupation pinned to 0 or 1");
    const double d = docc_deps(p);
    return d * d / (n * (1.0 - n));
}

inline double crossover_scale(const MrlmParams& p) {
    validate(p);
    return p.eps_d * p.eps_d / p.gamma_hyb;
}

inline FanScan critical_fan_scan(double gamma_hyb, const std::vector<double>& eps_grid,
                                 const std::vector<double>& temp_grid) {
    if (eps_grid.empty() || temp_grid.empty()) throw ValidationError("critical_fan_scan: grids must be nonempty");
    FanScan out;
    for (double e : eps_grid) {
        FanMax best{e, temp_grid.front(), -1.0};
        for (double t : temp_grid) {
            if (!(t > 0.0)) throw ValidationError("critical_fan_scan: temperatures must be positive");
            const MrlmParams p{e, gamma_hyb, t};
            const double n = dot_occupation(p);
            const double q = qfi_epsd(p);
            out.rows.push_back({e, t, n, q});
            if (q > best.qfi_max) best = {e, t, q};
        }
        out.per_eps.push_back(best);
    }
    return out;
}

} // namespace critmet::mrlm
