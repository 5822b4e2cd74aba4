// gaussian.hpp - single-mode Gaussian states: purity, QFI and homodyne Fisher information
//
// Quadratures x = (a + a^dag)/sqrt2, p = -i(a - a^dag)/sqrt2; covariance carries the
// factor 2 so the vacuum has sigma = I.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "critmet/numerics.hpp"

namespace critmet::gaussian {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct GaussianState {
    Vec2 v = Vec2::Zero();
    Mat2 sigma = Mat2::Identity();
};

struct GaussianDerivative {
    Vec2 dv = Vec2::Zero();
    Mat2 dsigma = Mat2::Zero();
};

struct HomodyneOptimum {
    double phi_star = 0.0;
    double fi = 0.0;
};

inline constexpr double kPureThreshold = 1e-9;

inline void validate(const GaussianState& s) {
    if (!s.v.allFinite() || !s.sigma.allFinite()) throw ValidationError("GaussianState: non-finite entries");
    if (std::abs(s.sigma(0, 1) - s.sigma(1, 0)) > 1e-12 * std::max(1.0, s.sigma.cwiseAbs().maxCoeff()))
        throw ValidationError("GaussianState: covariance is not symmetric");
    const double det = s.sigma.determinant();
    if (det <= 0.0) throw DomainError("GaussianState: covariance determinant is not positive");
    if (det < 1.0 - 1e-9) throw DomainError("GaussianState: covariance violates the uncertainty bound (det < 1)");
}

inline void validate(const GaussianDerivative& d) {
    if (!d.dv.allFinite() || !d.dsigma.allFinite()) throw ValidationError("GaussianDerivative: non-finite entries");
    if (std::abs(d.dsigma(0, 1) - d.dsigma(1, 0)) > 1e-12 * std::max(1.0, d.dsigma.cwiseAbs().maxCoeff()))
        throw ValidationError("GaussianDerivative: dsigma is not symmetric");
}

inline double purity(const GaussianState& s) {
    const double det = s.sigma.determinant();
    if (!(det > 0.0)) throw DomainError("purity: covariance determinant is not positive");
    return 1.0 / std::sqrt(det);
}

inline double qfi_gaussian(const GaussianState& s, const GaussianDerivative& d) {
    validate(s);
    validate(d);
    const double mu = purity(s);
    const Mat2 sinv = s.sigma.inverse();
    const Mat2 a = sinv * d.dsigma;
    const double dmu = -0.5 * mu * a.trace();
    double out = 0.5 * (a * a).trace() / (1.0 + mu * mu) + 2.0 * d.dv.dot(sinv * d.dv);
    if (mu >= 1.0 - kPureThreshold) {
        if (std::abs(dmu) > 1e-6)
            throw DomainError("qfi_gaussian: pure state with nonzero purity derivative (inconsistent manifold)");
    } else {
        out += 2.0 * dmu * dmu / (1.0 - std::pow(mu, 4));
    }
    return out;
}

namespace detail {

// variance of x(phi) = x cos(phi) + p sin(phi), factor-2 convention
inline double quad_var(const Mat2& sig, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return c * c * sig(0, 0) + s * s * sig(1, 1) + 2.0 * s * c * sig(0, 1);
}

} // namespace detail

inline double homodyne_fi(const GaussianState& s, const GaussianDerivative& d, double phi) {
    const double sv = detail::quad_var(s.sigma, phi);
    if (!(sv > 0.0)) throw DomainError("homodyne_fi: quadrature variance is not positive");
    const double dS = detail::quad_var(d.dsigma, phi);
    const double dx = std::cos(phi) * d.dv[0] + std::sin(phi) * d.dv[1];
    return (4.0 * sv * dx * dx + dS * dS) / (2.0 * sv * sv);
}

// coarse scan over [0, pi) then golden section around the best cell
inline HomodyneOptimum homodyne_fi_optimal(const GaussianState& s, const GaussianDerivative& d,
                                           int grid_points = 64) {
    if (grid_points < 8) throw ValidationError("homodyne_fi_optimal: grid_points must be at least 8");
    const double pi = std::numbers::pi;
    const double h = pi / grid_points;
    int best = 0;
    double fbest = homodyne_fi(s, d, 0.0);
    std::vector<double> f(static_cast<size_t>(grid_points));
    f[0] = fbest;
    for (int i = 1; i < grid_points; ++i) {
        f[static_cast<size_t>(i)] = homodyne_fi(s, d, i * h);
        if (f[static_cast<size_t>(i)] > fbest * (1.0 + 1e-12) + 1e-300) {
            fbest = f[static_cast<size_t>(i)];
            best = i;
        }
    }
    // flat in phi: keep the tie-break at the smallest grid angle
    const double fmin = *std::min_element(f.begin(), f.end());
    if (fbest - fmin <= 1e-12 * std::max(1.0, std::abs(fbest))) return {best * h, fbest};

    auto fn = [&](double x) { return homodyne_fi(s, d, x); };
    double a = (best - 1) * h, b = (best + 1) * h;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), e = a + invphi * (b - a);
    double fc = fn(c), fe = fn(e);
    while (b - a > 1e-10) {
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - invphi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + invphi * (b - a);
            fe = fn(e);
        }
    }
    double x = 0.5 * (a + b);
    double fx = fn(x);
    if (fbest > fx) {
        x = best * h;
        fx = fbest;
    }
    x = std::fmod(x, pi);
    if (x < 0.0) x += pi;
    // the flat top only pins phi to ~1e-8; fold a peak just below pi onto 0
    if (pi - x < 1e-6) {
        const double f0 = fn(0.0);
        if (f0 >= fx * (1.0 - 1e-12)) return {0.0, std::max(f0, fx)};
    }
    return {x, fx};
}

} // namespace critmet::gaussian
