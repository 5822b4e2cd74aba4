#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "critmet/bosonic_critical.hpp"
#include "critmet/gaussian.hpp"
#include "critmet/kerr_dissipative.hpp"

using namespace critmet;
using namespace critmet::gaussian;

namespace {

GaussianState thermal(double nbar) {
    GaussianState s;
    s.sigma = (2.0 * nbar + 1.0) * Mat2::Identity();
    return s;
}

Mat2 rot(double a) {
    Mat2 r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}

// random physical state: rotated squeezed thermal
GaussianState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = 1.5 * u(rng), nb = 2.0 * u(rng), a = std::numbers::pi * u(rng);
    Mat2 d;
    d << std::exp(2 * r), 0, 0, std::exp(-2 * r);
    GaussianState s;
    s.sigma = (2 * nb + 1) * rot(a) * d * rot(a).transpose();
    s.v << 2 * u(rng) - 1, 2 * u(rng) - 1;
    return s;
}

GaussianDerivative random_derivative(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GaussianDerivative d;
    d.dv << u(rng), u(rng);
    const double off = u(rng);
    d.dsigma << u(rng), off, off, u(rng);
    return d;
}

} // namespace

TEST(Purity, Examples) {
    EXPECT_DOUBLE_EQ(purity(GaussianState{}), 1.0);
    EXPECT_NEAR(purity(thermal(1.0)), 1.0 / 3.0, 1e-15);
    GaussianState sq;
    sq.sigma << std::exp(1.4), 0, 0, std::exp(-1.4);
    EXPECT_NEAR(purity(sq), 1.0, 1e-14);
    GaussianState bad;
    bad.sigma << 1, 0, 0, -1;
    EXPECT_THROW(purity(bad), DomainError);
}

TEST(Purity, IsotropicNoiseLowersIt) {
    std::mt19937 rng(3);
    for (int i = 0; i < 20; ++i) {
        auto s = random_state(rng);
        auto t = s;
        t.sigma += 0.01 * Mat2::Identity();
        EXPECT_LT(purity(t), purity(s));
    }
}

TEST(QfiGaussian, Displacement) {
    GaussianDerivative d;
    d.dv << std::sqrt(2.0), 0.0;
    EXPECT_NEAR(qfi_gaussian(GaussianState{}, d), 4.0, 1e-14);
}

TEST(QfiGaussian, ThermalOccupation) {
    // d sigma / d nbar = 2 I
    GaussianDerivative d;
    d.dsigma = 2.0 * Mat2::Identity();
    EXPECT_NEAR(qfi_gaussian(thermal(1.0), d), 0.5, 1e-13);
    EXPECT_NEAR(qfi_gaussian(thermal(3.0), d), 1.0 / 12.0, 1e-13);
}

TEST(QfiGaussian, SqueezedVacuumManifold) {
    for (double g : {0.1, 0.5, 0.9, 0.99}) {
        const bosonic::OscillatorParams p{1.0, g};
        auto [s, d] = bosonic::squeezed_vacuum(p);
        const double dx = bosonic::dxi_domega(p);
        EXPECT_NEAR(qfi_gaussian(s, d), 2.0 * dx * dx, 1e-10 * std::max(1.0, 2 * dx * dx));
    }
}

TEST(QfiGaussian, PureInconsistentManifoldThrows) {
    GaussianDerivative d;
    d.dsigma = Mat2::Identity();
    EXPECT_THROW(qfi_gaussian(GaussianState{}, d), DomainError);
}

TEST(QfiGaussian, RejectsUnphysical) {
    GaussianState s;
    s.sigma << 0.5, 0, 0, 0.5;
    EXPECT_THROW(qfi_gaussian(s, GaussianDerivative{}), DomainError);
    s.sigma << 2, 0.1, 0.2, 2;
    EXPECT_THROW(qfi_gaussian(s, GaussianDerivative{}), ValidationError);
}

TEST(QfiGaussian, RotationInvariance) {
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        auto s = random_state(rng);
        auto d = random_derivative(rng);
        const double q = qfi_gaussian(s, d);
        const Mat2 r = rot(0.37 * i);
        GaussianState s2;
        s2.v = r * s.v;
        s2.sigma = r * s.sigma * r.transpose();
        GaussianDerivative d2;
        d2.dv = r * d.dv;
        d2.dsigma = r * d.dsigma * r.transpose();
        EXPECT_NEAR(qfi_gaussian(s2, d2), q, 1e-9 * std::max(1.0, q));
    }
}

TEST(QfiGaussian, MatchesFidelityCurvature) {
    // mixed thermal-squeezed family: sigma(x) = (1.5 + x) diag(e^{x}, e^{-x/2})
    auto sig = [](double x) {
        Mat2 m;
        m << (1.5 + x) * std::exp(x), 0.0, 0.0, (1.5 + x) * std::exp(-0.5 * x);
        return m;
    };
    // Uhlmann fidelity for single-mode zero-mean Gaussians, V = sigma/2
    auto fid = [](const Mat2& a, const Mat2& b) {
        const double delta = (a + b).determinant() / 4.0;
        const double lam = 4.0 * (a.determinant() / 4.0 - 0.25) * (b.determinant() / 4.0 - 0.25);
        return 1.0 / (std::sqrt(delta + lam) - std::sqrt(lam));
    };
    const double x = 0.3, h = 1e-4;
    GaussianState s;
    s.sigma = sig(x);
    GaussianDerivative d;
    d.dsigma = (sig(x + h) - sig(x - h)) / (2 * h);
    const double f = fid(sig(x - h), sig(x + h));
    const double from_fid = 8.0 * (1.0 - std::sqrt(f)) / (4 * h * h);
    EXPECT_NEAR(qfi_gaussian(s, d), from_fid, 1e-5 * from_fid);
}

TEST(Homodyne, Basics) {
    EXPECT_EQ(homodyne_fi(GaussianState{}, GaussianDerivative{}, 0.4), 0.0);
    GaussianDerivative d;
    d.dv << std::sqrt(2.0), 0.0;
    EXPECT_NEAR(homodyne_fi(GaussianState{}, d, 0.0), 4.0, 1e-14);
    auto opt = homodyne_fi_optimal(GaussianState{}, d);
    EXPECT_NEAR(opt.phi_star, 0.0, 1e-8);
    EXPECT_NEAR(opt.fi, 4.0, 1e-12);
}

TEST(Homodyne, IsotropicTieBreaksToZero) {
    GaussianDerivative d;
    d.dsigma = 2.0 * Mat2::Identity();
    auto opt = homodyne_fi_optimal(thermal(1.0), d);
    EXPECT_EQ(opt.phi_star, 0.0);
    EXPECT_NEAR(opt.fi, homodyne_fi(thermal(1.0), d, 1.1), 1e-14);
}

TEST(Homodyne, GridValidation) { EXPECT_THROW(homodyne_fi_optimal(GaussianState{}, GaussianDerivative{}, 4), ValidationError); }

TEST(Homodyne, BoundedByQfi) {
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto s = random_state(rng);
        auto d = random_derivative(rng);
        const double q = qfi_gaussian(s, d);
        for (int k = 0; k < 16; ++k) EXPECT_LE(homodyne_fi(s, d, k * std::numbers::pi / 16), q + 1e-9);
        EXPECT_LE(homodyne_fi_optimal(s, d).fi, q + 1e-9);
    }
}

TEST(Homodyne, OptimumBeatsGrid) {
    std::mt19937 rng(9);
    for (int i = 0; i < 20; ++i) {
        auto s = random_state(rng);
        auto d = random_derivative(rng);
        auto opt = homodyne_fi_optimal(s, d);
        EXPECT_GE(opt.phi_star, 0.0);
        EXPECT_LT(opt.phi_star, std::numbers::pi);
        for (int k = 0; k < 500; ++k) EXPECT_LE(homodyne_fi(s, d, k * std::numbers::pi / 500), opt.fi * (1 + 1e-9));
    }
}

TEST(Homodyne, KerrSteadyMaxMatchesClosedForm) {
    kerr::KerrParams p{1.0, 0.0, 1.0, 0.0};
    p.epsilon = 0.9 * kerr::critical_pump(p);
    const auto opt = homodyne_fi_optimal(kerr::steady_state(p), kerr::steady_state_derivative(p));
    // independent maximisation of the closed form
    double best = 0.0, arg = 0.0;
    for (int k = 0; k < 20000; ++k) {
        const double phi = k * std::numbers::pi / 20000;
        const double v = kerr::homodyne_fi_steady_printed(p, phi);
        if (v > best) best = v, arg = phi;
    }
    double a = arg - 1e-4, b = arg + 1e-4;
    for (int it = 0; it < 200; ++it) {
        const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
        if (kerr::homodyne_fi_steady_printed(p, m1) < kerr::homodyne_fi_steady_printed(p, m2)) a = m1; else b = m2;
    }
    best = kerr::homodyne_fi_steady_printed(p, 0.5 * (a + b));
    EXPECT_NEAR(opt.fi, best, 1e-9 * best);
}

TEST(Homodyne, KerrSteadyNearCriticalSaturates) {
    kerr::KerrParams p{1.0, 0.0, 1.0, 0.0};
    p.epsilon = 0.999 * kerr::critical_pump(p);
    const auto opt = homodyne_fi_optimal(kerr::steady_state(p), kerr::steady_state_derivative(p));
    EXPECT_GE(opt.fi / kerr::qfi_steady(p), 0.999);
}
