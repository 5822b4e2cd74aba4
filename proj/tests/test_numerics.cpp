#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "critmet/numerics.hpp"

using namespace critmet;
using namespace critmet::numerics;

namespace {

Mat random_symmetric(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
    return a;
}

} // namespace

TEST(Eigh, PauliX) {
    Mat a(2, 2);
    a << 0, 1, 1, 0;
    auto es = eigh_symmetric(a);
    EXPECT_NEAR(es.values[0], -1.0, 1e-14);
    EXPECT_NEAR(es.values[1], 1.0, 1e-14);
}

TEST(Eigh, IdentityKeepsBasis) {
    auto es = eigh_symmetric(Mat::Identity(5, 5));
    for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(es.values[i], 1.0);
    EXPECT_LT((es.vectors - Mat::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Eigh, Random50Reconstructs) {
    Mat a = random_symmetric(50, 7);
    auto es = eigh_symmetric(a);
    Mat rec = es.vectors * es.values.asDiagonal() * es.vectors.transpose();
    EXPECT_LT((rec - a).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((es.vectors.transpose() * es.vectors - Mat::Identity(50, 50)).cwiseAbs().maxCoeff(), 1e-10);
    for (int k = 1; k < 50; ++k) EXPECT_LE(es.values[k - 1], es.values[k]);
    EXPECT_NEAR(es.values.sum(), a.trace(), 1e-9 * a.norm());
}

TEST(Eigh, ResidualAndSignConvention) {
    for (unsigned seed : {1u, 2u, 3u}) {
        Mat a = random_symmetric(30, seed);
        auto es = eigh_symmetric(a);
        const double nrm = a.norm();
        for (int k = 0; k < 30; ++k) {
            Vec v = es.vectors.col(k);
            EXPECT_LT((a * v - es.values[k] * v).norm(), 1e-10 * nrm);
            Eigen::Index imax;
            v.cwiseAbs().maxCoeff(&imax);
            EXPECT_GT(v[imax], 0.0);
        }
    }
}

TEST(Eigh, MatchesEigenOracle) {
    Mat a = random_symmetric(40, 11);
    auto es = eigh_symmetric(a);
    Eigen::SelfAdjointEigenSolver<Mat> ref(a);
    EXPECT_LT((es.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Eigh, RejectsNonSymmetric) {
    Mat a(2, 2);
    a << 0, 1, 2, 0;
    EXPECT_THROW(eigh_symmetric(a), ValidationError);
}

TEST(Eigh, DegenerateAndDiagonal) {
    Mat a = Mat::Zero(4, 4);
    a.diagonal() << 3, 1, 1, -2;
    auto es = eigh_symmetric(a);
    EXPECT_DOUBLE_EQ(es.values[0], -2.0);
    EXPECT_DOUBLE_EQ(es.values[3], 3.0);
}

TEST(Pinv, LandauZenerGroundQfim) {
    Mat a(2, 2);
    a << 1, -1, -1, 1;
    a *= 0.25;
    Mat p = pseudoinverse_psd(a);
    Mat expect(2, 2);
    expect << 1, -1, -1, 1;
    EXPECT_LT((p - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Pinv, IdentityAndDiag) {
    EXPECT_LT((pseudoinverse_psd(Mat::Identity(3, 3)) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 2.0;
    Mat p = pseudoinverse_psd(d);
    EXPECT_NEAR(p(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(p(1, 1), 0.0, 1e-15);
}

TEST(Pinv, PenroseConditions) {
    Mat b = random_symmetric(6, 5).leftCols(3);
    Mat a = b * b.transpose();  // rank 3 PSD
    Mat p = pseudoinverse_psd(a);
    EXPECT_LT((a * p * a - a).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((p * a * p - p).cwiseAbs().maxCoeff(), 1e-9);
    Mat ap = a * p;
    EXPECT_LT((ap - ap.transpose()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Pinv, RejectsIndefinite) {
    Mat a = Mat::Zero(2, 2);
    a.diagonal() << 1.0, -0.5;
    EXPECT_THROW(pseudoinverse_psd(a), DomainError);
}

TEST(Digamma, SpecialValues) {
    EXPECT_NEAR(digamma(1.0), -0.57721566490153286, 1e-15);
    EXPECT_NEAR(digamma(0.5), -1.96351002602142348, 2e-15);
    EXPECT_NEAR(digamma(2.0), digamma(1.0) + 1.0, 1e-13);
}

TEST(Digamma, PoleIsDomainError) {
    EXPECT_THROW(digamma(0.0), DomainError);
    EXPECT_THROW(digamma(-3.0), DomainError);
}

TEST(Digamma, ReflectionAndRecurrence) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> re(-6.0, 6.0), im(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        cplx z(re(rng), im(rng));
        if (std::abs(z.imag()) < 0.05) z += cplx(0.0, 0.1);
        const cplx lhs = digamma(1.0 - z) - digamma(z);
        const cplx rhs = std::numbers::pi * std::cos(std::numbers::pi * z) / std::sin(std::numbers::pi * z);
        EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
        EXPECT_LT(std::abs(digamma(z + 1.0) - digamma(z) - 1.0 / z), 1e-12 * std::max(1.0, std::abs(1.0 / z)));
    }
}

TEST(Digamma, SmallArgumentNearZero) {
    // psi(z) ~ -1/z - gamma for small z
    const cplx z(1e-6, 0.0);
    EXPECT_NEAR(digamma(z).real(), -1e6 - 0.5772156649015329 + 1.6449340668482264e-6, 1e-6);
}

TEST(CentralDiff, Basic) {
    EXPECT_NEAR(central_diff([](double x) { return x * x; }, 3.0, 1e-5), 6.0, 1e-8);
    EXPECT_NEAR(central_diff([](double x) { return std::sin(x); }, 0.0, 1e-5), 1.0, 1e-9);
    EXPECT_THROW(central_diff([](double) { return NAN; }, 0.0, 1e-5), NumericalError);
    EXPECT_THROW(central_diff([](double x) { return x; }, 0.0, 0.0), ValidationError);
}

TEST(CentralDiff, LandauZenerSigmaZSlope) {
    // <sigma_z> = -omega / Delta at g = 1, slope -g^2/Delta^3
    auto m = [](double w) { return -w / std::hypot(w, 1.0); };
    EXPECT_NEAR(central_diff(m, 1.0, 1e-5), -1.0 / std::pow(2.0, 1.5), 1e-6);
}

TEST(Fit, PowerLaws) {
    std::vector<double> xs{2, 4, 8, 16}, ys, zs;
    for (double x : xs) {
        ys.push_back(x * x);
        zs.push_back(7.0 * std::pow(x, 4.0 / 3.0));
    }
    auto r = loglog_fit(xs, ys);
    EXPECT_NEAR(r.exponent, 2.0, 1e-12);
    EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
    auto q = loglog_fit(xs, zs);
    EXPECT_NEAR(q.exponent, 4.0 / 3.0, 1e-10);
    EXPECT_NEAR(q.prefactor, 7.0, 1e-9);
    EXPECT_THROW(loglog_fit({1, 2, -3}, {1, 2, 3}), DomainError);
    EXPECT_THROW(loglog_fit({1, 2}, {1, 2}), ValidationError);
}

TEST(Fit, ConstantColumnHasZeroExponent) {
    auto r = loglog_fit({1, 2, 4, 8}, {3, 3, 3, 3});
    EXPECT_NEAR(r.exponent, 0.0, 1e-15);
}

TEST(Propagate, ZeroHamiltonian) {
    CVec psi(2);
    psi << 0.6, cplx(0.0, 0.8);
    CVec out = propagate_schrodinger(CMat::Zero(2, 2), psi, 3.0, 0.01);
    EXPECT_LT((out - psi).norm(), 1e-15);
}

TEST(Propagate, FullPeriod) {
    const double w = 2.0;
    CMat h = CMat::Zero(2, 2);
    h(0, 0) = w / 2;
    h(1, 1) = -w / 2;
    CVec psi(2);
    psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CVec out = propagate_schrodinger(h, psi, 2 * std::numbers::pi / w, 1e-3);
    EXPECT_NEAR(std::abs(out.dot(psi)), 1.0, 1e-10);
}

TEST(Propagate, SigmaXHalfPi) {
    CMat h(2, 2);
    h << 0, 1, 1, 0;
    CVec psi(2);
    psi << 1, 0;
    CVec out = propagate_schrodinger(h, psi, std::numbers::pi / 2, 1e-3);
    EXPECT_NEAR(std::abs(out[0]), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(out[1] - cplx(0, -1)), 0.0, 1e-10);
}

TEST(Propagate, NormDriftAndEnergy) {
    Mat a = random_symmetric(12, 9);
    CMat h = a.cast<cplx>();
    CVec psi = CVec::Ones(12) / std::sqrt(12.0);
    const double dt = 0.05 / norm_bound(h);
    // step without the final renormalization by running the integrator on a single step size
    CVec out = propagate_schrodinger(h, psi, 2.0, dt);
    EXPECT_NEAR(out.norm(), 1.0, 1e-14);
    const double e0 = psi.dot(h * psi).real();
    const double e1 = out.dot(h * out).real();
    EXPECT_NEAR(e1, e0, 1e-6 * std::max(1.0, std::abs(e0)));
}

TEST(Propagate, StepGuard) {
    CMat h(2, 2);
    h << 0, 10, 10, 0;
    CVec psi(2);
    psi << 1, 0;
    EXPECT_THROW(propagate_schrodinger(h, psi, 1.0, 0.1), ConfigError);
}

TEST(OscKernel, MatchesClosedFormsAndDerivatives) {
    for (double q : {-3.0, -1e-3, 0.0, 1e-9, 0.2, 2.5}) {
        for (double t : {0.0, 0.3, 1.7, 6.0}) {
            auto k = osc_kernel(q, t);
            auto cf = [t](double qq) { return osc_kernel(qq, t).c; };
            auto sf = [t](double qq) { return osc_kernel(qq, t).s; };
            if (q > 0) {
                EXPECT_NEAR(k.c, std::cos(std::sqrt(q) * t), 1e-13);
            } else if (q < 0) {
                EXPECT_NEAR(k.c, std::cosh(std::sqrt(-q) * t), 1e-12 * k.c);
            }
            const double h = 1e-5;
            EXPECT_NEAR(k.dc_dq, richardson_diff(cf, q, h), 1e-7 * std::max(1.0, std::abs(k.dc_dq)));
            EXPECT_NEAR(k.ds_dq, richardson_diff(sf, q, h), 1e-7 * std::max(1.0, std::abs(k.ds_dq)));
        }
    }
}
