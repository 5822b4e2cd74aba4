#include <gtest/gtest.h>

#include <random>

#include "critmet/estimation.hpp"
#include "critmet/landau_zener.hpp"

using namespace critmet;
using namespace critmet::lz;

namespace {

std::vector<LzParams> random_points(unsigned seed, int count, bool thermal) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 3.0), s(-1.0, 1.0);
    std::vector<LzParams> out;
    for (int i = 0; i < count; ++i)
        out.push_back({u(rng) * (s(rng) < 0 ? -1 : 1), u(rng) * s(rng), thermal ? u(rng) : 0.0});
    return out;
}

CMat gibbs_rho(const LzParams& p) { return estimation::density_matrix(gibbs_state(p)); }

} // namespace

TEST(Ground, EigenResidualAndEnergy) {
    for (const auto& p : random_points(1, 30, false)) {
        auto gs = ground_state(p);
        const CVec r = hamiltonian(p) * gs.state - gs.energy * gs.state;
        EXPECT_LT(r.norm(), 1e-12);
        EXPECT_NEAR(gs.state.norm(), 1.0, 1e-14);
    }
    EXPECT_NEAR(ground_state({1, 1, 0}).energy, -std::sqrt(2.0) / 2, 1e-15);
    auto down = ground_state({1, 0, 0});
    EXPECT_NEAR(std::abs(down.state[1]), 1.0, 1e-15);
    EXPECT_EQ(down.phi, 0.0);
    auto big = ground_state({1, 1e9, 0});
    EXPECT_NEAR(std::abs(big.state[0]), 1 / std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(std::abs(big.state[1]), 1 / std::sqrt(2.0), 1e-8);
    EXPECT_THROW(ground_state({0, 0, 0}), DomainError);
}

TEST(Ground, QfiValues) {
    EXPECT_DOUBLE_EQ(qfi_ground({1, 1, 0}), 0.25);
    EXPECT_EQ(qfi_ground({1, 0, 0}), 0.0);
    EXPECT_NEAR(qfi_ground({2, 1, 0}), 0.04, 1e-15);
}

TEST(Ground, QfiMatchesPureStateOracle) {
    for (const auto& p : random_points(2, 20, false)) {
        const double h = 1e-5;
        auto sp = ground_state({p.omega + h, p.g, 0}).state, sm = ground_state({p.omega - h, p.g, 0}).state;
        const CVec dpsi = (sp - sm) / (2 * h);
        EXPECT_NEAR(estimation::qfi_pure(ground_state(p).state, dpsi), qfi_ground(p), 1e-8);
    }
}

TEST(Ground, SnrEqualsQfi) {
    for (const auto& p : random_points(3, 50, false)) EXPECT_NEAR(snr_sigmaz(p), qfi_ground(p), 1e-12);
    EXPECT_DOUBLE_EQ(snr_sigmaz({1, 1, 0}), 0.25);
}

TEST(Thermal, DecompositionAndLimits) {
    for (const auto& p : random_points(4, 30, true)) {
        auto q = qfi_thermal(p);
        EXPECT_NEAR(q.total, q.population_term + q.weight * q.ground_qfi, 1e-12);
        EXPECT_GE(q.weight, 0.0);
        EXPECT_LE(q.weight, 1.0);
        EXPECT_GE(q.population_term, 0.0);
    }
    EXPECT_NEAR(qfi_thermal({1.0, 0.7, 1e-6}).total, qfi_ground({1.0, 0.7, 0}), 1e-9);
    EXPECT_LE(qfi_thermal({1.0, 0.7, 1e6}).total, 1e-9);
    EXPECT_THROW(qfi_thermal({1.0, 0.7, 0.0}), DomainError);
}

TEST(Thermal, MatchesSpectralAssembly) {
    const LzParams p{1, 1, 1};
    auto d = gibbs_derivatives(p);
    EXPECT_NEAR(estimation::qfi_spectral(gibbs_state(p), d[0]).total, qfi_thermal(p).total, 1e-10);
}

TEST(Thermal, SnrHierarchy) {
    for (const auto& p : random_points(5, 100, true)) EXPECT_LE(snr_sigmaz_thermal(p), qfi_thermal(p).total + 1e-9);
    EXPECT_LT(snr_sigmaz_thermal({1, 1, 1}), qfi_thermal({1, 1, 1}).total);
    EXPECT_NEAR(snr_sigmaz_thermal({1, 0.6, 1e-6}), snr_sigmaz({1, 0.6, 0}), 1e-6);
    EXPECT_LE(snr_sigmaz_thermal({1, 0.6, 1e6}), 1e-9);
}

TEST(Thermal, SnrMatchesMomentOracle) {
    // <sz> = -tanh(x) cos(phi) on the Gibbs state, Var = 1 - <sz>^2
    for (const auto& p : random_points(6, 20, true)) {
        auto mz = [&](double w) {
            const CMat rho = gibbs_rho({w, p.g, p.temperature});
            return (rho * lz::detail::pauli('z')).trace().real();
        };
        const double m = mz(p.omega);
        const double dm = numerics::richardson_diff(mz, p.omega, 1e-4);
        EXPECT_NEAR(snr_sigmaz_thermal(p), dm * dm / (1 - m * m), 1e-8 * std::max(1.0, dm * dm / (1 - m * m)));
    }
}

TEST(Ramsey, Values) {
    EXPECT_NEAR(snr_ramsey({1, 0, 0}, 1.0, 2.0), 4.0, 1e-14);
    const double d = std::sqrt(2.0);
    EXPECT_NEAR(snr_ramsey({1, 1, 0}, d + std::numbers::pi / 2, 1.0), 0.0, 1e-14);
    for (const auto& p : random_points(7, 20, false)) EXPECT_LE(snr_ramsey(p, 0.3, 1.7), 1.7 * 1.7 + 1e-12);
}

TEST(Qfim, GroundSingular) {
    auto f = qfim_ground({1, 1, 0}).entries;
    Mat want(2, 2);
    want << 0.25, -0.25, -0.25, 0.25;
    EXPECT_LT((f - want).cwiseAbs().maxCoeff(), 1e-15);
    for (const auto& p : random_points(8, 50, false)) {
        auto q = qfim_ground(p).entries;
        EXPECT_NEAR(q.determinant(), 0.0, 1e-14);
        const double d = gap(p);
        EXPECT_NEAR(q.trace(), 1.0 / (d * d), 1e-13);
        EXPECT_GE(numerics::eigh_symmetric(q).values[0], -1e-14);
    }
}

TEST(Qfim, GroundMatchesEstimationModule) {
    for (const auto& p : random_points(9, 20, false)) {
        auto f = estimation::qfim(ground_spectral(p), gibbs_derivatives(p)).entries;
        EXPECT_LT((f - qfim_ground(p).entries).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Qfim, Pseudoinverse) {
    Mat want(2, 2);
    want << 1, -1, -1, 1;
    EXPECT_LT((numerics::pseudoinverse_psd(qfim_ground({1, 1, 0}).entries) - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Qfim, ThermalMatchesAssembly) {
    for (double w : {0.3, 1.0, 2.2})
        for (double g : {-0.8, 0.5, 1.7})
            for (double t : {0.2, 1.0, 5.0}) {
                const LzParams p{w, g, t};
                auto th = qfim_thermal(p);
                auto f = estimation::qfim(gibbs_state(p), gibbs_derivatives(p)).entries;
                EXPECT_LT((th.qfim.entries - f).cwiseAbs().maxCoeff(), 1e-10);
                EXPECT_NEAR(th.det, f.determinant(), 1e-10);
                EXPECT_NEAR(th.det, qfim_thermal_det_printed(p), 1e-9 * std::max(1.0, th.det));
            }
    EXPECT_NEAR(qfim_thermal({1, 1, 1}).det, 0.0291605, 1e-7);
}

TEST(Qfim, ThermalLimits) {
    EXPECT_LT(qfim_thermal({1, 1, 1e-3}).det, 1e-12);
    EXPECT_LT(qfim_thermal({1, 1, 1e6}).qfim.entries.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Sld, PairMatchesSpectralSld) {
    for (const auto& p : random_points(10, 20, true)) {
        auto pair = sld_pair_thermal(p);
        auto s = gibbs_state(p);
        auto d = gibbs_derivatives(p);
        const CMat lw = estimation::sld(s, estimation::drho(s, d[0]));
        const CMat lg = estimation::sld(s, estimation::drho(s, d[1]));
        EXPECT_LT((pair.l_omega - lw).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT((pair.l_g - lg).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_NEAR(pair.weak_trace, 0.0, 1e-10);
        EXPECT_GT(pair.commutator_coeff, 0.0);
        const CMat comm = pair.l_omega * pair.l_g - pair.l_g * pair.l_omega;
        EXPECT_NEAR(std::abs(comm(0, 1)), pair.commutator_coeff, 1e-9 * std::max(1.0, pair.commutator_coeff));
    }
}

TEST(Sld, PrintedPairDiffersFromSpectralSld) {
    const LzParams p{1, 0.5, 0.7};
    auto printed = sld_pair_thermal_printed(p);
    auto exact = sld_pair_thermal(p);
    EXPECT_GT((printed.l_omega - exact.l_omega).cwiseAbs().maxCoeff(), 1e-2);
    EXPECT_GT((printed.l_g - exact.l_g).cwiseAbs().maxCoeff(), 1e-2);
    // the sigma_x part of L_g and the commutator coefficient agree
    EXPECT_NEAR(printed.l_g(0, 1).real(), exact.l_g(0, 1).real(), 1e-15);
    EXPECT_DOUBLE_EQ(printed.commutator_coeff, exact.commutator_coeff);
}

TEST(Effective, QfiAndVarianceRoute) {
    EXPECT_DOUBLE_EQ(effective_qfi({1, 1, 0}), 0.25);
    EXPECT_DOUBLE_EQ(effective_qfi({1, 0, 0}), 1.0);
    EXPECT_THROW(effective_qfi({0, 1, 0}), DomainError);
    for (const auto& p : random_points(11, 30, false)) {
        const Mat pinv = numerics::pseudoinverse_psd(qfim_ground(p).entries);
        const double v = estimation::effective_variance(pinv, omega_ratio_jacobian(p));
        EXPECT_NEAR(1.0 / v, effective_qfi(p), 1e-10);
    }
}

TEST(Effective, RescaledHamiltonianRoute) {
    for (double om : {-2.0, -0.3, 0.0, 0.5, 1.0, 4.0}) {
        auto psi = [](double o) { return ground_state({1.0, o, 0}).state; };
        const double h = 1e-5;
        const CVec d = (psi(om + h) - psi(om - h)) / (2 * h);
        EXPECT_NEAR(estimation::qfi_pure(psi(om), d), effective_qfi({1.0, om, 0}), 1e-10);
    }
}

TEST(Effective, DirectionIsNonzeroEigenpair) {
    auto e = effective_direction({3, 4, 0});
    EXPECT_NEAR(e.eigenvalue, 1.0 / 25.0, 1e-15);
    EXPECT_NEAR(std::abs(e.unit_vector[0]), 0.8, 1e-15);
    EXPECT_NEAR(std::abs(e.unit_vector[1]), 0.6, 1e-15);
    for (const auto& p : random_points(12, 20, false)) {
        auto ed = effective_direction(p);
        const Mat f = qfim_ground(p).entries;
        EXPECT_LT((f * ed.unit_vector - ed.eigenvalue * ed.unit_vector).norm(), 1e-12);
        auto zm = estimation::qfim_zero_modes(qfim_ground(p));
        ASSERT_EQ(zm.size(), 1u);
        EXPECT_NEAR(zm[0].vector.dot(ed.unit_vector), 0.0, 1e-12);
        // grad(g/omega) points along the informative direction
        const Vec j = omega_ratio_jacobian(p);
        EXPECT_NEAR(std::abs(j.normalized().dot(ed.unit_vector)), 1.0, 1e-12);
    }
}

TEST(Adiabatic, TimeScale) {
    EXPECT_NEAR(adiabatic_time({1, 0, 0}, 0.01), (2 - std::sqrt(2.0)) / 0.02, 1e-12);
    EXPECT_NEAR(adiabatic_time({1, 0, 0}, 0.01), 29.289321881345, 1e-9);
    for (double w : {0.5, 2.0, 7.0}) EXPECT_NEAR(adiabatic_time({w, 0, 0}, 0.1) * 0.1 * w, 0.29289321881345, 1e-12);
    for (double gam : {0.01, 0.1}) {
        const double t = adiabatic_time({1, 1, 0}, gam);
        const double ratio = 2.8 * t * t * gam * gam / qfi_ground({1, 1, 0});
        EXPECT_GE(ratio, 0.95);
        EXPECT_LE(ratio, 1.05);
    }
    EXPECT_THROW(adiabatic_time({1, 0, 0}, 1.0), DomainError);
}

TEST(Thermal, SpectralRouteKeepsTinyExcitedPopulation) {
    // D/T ~ 33: the excited population is ~1e-14 and its (dp)^2/p term still matters at the 1e-10 level
    const LzParams p{1.6, 0.311, 0.05};
    const auto s = gibbs_state(p);
    EXPECT_NEAR(s.populations[1] / std::exp(-gap(p) / p.temperature), 1.0, 1e-12);
    const double spectral = estimation::qfi_spectral(s, gibbs_derivatives(p)[0]).total;
    EXPECT_NEAR(spectral / qfi_thermal(p).total, 1.0, 1e-12);
}
