#pragma once

// Randomized cross-module property suites. Each suite draws its points from a seeded
// generator, so a fixed seed replays the same sample.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "critmet/bosonic_critical.hpp"
#include "critmet/estimation.hpp"
#include "critmet/gaussian.hpp"
#include "critmet/harness.hpp"
#include "critmet/kerr_dissipative.hpp"
#include "critmet/landau_zener.hpp"
#include "critmet/lmg.hpp"
#include "critmet/ramsey_spin.hpp"
#include "critmet/tfim.hpp"

namespace critmet::properties {

struct Outcome {
    std::string name;
    int samples = 0;
    int failures = 0;
    double worst = -INFINITY;  // largest violation margin seen; <= 0 means every sample held
    std::string first_failure;

    explicit Outcome(std::string n = {}) : name(std::move(n)) {}
    bool pass() const { return samples > 0 && failures == 0; }
    // records one sample whose violation margin is `margin` (> 0 fails)
    void record(double margin, const std::string& where) {
        ++samples;
        if (!(margin <= 0.0)) {
            if (failures++ == 0) first_failure = where;
        }
        if (std::isnan(margin) || margin > worst) worst = std::isnan(margin) ? INFINITY : margin;
    }
};

namespace detail {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
    cplx normal_c() {
        std::normal_distribution<double> n;
        return {n(gen), n(gen)};
    }
};

inline CMat random_unitary(Rng& r, int d) {
    CMat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = r.normal_c();
    Eigen::HouseholderQR<CMat> qr(a);
    return qr.householderQ() * CMat::Identity(d, d);
}

inline CMat random_antihermitian(Rng& r, int d) {
    CMat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = r.normal_c();
    return 0.5 * (a - a.adjoint());
}

inline std::string at(const std::string& tag, double a, double b = NAN, double c = NAN) {
    std::string s = tag + "(" + harness::format_double(a);
    if (!std::isnan(b)) s += ", " + harness::format_double(b);
    if (!std::isnan(c)) s += ", " + harness::format_double(c);
    return s + ")";
}

inline kerr::KerrParams kerr_below(Rng& r) {
    kerr::KerrParams p{r.uniform(0.5, 1.5), 0.0, r.uniform(0.0, 1.2), 0.0};
    p.epsilon = r.uniform(0.01, 0.98) * kerr::critical_pump(p);
    return p;
}

} // namespace detail

inline constexpr double kCrbSlack = 1e-9;

// every measurement Fisher information must stay below the matching QFI
inline Outcome crb_ordering(std::uint64_t seed, int samples = 40) {
    detail::Rng r(seed);
    Outcome o{"crb_ordering"};
    for (int i = 0; i < samples; ++i) {
        const lz::LzParams a{r.uniform(0.1, 2.0), r.uniform(0.05, 2.0), r.uniform(0.02, 3.0)};
        o.record(lz::snr_sigmaz(a) - lz::qfi_ground(a) - kCrbSlack, detail::at("lz ground", a.omega, a.g));
        o.record(lz::snr_sigmaz_thermal(a) - lz::qfi_thermal(a).total - kCrbSlack, detail::at("lz thermal", a.omega, a.g, a.temperature));

        const tfim::TfimParams t{r.uniform(0.3, 2.0), 1.0, 2 * r.integer(4, 100)};
        const double qt = tfim::qfi(t);
        o.record(tfim::local_snr(t) - qt - kCrbSlack, detail::at("tfim local", t.omega, t.n));
        o.record(tfim::collective_snr(t) - qt - kCrbSlack, detail::at("tfim collective", t.omega, t.n));

        const lmg::LmgParams l{r.integer(4, 20), 1.0, r.uniform(0.2, 3.0)};
        const int lev = r.integer(0, 3);
        o.record(lmg::snr_sz_eigenstate(l, lev) - lmg::qfi_eigenstate(l, lev) - kCrbSlack, detail::at("lmg", l.n, l.g, lev));

        const bosonic::OscillatorParams b{r.uniform(0.5, 2.0), 0.0};
        const bosonic::OscillatorParams bg{b.omega, r.uniform(0.01, 0.99) * b.omega};
        const double qb = bosonic::qfi_ho(bg);
        o.record(bosonic::snr_number(bg) - qb - kCrbSlack * std::max(1.0, qb), detail::at("oscillator number", bg.omega, bg.g));
        o.record(bosonic::snr_quadrature(bg) - qb - kCrbSlack * std::max(1.0, qb), detail::at("oscillator quadrature", bg.omega, bg.g));

        const auto k = detail::kerr_below(r);
        const auto hs = kerr::homodyne_check_steady(k);
        o.record(hs.fi_opt - hs.qfi - kCrbSlack * std::max(1.0, hs.qfi), detail::at("kerr steady", k.omega0, k.epsilon, k.gamma));
        const double tk = r.uniform(0.05, 10.0);
        const auto hd = kerr::homodyne_check_at(k, tk);
        o.record(hd.fi_opt - hd.qfi - kCrbSlack * std::max(1.0, hd.qfi), detail::at("kerr dynamic", k.omega0, k.epsilon, tk));

        bosonic::UscParams u{1.0, 50.0, 0.0, 1.0, r.uniform(0.5, 2.0), 1.0};
        u.g = r.uniform(0.0, 0.99) * bosonic::usc_critical_coupling(u);
        u = bosonic::usc_with_detuning(u, r.uniform(-3.0, 3.0));
        const auto [us, ud] = bosonic::usc_coherent_output(u);
        const double qu = bosonic::usc_qfi_omega(u).total;
        o.record(gaussian::homodyne_fi_optimal(us, ud).fi - qu - kCrbSlack * std::max(1.0, qu), detail::at("usc", u.g, u.kappa));

        const int n = r.integer(1, 30);
        const double tr = r.uniform(0.0, 3.0);
        const double qc = ramsey::qfi_rotation(ramsey::css(n, 0.5 * std::numbers::pi, 0.0), tr);
        o.record(ramsey::css_snr(n, r.uniform(-1.0, 1.0), tr) - qc - kCrbSlack * std::max(1.0, qc), detail::at("ramsey css", n, tr));
        const double qg = ramsey::qfi_rotation(ramsey::ghz_state(n), tr);
        o.record(ramsey::ghz_snr(n, 0.0, tr) - qg - kCrbSlack * std::max(1.0, qg), detail::at("ramsey ghz", n, tr));
    }
    return o;
}

// smallest eigenvalue of every QFIM must be >= -1e-12 of its scale
inline Outcome qfim_psd(std::uint64_t seed, int samples = 60) {
    detail::Rng r(seed);
    Outcome o{"qfim_psd"};
    auto check = [&](const Mat& f, const std::string& where) {
        const Vec ev = numerics::eigh_symmetric(f).values;
        const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
        o.record(-ev.minCoeff() - 1e-12 * scale, where);
    };
    for (int i = 0; i < samples; ++i) {
        const lz::LzParams a{r.uniform(0.1, 2.0), r.uniform(0.05, 2.0), r.uniform(0.02, 3.0)};
        check(lz::qfim_ground(a).entries, detail::at("lz ground", a.omega, a.g));
        check(lz::qfim_thermal(a).qfim.entries, detail::at("lz thermal", a.omega, a.g, a.temperature));
        check(estimation::qfim(lz::gibbs_state(a), lz::gibbs_derivatives(a)).entries, detail::at("lz spectral", a.omega, a.g, a.temperature));

        // random full-rank state with three independent tangent directions
        const int d = r.integer(2, 5);
        estimation::SpectralState s;
        s.basis = detail::random_unitary(r, d);
        s.populations = Vec(d);
        for (int k = 0; k < d; ++k) s.populations[k] = r.uniform(0.05, 1.0);
        s.populations /= s.populations.sum();
        std::vector<estimation::StateDerivative> ds;
        for (int m = 0; m < 3; ++m) {
            estimation::StateDerivative dv;
            dv.dpopulations = Vec(d);
            for (int k = 0; k < d; ++k) dv.dpopulations[k] = r.uniform(-0.1, 0.1);
            dv.dpopulations.array() -= dv.dpopulations.mean();
            dv.overlaps = detail::random_antihermitian(r, d);
            ds.push_back(dv);
        }
        check(estimation::qfim(s, ds).entries, "random state d=" + std::to_string(d));
    }
    return o;
}

// QFI of a pure state is blind to a parameter-dependent global phase
inline Outcome gauge_invariance(std::uint64_t seed, int samples = 60) {
    detail::Rng r(seed);
    Outcome o{"gauge_invariance"};
    for (int i = 0; i < samples; ++i) {
        const int d = r.integer(2, 6);
        CVec psi(d), dpsi(d);
        for (int k = 0; k < d; ++k) {
            psi[k] = r.normal_c();
            dpsi[k] = r.normal_c();
        }
        psi.normalize();
        // keep the tangent vector consistent with normalization
        dpsi -= cplx(psi.dot(dpsi).real(), 0.0) * psi;
        const double phi = r.uniform(-3.0, 3.0), dphi = r.uniform(-5.0, 5.0);
        const cplx ph = std::polar(1.0, phi);
        const CVec psi2 = ph * psi;
        const CVec dpsi2 = ph * (dpsi + cplx(0.0, dphi) * psi);
        const double q1 = estimation::qfi_pure(psi, dpsi), q2 = estimation::qfi_pure(psi2, dpsi2);
        o.record(std::abs(q1 - q2) - 1e-10 * std::max(1.0, q1), "random pure d=" + std::to_string(d));

        // LZ ground state with a gauge phase applied through the finite-difference derivative
        const lz::LzParams a{r.uniform(0.2, 2.0), r.uniform(0.1, 2.0), 0.0};
        const double h = 1e-5;
        auto state = [&](double w, double gauge) {
            return CVec(std::polar(1.0, gauge) * lz::ground_state({w, a.g, 0.0}).state);
        };
        const CVec gp = state(a.omega + h, phi + dphi * h), gm = state(a.omega - h, phi - dphi * h);
        const double qfd = estimation::qfi_pure(state(a.omega, phi), (gp - gm) / (2.0 * h));
        const double want = lz::qfi_ground(a);
        o.record(std::abs(qfd - want) - 1e-6 * std::max(1.0, want), detail::at("lz gauge", a.omega, a.g));
    }
    return o;
}

// covariances along Kerr trajectories stay symmetric with det >= 1 (purity <= 1)
inline Outcome kerr_physicality(std::uint64_t seed, int samples = 40) {
    detail::Rng r(seed);
    Outcome o{"kerr_physicality"};
    for (int i = 0; i < samples; ++i) {
        const auto p = detail::kerr_below(r);
        std::vector<gaussian::GaussianState> states = {kerr::steady_state(p)};
        for (double t : {0.01, r.uniform(0.1, 2.0), r.uniform(2.0, 20.0)}) states.push_back(kerr::dynamics_covariance(p, t));
        for (const auto& s : states) {
            const std::string where = detail::at("kerr", p.omega0, p.epsilon, p.gamma);
            const double asym = std::abs(s.sigma(0, 1) - s.sigma(1, 0));
            o.record(asym - 1e-12 * std::max(1.0, s.sigma.cwiseAbs().maxCoeff()), where + " symmetry");
            o.record(1.0 - 1e-9 - s.sigma.determinant(), where + " uncertainty");
            o.record(-std::min(s.sigma(0, 0), s.sigma(1, 1)), where + " diagonal");
            o.record(gaussian::purity(s) - 1.0 - 1e-9, where + " purity");
        }
    }
    return o;
}

// a sweep gives byte-identical output for one worker, several workers and a repeat run
inline Outcome parallel_determinism(std::uint64_t seed, int workers = 4) {
    detail::Rng r(seed);
    Outcome o{"parallel_determinism"};
    auto grid = [&](double lo, double hi, int n, harness::Scale s = harness::Scale::lin) {
        return harness::Grid{lo, hi, n, s};
    };
    auto config = [](const char* model, const char* op) {
        harness::ExperimentConfig c;
        c.model = model;
        c.operation = op;
        return c;
    };
    std::vector<harness::ExperimentConfig> cfgs;
    {
        auto c = config("lz", "thermal");
        c.params = {{"omega", grid(0.1, r.uniform(1.0, 3.0), 7)}, {"g", grid(0.0, 2.0, 6)}, {"temperature", grid(0.05, 5.0, 5, harness::Scale::log)}};
        cfgs.push_back(c);
    }
    {
        auto c = config("tfim", "snr");
        c.params = {{"n", grid(8, 512, 7, harness::Scale::log)}, {"omega", grid(0.5, 1.5, 5)}};
        c.fits = {{"n", "qfi", harness::FitKind::loglog}};
        cfgs.push_back(c);
    }
    {
        // crosses the Kerr threshold, so some rows carry errors
        auto c = config("kerr", "dynamic");
        c.params = {{"epsilon", grid(0.5, 2.0, 9)}, {"t", grid(0.1, r.uniform(2.0, 6.0), 6)}};
        cfgs.push_back(c);
    }
    {
        auto c = config("mrlm", "occupation");
        c.params = {{"eps_d", grid(-0.6, 0.6, 13)}, {"temperature", grid(1e-4, 0.1, 4, harness::Scale::log)}};
        cfgs.push_back(c);
    }
    for (auto& c : cfgs) {
        c.workers = 1;
        const auto a = harness::run(c);
        const auto a2 = harness::run(c);
        c.workers = workers;
        const auto b = harness::run(c);
        for (auto f : {harness::Format::csv, harness::Format::json}) {
            const std::string ra = harness::render(a, f);
            const std::string where = c.model + " " + c.operation + " " + harness::to_string(f);
            o.record(ra == harness::render(b, f) ? -1.0 : 1.0, where + " workers");
            o.record(ra == harness::render(a2, f) ? -1.0 : 1.0, where + " repeat");
        }
    }
    return o;
}

inline std::vector<Outcome> run_all(std::uint64_t seed) {
    return {crb_ordering(seed), qfim_psd(seed + 1), gauge_invariance(seed + 2), kerr_physicality(seed + 3),
            parallel_determinism(seed + 4)};
}

} // namespace critmet::properties
