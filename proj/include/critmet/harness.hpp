#pragma once

// Experiment plumbing: config validation, grid sweeps over a model/operation registry,
// per-row error capture, fits and CSV/JSON emission.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "critmet/bosonic_critical.hpp"
#include "critmet/errors.hpp"
#include "critmet/kerr_dissipative.hpp"
#include "critmet/landau_zener.hpp"
#include "critmet/lmg.hpp"
#include "critmet/mrlm.hpp"
#include "critmet/numerics.hpp"
#include "critmet/ramsey_spin.hpp"
#include "critmet/tfim.hpp"

namespace critmet::harness {

inline constexpr const char* kVersion = "1.0.0";

class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// a row failed while strict mode was on
class RowError : public Error {
public:
    RowError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

enum class Scale { lin, log };
enum class Format { csv, json };
enum class FitKind { loglog, linear, lnsq };

struct Grid {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    Scale scale = Scale::lin;
};

using Binding = std::variant<double, Grid>;

struct FitRequest {
    std::string x;
    std::string y;
    FitKind kind = FitKind::loglog;
};

struct ExperimentConfig {
    std::string model;
    std::string operation;
    std::map<std::string, Binding> params;
    std::string out;  // empty or "-" writes to stdout
    Format format = Format::csv;
    int workers = 1;
    bool strict = false;
    std::uint64_t seed = 0;
    std::vector<FitRequest> fits;
};

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> errors;  // one per row, empty when the row succeeded
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    double wall_seconds = 0.0;  // not emitted, so output stays byte-stable

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw UsageError("unknown column '" + name + "'");
    }
    std::size_t error_count() const {
        std::size_t n = 0;
        for (const auto& e : errors) n += !e.empty();
        return n;
    }
};

// ---- registry

struct ParamSpec {
    std::string name;
    double default_value;
    bool integer = false;
};

using Args = std::map<std::string, double>;

struct Operation {
    std::string name;
    std::vector<ParamSpec> params;
    std::vector<std::string> outputs;
    std::function<std::vector<double>(const Args&)> eval;
};

struct Model {
    std::string name;
    std::vector<Operation> ops;
};

namespace detail {

inline int as_int(const Args& a, const char* k) { return static_cast<int>(std::lround(a.at(k))); }

inline tfim::TfimParams tfim_of(const Args& a) { return {a.at("omega"), a.at("g"), as_int(a, "n")}; }
inline lz::LzParams lz_of(const Args& a) { return {a.at("omega"), a.at("g"), a.at("temperature")}; }
inline kerr::KerrParams kerr_of(const Args& a) { return {a.at("omega0"), a.at("epsilon"), a.at("gamma"), a.at("n_max")}; }
inline mrlm::MrlmParams mrlm_of(const Args& a) { return {a.at("eps_d"), a.at("gamma_hyb"), a.at("temperature")}; }
inline bosonic::UscParams usc_of(const Args& a) {
    bosonic::UscParams p{a.at("omega"), a.at("big_omega"), a.at("g"), a.at("eta"), a.at("kappa"), 1.0};
    return bosonic::usc_with_detuning(p, a.at("delta"));
}

inline std::vector<Model> build_registry() {
    using V = std::vector<double>;
    std::vector<Model> m;

    m.push_back({"ramsey",
                 {{"snr",
                   {{"n", 10, true}, {"omega", 0.0}, {"t", 1.0}},
                   {"css_snr", "ghz_snr", "css_qfi", "ghz_qfi"},
                   [](const Args& a) -> V {
                       const int n = as_int(a, "n");
                       const double t = a.at("t");
                       return {ramsey::css_snr(n, a.at("omega"), t), ramsey::ghz_snr(n, a.at("omega"), t),
                               ramsey::qfi_rotation(ramsey::css(n, 0.5 * std::numbers::pi, 0.0), t),
                               ramsey::qfi_rotation(ramsey::ghz_state(n), t)};
                   }},
                  {"tradeoff",
                   {{"n", 100, true}, {"chi", 1.0}, {"t", 0.01}},
                   {"signal2", "noise", "snr"},
                   [](const Args& a) -> V {
                       const auto r = ramsey::snr_tradeoff_curve(as_int(a, "n"), a.at("chi"), {a.at("t")});
                       return {r[0].signal2, r[0].noise, r[0].snr};
                   }}}});

    m.push_back({"lz",
                 {{"qfi",
                   {{"omega", 1.0}, {"g", 1.0}},
                   {"qfi", "qfi_g", "snr_sigmaz", "gap", "effective_qfi"},
                   [](const Args& a) -> V {
                       const auto p = lz_of({{"omega", a.at("omega")}, {"g", a.at("g")}, {"temperature", 0.0}});
                       const auto f = lz::qfim_ground(p).entries;
                       return {lz::qfi_ground(p), f(1, 1), lz::snr_sigmaz(p), lz::gap(p), lz::effective_qfi(p)};
                   }},
                  {"thermal",
                   {{"omega", 1.0}, {"g", 1.0}, {"temperature", 1.0}},
                   {"qfi", "population_term", "weight", "snr_sigmaz", "qfim_det"},
                   [](const Args& a) -> V {
                       const auto p = lz_of(a);
                       const auto q = lz::qfi_thermal(p);
                       return {q.total, q.population_term, q.weight, lz::snr_sigmaz_thermal(p), lz::qfim_thermal(p).det};
                   }},
                  {"qfim",
                   {{"omega", 1.0}, {"g", 1.0}, {"temperature", 1.0}},
                   {"f_omega_omega", "f_omega_g", "f_g_g", "det", "weak_trace"},
                   [](const Args& a) -> V {
                       const auto p = lz_of(a);
                       const auto q = lz::qfim_thermal(p);
                       return {q.qfim.entries(0, 0), q.qfim.entries(0, 1), q.qfim.entries(1, 1), q.det,
                               lz::sld_pair_thermal(p).weak_trace};
                   }}}});

    m.push_back({"tfim",
                 {{"qfi",
                   {{"omega", 1.0}, {"g", 1.0}, {"n", 100, true}},
                   {"qfi", "fidelity_susceptibility", "gap", "magnetization_z"},
                   [](const Args& a) -> V {
                       const auto p = tfim_of(a);
                       return {tfim::qfi(p), tfim::fidelity_susceptibility(p), tfim::gap(p), tfim::magnetization_z(p)};
                   }},
                  {"snr",
                   {{"omega", 1.0}, {"g", 1.0}, {"n", 100, true}},
                   {"local_snr", "collective_snr", "qfi"},
                   [](const Args& a) -> V {
                       const auto p = tfim_of(a);
                       return {tfim::local_snr(p), tfim::collective_snr(p), tfim::qfi(p)};
                   }},
                  {"fidelity",
                   {{"omega", 1.0}, {"g", 1.0}, {"n", 100, true}, {"omega_prime", 1.01}},
                   {"fidelity"},
                   [](const Args& a) -> V { return {tfim::fidelity(tfim_of(a), a.at("omega_prime"))}; }},
                  {"adiabatic",
                   {{"omega", 1.0}, {"g", 1.0}, {"n", 100, true}, {"gamma", 0.01}},
                   {"time", "qfi_from_time", "qfi"},
                   [](const Args& a) -> V {
                       const auto p = tfim_of(a);
                       const double t = tfim::adiabatic_time(p, a.at("gamma"));
                       return {t, tfim::qfi_from_time(t, a.at("gamma"), p.omega), tfim::qfi(p)};
                   }}}});

    m.push_back({"lmg",
                 {{"qfi",
                   {{"n", 10, true}, {"omega", 1.0}, {"g", 1.0}, {"level", 0, true}},
                   {"qfi", "snr_sz"},
                   [](const Args& a) -> V {
                       const lmg::LmgParams p{as_int(a, "n"), a.at("omega"), a.at("g")};
                       const int lev = as_int(a, "level");
                       return {lmg::qfi_eigenstate(p, lev), lmg::snr_sz_eigenstate(p, lev)};
                   }},
                  {"optimum",
                   {{"n", 10, true}, {"omega", 1.0}, {"level", 0, true}, {"g_lo", 0.0}, {"g_hi", 4.0}},
                   {"g_star", "qfi_star"},
                   [](const Args& a) -> V {
                       const auto o = lmg::optimal_coupling(as_int(a, "n"), a.at("omega"), as_int(a, "level"),
                                                            a.at("g_lo"), a.at("g_hi"));
                       return {o.first, o.second};
                   }},
                  {"quench",
                   {{"omega", 1.0}, {"g", 1.0}, {"t", 1.0}},
                   {"qfi", "qfi_gaussian", "photon_number"},
                   [](const Args& a) -> V {
                       const double w = a.at("omega"), g = a.at("g"), t = a.at("t");
                       return {lmg::quench_qfi(w, g, t), lmg::quench_qfi_gaussian(w, g, t),
                               lmg::quench_photon_number(w, g, t)};
                   }},
                  {"squeezed_fock",
                   {{"level", 0, true}, {"omega", 1.0}, {"g", 0.5}},
                   {"qfi"},
                   [](const Args& a) -> V {
                       return {lmg::squeezed_fock_qfi(as_int(a, "level"), a.at("omega"), a.at("g"))};
                   }}}});

    m.push_back({"oscillator",
                 {{"qfi",
                   {{"omega", 1.0}, {"g", 0.5}},
                   {"qfi", "snr_number", "snr_quadrature", "excitations", "xi"},
                   [](const Args& a) -> V {
                       const bosonic::OscillatorParams p{a.at("omega"), a.at("g")};
                       return {bosonic::qfi_ho(p), bosonic::snr_number(p), bosonic::snr_quadrature(p),
                               bosonic::vacuum_excitations(p), bosonic::xi(p)};
                   }},
                  {"budget",
                   {{"omega", 1.0}, {"g", 0.9}, {"gamma", 0.01}},
                   {"time", "qfi_rewritten", "sql_crossover_n"},
                   [](const Args& a) -> V {
                       const auto b = bosonic::adiabatic_budget({a.at("omega"), a.at("g")}, a.at("gamma"));
                       return {b.time, b.qfi_rewritten, b.sql_crossover_n};
                   }}}});

    m.push_back({"usc",
                 {{"qfi",
                   {{"omega", 1.0}, {"big_omega", 50.0}, {"g", 0.0}, {"eta", 1.0}, {"kappa", 1.0}, {"delta", 1.0}},
                   {"g_over_gc", "qfi", "amplitude_part", "phase_part", "enhancement_e4xi", "printed", "leading"},
                   [](const Args& a) -> V {
                       const auto p = usc_of(a);
                       const auto q = bosonic::usc_qfi_omega(p);
                       const auto pr = bosonic::usc_qfi_printed(p);
                       return {p.g / bosonic::usc_critical_coupling(p), q.total, q.amplitude_part, q.phase_part,
                               q.enhancement_e4xi, pr.first + pr.second, bosonic::usc_qfi_leading(p)};
                   }}}});

    m.push_back({"kerr",
                 {{"steady",
                   {{"omega0", 1.0}, {"epsilon", 0.5}, {"gamma", 1.0}, {"n_max", 0.0}},
                   {"photon_number", "qfi", "homodyne_fi", "homodyne_ratio", "phi_star"},
                   [](const Args& a) -> V {
                       const auto p = kerr_of(a);
                       const auto h = kerr::homodyne_check_steady(p);
                       return {kerr::steady_photon_number(p), h.qfi, h.fi_opt, h.ratio, h.phi_star};
                   }},
                  {"dynamic",
                   {{"omega0", 1.0}, {"epsilon", 0.5}, {"gamma", 1.0}, {"n_max", 0.0}, {"t", 1.0}},
                   {"photon_number", "qfi", "homodyne_ratio", "unitary_ratio"},
                   [](const Args& a) -> V {
                       const auto p = kerr_of(a);
                       const double t = a.at("t");
                       const double n = kerr::photon_number_t(p, t);
                       const auto h = kerr::homodyne_check_at(p, t);
                       const double u = kerr::qfi_unitary_scaling(n, t);
                       return {n, h.qfi, h.ratio, u > 0.0 ? h.qfi / u : NAN};
                   }},
                  {"protocol",
                   {{"omega0", 1.0}, {"epsilon", 0.0}, {"gamma", 1.0}, {"n_max", 100.0}},
                   {"epsilon_opt", "t_opt", "qfi_single", "qfi_total_rate"},
                   [](const Args& a) -> V {
                       const auto o = kerr::optimal_protocol(kerr_of(a));
                       return {o.epsilon_opt, o.t_opt, o.qfi_single, o.qfi_total_rate};
                   }}}});

    m.push_back({"mrlm",
                 {{"occupation",
                   {{"eps_d", 0.1}, {"gamma_hyb", 1.0}, {"temperature", 0.01}},
                   {"occupation", "docc_deps", "qfi", "crossover_scale"},
                   [](const Args& a) -> V {
                       const auto p = mrlm_of(a);
                       return {mrlm::dot_occupation(p), mrlm::docc_deps(p), mrlm::qfi_epsd(p), mrlm::crossover_scale(p)};
                   }}}});
    return m;
}

inline std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
}

} // namespace detail

inline const std::vector<Model>& registry() {
    static const std::vector<Model> r = detail::build_registry();
    return r;
}

inline std::vector<std::string> model_names() {
    std::vector<std::string> out;
    for (const auto& m : registry()) out.push_back(m.name);
    return out;
}

inline const Model& find_model(const std::string& name) {
    for (const auto& m : registry())
        if (m.name == name) return m;
    throw UsageError("unknown model '" + name + "'; valid models: " + detail::join(model_names()));
}

inline const Operation& find_operation(const std::string& model, const std::string& op) {
    const Model& m = find_model(model);
    std::vector<std::string> names;
    for (const auto& o : m.ops) {
        if (o.name == op) return o;
        names.push_back(o.name);
    }
    throw UsageError("unknown operation '" + op + "' for model '" + model + "'; valid operations: " + detail::join(names));
}

// ---- grids

inline std::vector<double> grid_values(const Grid& g) {
    if (g.points < 1) throw UsageError("empty grid (points must be >= 1)");
    if (!std::isfinite(g.min) || !std::isfinite(g.max)) throw UsageError("grid bounds must be finite");
    if (g.scale == Scale::log && !(g.min > 0.0 && g.max > 0.0)) throw UsageError("log grid bounds must be strictly positive");
    if (g.points == 1) return {g.min};
    std::vector<double> v(static_cast<std::size_t>(g.points));
    const double last = g.points - 1;
    for (int i = 0; i < g.points; ++i) {
        const double f = i / last;
        v[static_cast<std::size_t>(i)] = g.scale == Scale::lin
                                             ? g.min + (g.max - g.min) * f
                                             : std::exp(std::log(g.min) + (std::log(g.max) - std::log(g.min)) * f);
    }
    v.front() = g.min;
    v.back() = g.max;
    return v;
}

inline double parse_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + " '" + s + "'");
    }
    if (used != s.size()) throw UsageError("cannot parse " + what + " '" + s + "'");
    return v;
}

// min:max:points[:log|:lin]
inline Grid parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 3 || parts.size() > 4) throw UsageError("grid must be min:max:points[:log], got '" + spec + "'");
    Grid g;
    g.min = parse_number(parts[0], "grid min");
    g.max = parse_number(parts[1], "grid max");
    const double pts = parse_number(parts[2], "grid points");
    if (pts != std::floor(pts) || pts > 1e7) throw UsageError("grid points must be an integer, got '" + parts[2] + "'");
    g.points = static_cast<int>(pts);
    if (parts.size() == 4) {
        if (parts[3] == "log") g.scale = Scale::log;
        else if (parts[3] != "lin") throw UsageError("grid scale must be lin or log, got '" + parts[3] + "'");
    }
    grid_values(g);
    return g;
}

inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw UsageError("format must be csv or json, got '" + s + "'");
}

// x:y[:loglog|linear|lnsq]
inline FitRequest parse_fit(const std::string& spec) {
    const auto a = spec.find(':');
    if (a == std::string::npos) throw UsageError("fit must be x:y[:kind], got '" + spec + "'");
    FitRequest f;
    f.x = spec.substr(0, a);
    std::string rest = spec.substr(a + 1);
    const auto b = rest.find(':');
    f.y = rest.substr(0, b);
    if (b != std::string::npos) {
        const std::string k = rest.substr(b + 1);
        if (k == "linear") f.kind = FitKind::linear;
        else if (k == "lnsq") f.kind = FitKind::lnsq;
        else if (k != "loglog") throw UsageError("fit kind must be loglog, linear or lnsq, got '" + k + "'");
    }
    if (f.x.empty() || f.y.empty()) throw UsageError("fit must name two columns, got '" + spec + "'");
    return f;
}

inline const char* to_string(FitKind k) { return k == FitKind::loglog ? "loglog" : k == FitKind::linear ? "linear" : "lnsq"; }
inline const char* to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

// ---- planning

struct Axis {
    std::string name;
    std::vector<double> values;
};

struct Plan {
    const Operation* op = nullptr;
    std::vector<Axis> axes;  // operation parameter order, last varies fastest
    std::size_t rows = 1;

    std::vector<double> point(std::size_t i) const {
        std::vector<double> v(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            const auto& ax = axes[k].values;
            v[k] = ax[i % ax.size()];
            i /= ax.size();
        }
        return v;
    }
};

inline Plan plan(const ExperimentConfig& c) {
    Plan pl;
    pl.op = &find_operation(c.model, c.operation);
    if (c.workers < 1) throw UsageError("workers must be >= 1");
    std::vector<std::string> known;
    for (const auto& ps : pl.op->params) known.push_back(ps.name);
    for (const auto& [name, b] : c.params) {
        bool ok = false;
        for (const auto& k : known) ok = ok || k == name;
        if (!ok)
            throw UsageError("unknown parameter '" + name + "' for " + c.model + " " + c.operation +
                             "; valid parameters: " + detail::join(known));
    }
    for (const auto& ps : pl.op->params) {
        Axis ax{ps.name, {}};
        auto it = c.params.find(ps.name);
        if (it == c.params.end()) {
            ax.values = {ps.default_value};
        } else if (std::holds_alternative<double>(it->second)) {
            ax.values = {std::get<double>(it->second)};
            if (ps.integer && ax.values[0] != std::round(ax.values[0]))
                throw UsageError("parameter '" + ps.name + "' must be an integer");
        } else {
            ax.values = grid_values(std::get<Grid>(it->second));
            if (ps.integer)
                for (double& v : ax.values) v = std::round(v);
        }
        for (double v : ax.values)
            if (!std::isfinite(v)) throw UsageError("parameter '" + ps.name + "' must be finite");
        if (c.model == "tfim" && ps.name == "n")
            for (double v : ax.values)
                if (std::fmod(v, 2.0) != 0.0)
                    throw UsageError("tfim needs even n; the grid for n contains " + std::to_string(std::lround(v)));
        pl.rows *= ax.values.size();
        pl.axes.push_back(std::move(ax));
    }
    std::vector<std::string> cols = known;
    cols.insert(cols.end(), pl.op->outputs.begin(), pl.op->outputs.end());
    for (const auto& f : c.fits)
        for (const auto& col : {f.x, f.y}) {
            bool ok = false;
            for (const auto& k : cols) ok = ok || k == col;
            if (!ok) throw UsageError("fit column '" + col + "' is not one of: " + detail::join(cols));
        }
    return pl;
}

// ---- execution

// calls f(i) for i in [0, n) on up to `workers` threads; each index is claimed once
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& f) {
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), std::max<std::size_t>(n, 1));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < w; ++k)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
        });
    for (auto& t : pool) t.join();
}

inline nlohmann::ordered_json config_echo(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["model"] = c.model;
    j["operation"] = c.operation;
    auto params = nlohmann::ordered_json::object();
    for (const auto& [name, b] : c.params) {
        if (std::holds_alternative<double>(b)) {
            params[name] = std::get<double>(b);
        } else {
            const auto& g = std::get<Grid>(b);
            params[name] = {{"min", g.min}, {"max", g.max}, {"points", g.points}, {"scale", g.scale == Scale::lin ? "lin" : "log"}};
        }
    }
    j["params"] = params;
    j["out"] = c.out;
    j["format"] = to_string(c.format);
    j["strict"] = c.strict;
    j["seed"] = c.seed;
    auto fits = nlohmann::ordered_json::array();
    for (const auto& f : c.fits) fits.push_back({{"x", f.x}, {"y", f.y}, {"kind", to_string(f.kind)}});
    j["fits"] = fits;
    return j;
}

inline numerics::FitResult fit(ResultTable& t, const std::string& x, const std::string& y, FitKind kind = FitKind::loglog) {
    const std::size_t ix = t.column(x), iy = t.column(y);
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (!t.errors.empty() && !t.errors[r].empty()) continue;
        const double a = t.rows[r][ix], b = t.rows[r][iy];
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        xs.push_back(kind == FitKind::lnsq ? std::pow(std::log(a), 2) : a);
        ys.push_back(b);
    }
    const auto res = kind == FitKind::loglog ? numerics::loglog_fit(xs, ys) : numerics::linear_fit(xs, ys);
    if (!t.meta.contains("fits")) t.meta["fits"] = nlohmann::ordered_json::array();
    t.meta["fits"].push_back({{"x", x},
                              {"y", y},
                              {"kind", to_string(kind)},
                              {"points", xs.size()},
                              {"exponent", res.exponent},
                              {"prefactor", res.prefactor},
                              {"r_squared", res.r_squared}});
    return res;
}

inline ResultTable run(const ExperimentConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const Plan pl = plan(c);
    const Operation& op = *pl.op;
    ResultTable t;
    for (const auto& ax : pl.axes) t.columns.push_back(ax.name);
    t.columns.insert(t.columns.end(), op.outputs.begin(), op.outputs.end());
    t.rows.assign(pl.rows, {});
    t.errors.assign(pl.rows, {});

    parallel_for(pl.rows, c.workers, [&](std::size_t i) {
        std::vector<double> row = pl.point(i);
        Args a;
        for (std::size_t k = 0; k < pl.axes.size(); ++k) a[pl.axes[k].name] = row[k];
        std::vector<double> out;
        try {
            out = op.eval(a);
            if (out.size() != op.outputs.size()) throw NumericalError("operation returned the wrong number of values");
        } catch (const std::exception& e) {
            t.errors[i] = e.what();
            out.assign(op.outputs.size(), NAN);
        }
        row.insert(row.end(), out.begin(), out.end());
        t.rows[i] = std::move(row);
    });

    if (c.strict)
        for (std::size_t i = 0; i < t.errors.size(); ++i)
            if (!t.errors[i].empty()) throw RowError(i, t.errors[i]);

    t.meta["tool"] = "critmet";
    t.meta["version"] = kVersion;
    t.meta["config"] = config_echo(c);
    t.meta["columns"] = t.columns;
    t.meta["row_count"] = t.rows.size();
    t.meta["error_count"] = t.error_count();
    for (const auto& f : c.fits) {
        try {
            fit(t, f.x, f.y, f.kind);
        } catch (const Error& e) {
            if (c.strict) throw;
            if (!t.meta.contains("fits")) t.meta["fits"] = nlohmann::ordered_json::array();
            t.meta["fits"].push_back({{"x", f.x}, {"y", f.y}, {"kind", to_string(f.kind)}, {"error", e.what()}});
        }
    }
    t.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return t;
}

// ---- emission

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

inline std::string to_csv(const ResultTable& t) {
    std::string s;
    for (const auto& c : t.columns) s += csv_field(c) + ",";
    s += "error\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (double v : t.rows[r]) s += format_double(v) + ",";
        s += csv_field(t.errors.empty() ? std::string() : t.errors[r]) + "\n";
    }
    return s;
}

inline std::string to_json(const ResultTable& t) {
    nlohmann::ordered_json j;
    j["meta"] = t.meta;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        nlohmann::ordered_json row;
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            const double v = t.rows[r][c];
            if (std::isfinite(v)) row[t.columns[c]] = v;
            else row[t.columns[c]] = nullptr;
        }
        const std::string e = t.errors.empty() ? std::string() : t.errors[r];
        if (e.empty()) row["error"] = nullptr;
        else row["error"] = e;
        rows.push_back(std::move(row));
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

inline std::string render(const ResultTable& t, Format f) { return f == Format::csv ? to_csv(t) : to_json(t); }

inline void emit(const ResultTable& t, Format f, const std::string& path) {
    const std::string text = render(t, f);
    if (path.empty() || path == "-") {
        std::cout.write(text.data(), static_cast<std::streamsize>(text.size()));
        std::cout.flush();
        if (!std::cout) throw IoError("write to stdout failed");
        return;
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    os.close();
    if (!os) throw IoError("write to '" + path + "' failed");
}

// parses the CSV written by to_csv; numeric cells only, error column kept verbatim
inline ResultTable parse_csv(const std::string& text) {
    ResultTable t;
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw ValidationError("parse_csv: empty input");
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) t.columns.push_back(c);
    if (t.columns.empty() || t.columns.back() != "error") throw ValidationError("parse_csv: missing error column");
    t.columns.pop_back();
    while (std::getline(ss, line)) {
        std::vector<double> row;
        std::size_t pos = 0;
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            const auto comma = line.find(',', pos);
            if (comma == std::string::npos) throw ValidationError("parse_csv: short row");
            row.push_back(std::strtod(line.substr(pos, comma - pos).c_str(), nullptr));
            pos = comma + 1;
        }
        std::string err = line.substr(pos);
        if (err.size() >= 2 && err.front() == '"') {
            std::string u;
            for (std::size_t i = 1; i + 1 < err.size(); ++i) {
                u += err[i];
                if (err[i] == '"') ++i;
            }
            err = u;
        }
        t.rows.push_back(std::move(row));
        t.errors.push_back(err);
    }
    return t;
}

} // namespace critmet::harness
