#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "critmet/harness.hpp"
#include "critmet/presets.hpp"

using namespace critmet;
using namespace critmet::harness;

namespace {

ExperimentConfig cfg(std::string model, std::string op, std::map<std::string, Binding> params = {}) {
    ExperimentConfig c;
    c.model = std::move(model);
    c.operation = std::move(op);
    c.params = std::move(params);
    return c;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST(Grid, LinearAndLogEndpointsExact) {
    const auto v = grid_values({0.0, 3.0, 301, Scale::lin});
    ASSERT_EQ(v.size(), 301u);
    EXPECT_EQ(v.front(), 0.0);
    EXPECT_EQ(v.back(), 3.0);
    EXPECT_NEAR(v[100], 1.0, 1e-15);
    const auto l = grid_values({8, 4096, 10, Scale::log});
    EXPECT_EQ(l.front(), 8.0);
    EXPECT_EQ(l.back(), 4096.0);
    for (size_t i = 1; i < l.size(); ++i) EXPECT_NEAR(l[i] / l[i - 1], 2.0, 1e-12);
    EXPECT_EQ(grid_values({2.5, 9.0, 1, Scale::lin}), std::vector<double>{2.5});
}

TEST(Grid, RejectsEmptyAndNonPositiveLog) {
    EXPECT_THROW(grid_values({0.0, 1.0, 0, Scale::lin}), UsageError);
    EXPECT_THROW(grid_values({0.0, 1.0, 5, Scale::log}), UsageError);
    EXPECT_THROW(grid_values({-1.0, 1.0, 5, Scale::log}), UsageError);
}

TEST(Grid, Parse) {
    const Grid g = parse_grid("-1:2.5:7");
    EXPECT_EQ(g.min, -1.0);
    EXPECT_EQ(g.max, 2.5);
    EXPECT_EQ(g.points, 7);
    EXPECT_EQ(g.scale, Scale::lin);
    EXPECT_EQ(parse_grid("1e-3:1:4:log").scale, Scale::log);
    EXPECT_THROW(parse_grid("0:1"), UsageError);
    EXPECT_THROW(parse_grid("0:1:0"), UsageError);
    EXPECT_THROW(parse_grid("0:1:2.5"), UsageError);
    EXPECT_THROW(parse_grid("0:1:5:cubic"), UsageError);
    EXPECT_THROW(parse_grid("a:1:5"), UsageError);
    EXPECT_THROW(parse_grid("0:1:5:log"), UsageError);
}

TEST(Registry, EveryModelHasOperations) {
    const std::vector<std::string> want = {"ramsey", "lz", "tfim", "lmg", "oscillator", "usc", "kerr", "mrlm"};
    EXPECT_EQ(model_names(), want);
    for (const auto& m : registry()) {
        EXPECT_FALSE(m.ops.empty()) << m.name;
        for (const auto& op : m.ops) {
            // defaults must evaluate cleanly
            const auto t = run(cfg(m.name, op.name));
            ASSERT_EQ(t.rows.size(), 1u);
            EXPECT_EQ(t.error_count(), 0u) << m.name << " " << op.name << ": " << t.errors[0];
            EXPECT_EQ(t.columns.size(), op.params.size() + op.outputs.size());
        }
    }
}

TEST(Registry, UnknownModelOrOperationListsChoices) {
    try {
        run(cfg("ising", "qfi"));
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("ramsey, lz, tfim"), std::string::npos);
    }
    try {
        run(cfg("lz", "bogus"));
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("valid operations: qfi, thermal, qfim"), std::string::npos) << e.what();
    }
    EXPECT_THROW(run(cfg("lz", "qfi", {{"temperature", 1.0}})), UsageError);
}

TEST(Run, LzQfiPeaksAtG1) {
    const auto t = run(cfg("lz", "qfi", {{"omega", 1.0}, {"g", Grid{0.0, 3.0, 301, Scale::lin}}}));
    ASSERT_EQ(t.rows.size(), 301u);
    const size_t q = t.column("qfi"), g = t.column("g");
    size_t best = 0;
    for (size_t i = 1; i < t.rows.size(); ++i)
        if (t.rows[i][q] > t.rows[best][q]) best = i;
    EXPECT_NEAR(t.rows[best][g], 1.0, 1e-12);
    EXPECT_NEAR(t.rows[best][q], 0.25, 1e-15);
}

TEST(Run, RowOrderIsLexicographicInParameterOrder) {
    const auto t = run(cfg("lz", "thermal", {{"temperature", Grid{1.0, 2.0, 2, Scale::lin}}, {"omega", Grid{1.0, 3.0, 3, Scale::lin}}}));
    ASSERT_EQ(t.rows.size(), 6u);
    // omega is declared first, so it varies slowest
    const std::vector<std::pair<double, double>> want = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}, {3, 2}};
    for (size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(t.rows[i][t.column("omega")], want[i].first);
        EXPECT_EQ(t.rows[i][t.column("temperature")], want[i].second);
    }
}

TEST(Run, TfimScalingExponent) {
    auto c = cfg("tfim", "qfi", {{"n", Grid{8, 4096, 10, Scale::log}}});
    c.fits = {{"n", "qfi", FitKind::loglog}};
    const auto t = run(c);
    ASSERT_EQ(t.rows.size(), 10u);
    EXPECT_EQ(t.rows[0][t.column("n")], 8.0);
    EXPECT_EQ(t.rows[9][t.column("n")], 4096.0);
    EXPECT_NEAR(t.meta["fits"][0]["exponent"].get<double>(), 2.0, 0.02);
}

TEST(Run, TfimNeedsEvenN) {
    EXPECT_THROW(run(cfg("tfim", "qfi", {{"n", 9.0}})), UsageError);
    EXPECT_THROW(run(cfg("tfim", "qfi", {{"n", Grid{8, 16, 9, Scale::lin}}})), UsageError);
    EXPECT_NO_THROW(run(cfg("tfim", "qfi", {{"n", Grid{8, 16, 5, Scale::lin}}})));
    EXPECT_THROW(run(cfg("lmg", "qfi", {{"level", 1.5}})), UsageError);
}

TEST(Run, EmptyGridIsUsageError) {
    EXPECT_THROW(run(cfg("lz", "qfi", {{"g", Grid{0.0, 1.0, 0, Scale::lin}}})), UsageError);
}

TEST(Run, DomainErrorsArePerRowUnlessStrict) {
    auto c = cfg("kerr", "steady", {{"epsilon", Grid{0.5, 2.0, 4, Scale::lin}}});
    const auto t = run(c);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_TRUE(t.errors[0].empty());
    EXPECT_FALSE(t.errors[3].empty());
    EXPECT_TRUE(std::isnan(t.rows[3][t.column("qfi")]));
    EXPECT_EQ(t.rows[3][t.column("epsilon")], 2.0);
    EXPECT_EQ(t.meta["error_count"].get<size_t>(), t.error_count());
    c.strict = true;
    try {
        run(c);
        FAIL();
    } catch (const RowError& e) {
        EXPECT_EQ(e.row(), 2u);  // epsilon = 1.5 > sqrt(2)
    }
}

TEST(Run, WorkerCountDoesNotChangeOutput) {
    auto c = cfg("mrlm", "occupation", {{"eps_d", Grid{-0.6, 0.6, 25, Scale::lin}}, {"temperature", Grid{1e-4, 0.1, 5, Scale::log}}});
    const auto a = run(c);
    c.workers = 7;
    const auto b = run(c);
    EXPECT_EQ(to_csv(a), to_csv(b));
    EXPECT_EQ(to_json(a), to_json(b));
    EXPECT_THROW(
        [] {
            auto d = cfg("lz", "qfi");
            d.workers = 0;
            run(d);
        }(),
        UsageError);
}

TEST(Fit, ConstantColumnAndLnsq) {
    ResultTable t;
    t.columns = {"x", "y", "z"};
    for (double x : {2.0, 4.0, 8.0, 16.0}) {
        t.rows.push_back({x, 3.0, 5.0 + 2.0 * std::pow(std::log(x), 2)});
        t.errors.emplace_back();
    }
    const auto f = fit(t, "x", "y");
    EXPECT_NEAR(f.exponent, 0.0, 1e-14);
    EXPECT_NEAR(f.prefactor, 3.0, 1e-13);
    const auto g = fit(t, "x", "z", FitKind::lnsq);
    EXPECT_NEAR(g.exponent, 2.0, 1e-12);
    EXPECT_NEAR(g.r_squared, 1.0, 1e-12);
    EXPECT_EQ(t.meta["fits"].size(), 2u);
    EXPECT_THROW(fit(t, "x", "w"), UsageError);
}

TEST(Fit, SkipsErrorRowsAndReportsFailures) {
    auto c = cfg("kerr", "steady", {{"epsilon", Grid{0.2, 2.0, 10, Scale::lin}}});
    c.fits = {{"epsilon", "photon_number", FitKind::loglog}};
    const auto t = run(c);
    EXPECT_EQ(t.meta["fits"][0]["points"].get<size_t>(), 10 - t.error_count());
    // log-log fit of a column holding zeros fails; recorded, not thrown
    auto d = cfg("lz", "qfi", {{"g", Grid{0.0, 1.0, 5, Scale::lin}}});
    d.fits = {{"g", "qfi", FitKind::loglog}};
    const auto u = run(d);
    EXPECT_TRUE(u.meta["fits"][0].contains("error"));
    d.strict = true;
    EXPECT_THROW(run(d), DomainError);
    d.fits = {{"g", "nope", FitKind::loglog}};
    EXPECT_THROW(run(d), UsageError);
}

TEST(Emit, CsvFormatAndRoundTrip) {
    auto c = cfg("lz", "thermal", {{"g", Grid{0.1, 2.0, 7, Scale::lin}}, {"temperature", Grid{1e-3, 10.0, 5, Scale::log}}});
    const auto t = run(c);
    const std::string csv = to_csv(t);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "omega,g,temperature,qfi,population_term,weight,snr_sigmaz,qfim_det,error");
    const auto back = parse_csv(csv);
    ASSERT_EQ(back.rows.size(), t.rows.size());
    for (size_t r = 0; r < t.rows.size(); ++r)
        for (size_t k = 0; k < t.columns.size(); ++k) EXPECT_EQ(back.rows[r][k], t.rows[r][k]);
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(NAN), "nan");
}

TEST(Emit, CsvQuotesErrors) {
    auto t = run(cfg("kerr", "steady", {{"epsilon", 3.0}}));
    t.errors[0] = "bad, \"quoted\"";
    const auto back = parse_csv(to_csv(t));
    EXPECT_EQ(back.errors[0], t.errors[0]);
}

TEST(Emit, JsonHasMetaAndRows) {
    auto c = cfg("kerr", "steady", {{"epsilon", Grid{1.0, 2.0, 3, Scale::lin}}});
    c.seed = 42;
    const auto t = run(c);
    const auto j = nlohmann::json::parse(to_json(t));
    ASSERT_TRUE(j.contains("meta"));
    ASSERT_TRUE(j["rows"].is_array());
    EXPECT_EQ(j["rows"].size(), 3u);
    EXPECT_EQ(j["meta"]["config"]["model"], "kerr");
    EXPECT_EQ(j["meta"]["config"]["seed"], 42);
    EXPECT_EQ(j["meta"]["config"]["params"]["epsilon"]["points"], 3);
    EXPECT_EQ(j["meta"]["version"], kVersion);
    EXPECT_TRUE(j["rows"][0]["error"].is_null());
    EXPECT_TRUE(j["rows"][2]["qfi"].is_null());
    EXPECT_TRUE(j["rows"][2]["error"].is_string());
    EXPECT_EQ(j["rows"][0]["photon_number"].get<double>(), t.rows[0][t.column("photon_number")]);
}

TEST(Emit, WritesFileAndSurfacesIoErrors) {
    const auto t = run(cfg("oscillator", "qfi"));
    const std::string path = ::testing::TempDir() + "critmet_emit.csv";
    emit(t, Format::csv, path);
    EXPECT_EQ(slurp(path), to_csv(t));
    std::remove(path.c_str());
    try {
        emit(t, Format::json, "/nonexistent-dir/x.json");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.json"), std::string::npos);
    }
}

TEST(Emit, DeterministicBytes) {
    auto c = cfg("usc", "qfi", {{"g", Grid{0.0, 6.0, 9, Scale::lin}}, {"delta", Grid{-1.0, 1.0, 3, Scale::lin}}});
    EXPECT_EQ(to_json(run(c)), to_json(run(c)));
    EXPECT_EQ(to_csv(run(c)), to_csv(run(c)));
}

TEST(Presets, NamesAndLookup) {
    ASSERT_EQ(presets::all().size(), 13u);
    for (size_t i = 0; i < presets::all().size(); ++i) EXPECT_EQ(presets::all()[i].criterion, int(i) + 1);
    EXPECT_THROW(presets::find("nope"), UsageError);
    const auto r = presets::run("lz-ground");
    EXPECT_TRUE(r.checks_pass()) << r.summary();
    EXPECT_TRUE(r.table.meta["preset"]["pass"].get<bool>());
    EXPECT_EQ(r.table.meta["preset"]["criterion"], 4);
}
