// critmet command-line front end.
//
//   critmet <model> <operation> [--<name> value | --<name>-grid min:max:points[:log]]...
//           [--param name=value] [--param-grid name=min:max:points[:log]]
//           [--fit x:y[:loglog|linear|lnsq]] [--out PATH] [--format csv|json]
//           [--workers W] [--strict] [--seed S]
//   critmet preset <name> [--out PATH] [--format csv|json]
//   critmet list
//
// Exit codes: 0 success, 2 usage error, 3 domain error (strict mode), 4 I/O error.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "critmet/harness.hpp"
#include "critmet/presets.hpp"

namespace {

using namespace critmet;

constexpr int kUsage = 2, kDomain = 3, kIo = 4;

struct Shorthand {
    std::string name;
    std::string value;
    bool grid;
};

// pulls --<name> value / --<name>-grid spec pairs out of argv; CLI11 handles the rest
std::vector<std::string> split_shorthand(const std::vector<std::string>& args, std::vector<Shorthand>& out) {
    static const std::set<std::string> known = {"--out", "--format", "--workers", "--strict", "--seed", "--fit",
                                                "--param", "--param-grid", "--help", "--version"};
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0 || a.size() == 2) {
            rest.push_back(a);
            continue;
        }
        std::string key = a, val;
        bool inline_val = false;
        if (const auto eq = a.find('='); eq != std::string::npos) {
            key = a.substr(0, eq);
            val = a.substr(eq + 1);
            inline_val = true;
        }
        if (known.count(key)) {
            rest.push_back(a);
            continue;
        }
        if (!inline_val) {
            if (i + 1 >= args.size()) throw harness::UsageError("option " + key + " needs a value");
            val = args[++i];
        }
        std::string name = key.substr(2);
        const bool grid = name.size() > 5 && name.compare(name.size() - 5, 5, "-grid") == 0;
        if (grid) name.resize(name.size() - 5);
        out.push_back({name, val, grid});
    }
    return rest;
}

void bind_param(harness::ExperimentConfig& c, const std::string& name, harness::Binding b) {
    if (name.empty()) throw harness::UsageError("parameter name is empty");
    if (!c.params.emplace(name, std::move(b)).second) throw harness::UsageError("parameter '" + name + "' bound twice");
}

std::pair<std::string, std::string> split_eq(const std::string& s, const char* opt) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw harness::UsageError(std::string(opt) + " expects name=value, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

int default_workers() {
    const char* env = std::getenv("CRITMET_WORKERS");
    if (!env || !*env) return 1;
    const double w = harness::parse_number(env, "CRITMET_WORKERS");
    if (w < 1 || w != static_cast<int>(w)) throw harness::UsageError("CRITMET_WORKERS must be a positive integer");
    return static_cast<int>(w);
}

void print_list() {
    for (const auto& m : harness::registry()) {
        for (const auto& op : m.ops) {
            std::cout << m.name << " " << op.name << ":";
            for (const auto& p : op.params) std::cout << " --" << p.name << " (" << p.default_value << ")";
            std::cout << " -> " << harness::detail::join(op.outputs) << "\n";
        }
    }
    std::cout << "presets: " << harness::detail::join(presets::names()) << "\n";
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<Shorthand> shorthand;
    auto rest = split_shorthand(args, shorthand);

    CLI::App app{"critmet: critical-metrology sweeps and acceptance presets"};
    std::vector<std::string> positionals;
    std::string out, format = "csv";
    std::vector<std::string> params, grids, fits;
    int workers = -1;
    bool strict = false;
    std::uint64_t seed = 0;
    app.add_option("target", positionals, "<model> <operation> | preset <name> | list")->expected(0, 2);
    app.add_option("--out", out, "output path (default stdout)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--workers", workers, "worker threads (default $CRITMET_WORKERS or 1)");
    app.add_flag("--strict", strict, "abort on the first failing row");
    app.add_option("--seed", seed, "seed recorded with the config");
    app.add_option("--param", params, "name=value")->take_all();
    app.add_option("--param-grid", grids, "name=min:max:points[:log]")->take_all();
    app.add_option("--fit", fits, "x:y[:loglog|linear|lnsq]")->take_all();
    app.set_version_flag("--version", harness::kVersion);

    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kUsage;
    }

    const harness::Format fmt = harness::parse_format(format);
    if (positionals.size() == 1 && positionals[0] == "list") {
        print_list();
        return 0;
    }
    if (positionals.empty()) throw harness::UsageError("missing <model>; valid models: " + harness::detail::join(harness::model_names()));

    if (positionals[0] == "preset") {
        if (positionals.size() < 2) throw harness::UsageError("missing preset name; valid presets: " + harness::detail::join(presets::names()));
        if (!shorthand.empty() || !params.empty() || !grids.empty()) throw harness::UsageError("presets take no parameters");
        const auto r = presets::run(positionals[1]);
        harness::emit(r.table, fmt, out);
        std::cerr << (r.checks_pass() ? "PASS" : "FAIL") << " criterion " << r.criterion << " " << r.name << ": " << r.summary() << "\n";
        return 0;
    }
    if (positionals.size() < 2) {
        harness::find_model(positionals[0]);
        std::vector<std::string> ops;
        for (const auto& o : harness::find_model(positionals[0]).ops) ops.push_back(o.name);
        throw harness::UsageError("missing <operation> for model '" + positionals[0] + "'; valid operations: " + harness::detail::join(ops));
    }

    harness::ExperimentConfig c;
    c.model = positionals[0];
    c.operation = positionals[1];
    c.out = out;
    c.format = fmt;
    c.strict = strict;
    c.seed = seed;
    if (workers != -1 && workers < 1) throw harness::UsageError("--workers must be >= 1");
    c.workers = workers == -1 ? default_workers() : workers;
    for (const auto& s : shorthand) {
        if (s.grid) bind_param(c, s.name, harness::parse_grid(s.value));
        else bind_param(c, s.name, harness::parse_number(s.value, "value for --" + s.name));
    }
    for (const auto& p : params) {
        auto [k, v] = split_eq(p, "--param");
        bind_param(c, k, harness::parse_number(v, "value for " + k));
    }
    for (const auto& g : grids) {
        auto [k, v] = split_eq(g, "--param-grid");
        bind_param(c, k, harness::parse_grid(v));
    }
    for (const auto& f : fits) c.fits.push_back(harness::parse_fit(f));

    const auto table = harness::run(c);
    harness::emit(table, fmt, out);
    if (const auto n = table.error_count()) std::cerr << "critmet: " << n << " of " << table.rows.size() << " rows reported errors\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const harness::UsageError& e) {
        std::cerr << "critmet: usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const harness::IoError& e) {
        std::cerr << "critmet: I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const harness::RowError& e) {
        std::cerr << "critmet: domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const critmet::ValidationError& e) {
        std::cerr << "critmet: usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const critmet::Error& e) {
        std::cerr << "critmet: domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::exception& e) {
        std::cerr << "critmet: internal error: " << e.what() << "\n";
        return 1;
    }
}
