// Runs every acceptance preset and prints one PASS/FAIL line per criterion.
// Optional arguments restrict the run to the named presets. Exit status is 1 if any ran criterion fails.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "critmet/presets.hpp"

int main(int argc, char** argv) {
    using namespace critmet;
    std::vector<std::string> only(argv + 1, argv + argc);
    int failed = 0, ran = 0;
    for (const auto& p : presets::all()) {
        if (!only.empty() && std::find(only.begin(), only.end(), p.name) == only.end()) continue;
        ++ran;
        presets::PresetResult r;
        try {
            r = presets::run(p);
        } catch (const std::exception& e) {
            std::printf("FAIL %2d %-18s threw: %s\n", p.criterion, p.name.c_str(), e.what());
            ++failed;
            continue;
        }
        std::string detail = r.summary();
        if (!r.within_budget()) detail += "; over the runtime budget";
        std::printf("%s %2d %-18s %.2fs/%gs  %s\n", r.pass() ? "PASS" : "FAIL", r.criterion, r.name.c_str(), r.seconds,
                    r.budget_seconds, detail.c_str());
        for (const auto& c : r.checks)
            if (!c.pass) std::printf("        - %s = %s, needs %s\n", c.name.c_str(), harness::format_double(c.observed).c_str(), c.bound.c_str());
        std::fflush(stdout);
        failed += !r.pass();
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed ? 1 : 0;
}
