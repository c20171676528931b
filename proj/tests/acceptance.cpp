// Acceptance gate: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "treeca/lab.hpp"
#include "treeca/rules.hpp"

using namespace treeca;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

const TreeParams k3{3};
const Alphabet a2{2};

// Runs a suite and folds the report into an outcome.
Outcome suite_outcome(const std::vector<SuiteCase>& cases, const std::string& suite, std::size_t min_cases,
                      const std::string& label = {}) {
    const SuiteReport report = run_cases(cases, suite_check(suite));
    Outcome out;
    out.detail = (label.empty() ? suite : label) + ": " + std::to_string(cases.size()) + " cases, " + std::to_string(report.failures.size()) +
                 " failures";
    if (cases.size() < min_cases) {
        out.pass = false;
        out.detail += " (expected at least " + std::to_string(min_cases) + ")";
    }
    if (!report.ok()) {
        out.pass = false;
        out.detail += "; first: " + report.failures.front().message;
    }
    return out;
}

Outcome both(Outcome a, const Outcome& b) {
    a.pass = a.pass && b.pass;
    a.detail += "; " + b.detail;
    return a;
}

Outcome combinatorial_checkpoints() {
    Outcome out;
    const auto expect = [&](const std::string& what, std::uint64_t got, std::uint64_t want) {
        if (got != want) {
            out.pass = false;
            out.detail += what + "=" + std::to_string(got) + " (want " + std::to_string(want) + ") ";
        }
    };
    const auto r1 = enumerate_canonical_balls(k3, a2, 1).size();
    const auto r2 = enumerate_canonical_balls(k3, a2, 2).size();
    expect("balls r=1", r1, 8);
    expect("balls r=2", r2, 112);
    expect("orbits r=1", oracle::orbit_count(oracle::RootedBall(3, 1), 2), r1);
    expect("orbits r=2", oracle::orbit_count(oracle::RootedBall(3, 2), 2), r2);

    const RuleEnumeration k3_family(k3, a2, 1);
    const RuleEnumeration k2_family(TreeParams{2}, a2, 1);
    std::uint64_t quiescent = 0;
    k3_family.for_each([&](const Rule& r) { quiescent += r.quiescent() ? 1 : 0; });
    expect("rules k=3", k3_family.size(), 256);
    expect("quiescent k=3", quiescent, 128);
    expect("rules k=2", k2_family.size(), 64);
    if (out.pass) out.detail = "8 and 112 balls match the orbit oracle; 256/128 and 64 rules";
    return out;
}

Outcome oracle_equivalence() {
    SuiteOptions opt;
    opt.cases_per_rule = 8;  // 1024 random cases on top of the 128 * 16 sweep
    return suite_outcome(suite_cases("oracle", opt), "oracle", 128 * 16 + 1000);
}

Outcome equivariance() {
    SuiteOptions opt;
    opt.cases_per_rule = 8;
    return suite_outcome(suite_cases("equivariance", opt), "equivariance", 1000);
}

Outcome additivity() {
    SuiteOptions opt;
    opt.cases_per_rule = 8;
    return suite_outcome(suite_cases("additivity", opt), "additivity", 1000);
}

Outcome conjugacy() {
    SuiteOptions opt;
    opt.cases_per_rule = 10;
    // every generated 1D configuration at n = 1, 2, 3
    std::vector<SuiteCase> cases;
    for (const auto& c : suite_cases("conjugacy", opt)) {
        for (int n = 1; n <= 3; ++n) {
            SuiteCase copy = c;
            copy.step = n;
            cases.push_back(std::move(copy));
        }
    }
    return suite_outcome(cases, "conjugacy", 128 * 10 * 3);
}

Outcome nilpotency_transfer() {
    SuiteOptions opt;
    opt.n_max = 4;
    Outcome out = both(suite_outcome(suite_cases("transfer", opt), "transfer", 128),
                       suite_outcome(suite_cases("nilpotency", opt), "nilpotency", 128 * 4));
    const auto result = census(k3, a2, 1, Horizons{});
    if (result.summary.consistency_violations != 0) {
        out.pass = false;
        out.detail += "; census consistency violations: " + std::to_string(result.summary.consistency_violations);
    }
    out.detail += "; census tree-nilpotent " + std::to_string(result.summary.tree_nilpotent) + ", quotient-nilpotent " +
                  std::to_string(result.summary.quotient_nilpotent);
    return out;
}

Outcome invariance_suites() {
    SuiteOptions opt;
    opt.cases_per_rule = 8;
    Outcome out = both(suite_outcome(suite_cases("zu", opt), "zu", 1000),
                       suite_outcome(suite_cases("singleton", opt), "singleton", 128));
    opt.params = TreeParams{2};
    out = both(out, suite_outcome(suite_cases("zu", opt), "zu", 1, "zu k=2"));
    return both(out, suite_outcome(suite_cases("singleton", opt), "singleton", 1, "singleton k=2"));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    Outcome out;
    const Horizons h;
    const std::string a = census_csv(census(k3, a2, 1, h), k3, a2, 1, h);
    const std::string b = census_csv(census(k3, a2, 1, h, std::nullopt, {}, 4), k3, a2, 1, h);
    if (a != b) {
        out.pass = false;
        out.detail = "library CSV differs between runs";
        return out;
    }
    const auto dir = std::filesystem::temp_directory_path() / "treeca-acceptance";
    std::filesystem::create_directories(dir);
    std::string previous;
    for (const char* threads : {"1", "3"}) {
        const auto file = dir / (std::string("census-") + threads + ".csv");
        const std::string cmd = std::string("TREECA_THREADS=") + threads + " " + TREECA_CLI +
                                " census --k 3 --alphabet 2 --radius 1 --seed 1 --out " + file.string() + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
            out.pass = false;
            out.detail = "CLI census failed";
            return out;
        }
        const std::string text = slurp(file);
        if (text != a || (!previous.empty() && text != previous)) {
            out.pass = false;
            out.detail = "CLI CSV differs (threads=" + std::string(threads) + ")";
            return out;
        }
        previous = text;
    }
    std::filesystem::remove_all(dir);
    out.detail = "byte-identical CSV (" + std::to_string(a.size()) + " bytes) across 4 runs";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 combinatorial checkpoints", combinatorial_checkpoints},
        {"2 oracle equivalence", oracle_equivalence},
        {"3 equivariance", equivariance},
        {"4 additivity", additivity},
        {"5 quotient conjugacy", conjugacy},
        {"6 nilpotency transfer", nilpotency_transfer},
        {"7 invariance suites", invariance_suites},
        {"8 determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.1fs", secs);
        std::cout << (out.pass ? "PASS" : "FAIL") << "  " << name << "  [" << timing << "]  " << out.detail << std::endl;
        failed += out.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
