// treeca: command-line front end for the tree CA library.
//
// Exit codes: 0 success, 1 a checked property failed, 2 usage, parse or
// capacity errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "treeca/errors.hpp"
#include "treeca/io.hpp"
#include "treeca/lab.hpp"

namespace {

using namespace treeca;

constexpr int kPropertyFailure = 1;
constexpr int kUsage = 2;

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        io::write_text(out_path, text);
    }
}

Rule load_rule(const std::string& path, const Limits& limits) { return io::rule_from_json(io::read_json(path), limits); }

unsigned thread_count() {
    if (const char* env = std::getenv("TREECA_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n >= 1) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
        std::cerr << "treeca: ignoring TREECA_THREADS='" << env << "'\n";
        return 1;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct FamilyFlags {
    int k = 3;
    int alphabet = 2;
    int radius = 1;

    void add(CLI::App* app) {
        app->add_option("--k", k, "tree degree")->capture_default_str();
        app->add_option("--alphabet", alphabet, "alphabet size")->capture_default_str();
        app->add_option("--radius", radius, "rule radius")->capture_default_str();
    }
};

std::pair<std::uint64_t, std::uint64_t> parse_shard(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("shard must look like BEGIN:END");
    try {
        return {std::stoull(text.substr(0, colon)), std::stoull(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ParseError("shard must look like BEGIN:END");
    }
}

int report_suites(const SuiteReport& report, const std::string& dump_dir) {
    for (const auto& [name, tally] : report.tallies) {
        std::cout << name << ": " << tally.passed << " passed, " << tally.failed << " failed\n";
    }
    for (std::size_t i = 0; i < report.failures.size(); ++i) {
        const auto& f = report.failures[i];
        const std::filesystem::path dir = std::filesystem::path(dump_dir) / (f.failing_case.suite + "-" + std::to_string(i));
        dump_counterexample(f, dir);
        std::cout << "FAIL " << f.message << "\n  replay: treeca verify --suite " << f.failing_case.suite
                  << " --rule " << (dir / "rule.json").string() << " --config " << (dir / "config.txt").string()
                  << " --step " << f.failing_case.step << " --aux " << (dir / "case.json").string() << "\n";
    }
    return report.ok() ? 0 : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cellular automata on regular trees"};
    app.require_subcommand(1);
    Limits limits;
    app.add_option("--max-balls", limits.max_canonical_balls, "cap on canonical balls per radius")->capture_default_str();
    app.add_option("--max-rules", limits.max_rules, "cap on rules per enumeration")->capture_default_str();
    app.add_option("--max-windows", limits.max_windows, "cap on 1D windows per check")->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a rule on a finite configuration");
    std::string sim_rule, sim_config, sim_out, sim_format = "text";
    int sim_steps = 1;
    sim->add_option("--rule", sim_rule, "rule file (JSON)")->required();
    sim->add_option("--config", sim_config, "configuration file")->required();
    sim->add_option("--steps", sim_steps, "number of steps")->check(CLI::NonNegativeNumber)->capture_default_str();
    sim->add_option("--out", sim_out, "output file (default stdout)");
    sim->add_option("--format", sim_format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    // quotient
    auto* quot = app.add_subcommand("quotient", "induced rule on the integers");
    std::string quot_rule, quot_out, quot_config;
    int quot_steps = 0;
    std::optional<int> quot_nmax;
    quot->add_option("--rule", quot_rule, "tree rule file")->required();
    quot->add_option("--out", quot_out, "1D rule output file (default stdout)");
    quot->add_option("--config", quot_config, "1D configuration to simulate");
    quot->add_option("--steps", quot_steps, "1D steps to simulate")->check(CLI::NonNegativeNumber);
    quot->add_option("--nmax", quot_nmax, "report the 1D nilpotency horizon up to this n");

    // census
    auto* cen = app.add_subcommand("census", "classify every rule of a family");
    FamilyFlags cen_family;
    cen_family.add(cen);
    Horizons horizons;
    std::string cen_out, cen_format = "csv", cen_shard, cen_summary;
    cen->add_option("--nmax", horizons.n_max, "nilpotency horizon")->check(CLI::PositiveNumber)->capture_default_str();
    cen->add_option("--tmax", horizons.t_max, "steps per sampled trajectory")->check(CLI::NonNegativeNumber)->capture_default_str();
    cen->add_option("--samples", horizons.samples, "sampled configurations per rule")->check(CLI::NonNegativeNumber)->capture_default_str();
    cen->add_option("--seed", horizons.seed, "sampling seed")->capture_default_str();
    cen->add_option("--shard", cen_shard, "index range BEGIN:END");
    cen->add_option("--out", cen_out, "output file (default stdout)");
    cen->add_option("--format", cen_format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
    cen->add_option("--summary", cen_summary, "write the summary JSON here");

    // classify
    auto* cls = app.add_subcommand("classify", "classify one rule");
    std::string cls_rule;
    std::optional<std::uint64_t> cls_index;
    FamilyFlags cls_family;
    cls_family.add(cls);
    Horizons cls_h;
    auto* cls_rule_opt = cls->add_option("--rule", cls_rule, "rule file");
    cls->add_option("--index", cls_index, "rule index within the family")->excludes(cls_rule_opt);
    cls->add_option("--nmax", cls_h.n_max)->check(CLI::PositiveNumber)->capture_default_str();
    cls->add_option("--tmax", cls_h.t_max)->check(CLI::NonNegativeNumber)->capture_default_str();
    cls->add_option("--samples", cls_h.samples)->check(CLI::NonNegativeNumber)->capture_default_str();
    cls->add_option("--seed", cls_h.seed)->capture_default_str();
    int cls_rho = -1;
    cls->add_option("--probe-radius", cls_rho, "also run the return probe to ball(e, rho)");

    // verify
    auto* ver = app.add_subcommand("verify", "run property suites, or replay one case");
    std::string ver_suite = "all", ver_rule, ver_config, ver_aux, ver_dump = "counterexamples";
    int ver_step = 1;
    SuiteOptions ver_opts;
    FamilyFlags ver_family;
    ver_family.add(ver);
    ver->add_option("--suite", ver_suite, "suite name or 'all'")->capture_default_str();
    ver->add_option("--cases", ver_opts.cases_per_rule, "random cases per rule")->capture_default_str();
    ver->add_option("--nmax", ver_opts.n_max)->capture_default_str();
    ver->add_option("--seed", ver_opts.seed)->capture_default_str();
    ver->add_option("--dump-dir", ver_dump, "where failing cases are written")->capture_default_str();
    ver->add_option("--rule", ver_rule, "replay: rule file");
    ver->add_option("--config", ver_config, "replay: configuration file");
    ver->add_option("--step", ver_step, "replay: step count")->capture_default_str();
    ver->add_option("--aux", ver_aux, "replay: case.json from a dump");

    // enumerate-balls
    auto* enu = app.add_subcommand("enumerate-balls", "list canonical balls in rank order");
    FamilyFlags enu_family;
    enu_family.add(enu);
    bool enu_count = false;
    enu->add_flag("--count", enu_count, "print only the number of balls");

    // rule
    auto* rul = app.add_subcommand("rule", "write a rule file");
    FamilyFlags rul_family;
    rul_family.add(rul);
    std::string rul_name, rul_out;
    std::optional<std::uint64_t> rul_index;
    auto* rul_name_opt = rul->add_option("--name", rul_name, "zero, identity or or")
                             ->check(CLI::IsMember({"zero", "identity", "or"}));
    rul->add_option("--index", rul_index, "rule index within the family")->excludes(rul_name_opt);
    rul->add_option("--out", rul_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*sim) {
            const Rule rule = load_rule(sim_rule, limits);
            const FiniteConfig x = io::parse_config(io::read_text(sim_config), rule.params(), rule.alphabet());
            const Trajectory traj = run(rule, x, sim_steps);
            emit(sim_out, sim_format == "json" ? io::trajectory_to_json(traj).dump(2) + "\n" : io::format_trajectory(traj));
            return 0;
        }
        if (*quot) {
            const Rule rule = load_rule(quot_rule, limits);
            const OneDimRule bar = quotient_rule(rule);
            emit(quot_out, io::oned_rule_to_json(bar).dump(2) + "\n");
            if (!quot_config.empty()) {
                OneDimConfig x = io::parse_oned_config(io::read_text(quot_config), rule.alphabet());
                for (int n = 0; n <= quot_steps; ++n) {
                    std::cout << "## step " << n << "\n" << io::format_oned_config(x);
                    if (n < quot_steps) x = oned_step(bar, x);
                }
            }
            if (quot_nmax) {
                const auto h = oned_nilpotency_horizon(bar, *quot_nmax, limits);
                std::cout << "nilpotent horizon: " << (h ? std::to_string(*h) : "none <= " + std::to_string(*quot_nmax)) << "\n";
            }
            return 0;
        }
        if (*cen) {
            const TreeParams params{cen_family.k};
            const Alphabet alphabet{cen_family.alphabet};
            std::optional<std::pair<std::uint64_t, std::uint64_t>> shard;
            if (!cen_shard.empty()) shard = parse_shard(cen_shard);
            const CensusResult result = census(params, alphabet, cen_family.radius, horizons, shard, limits, thread_count());
            if (cen_format == "csv") {
                emit(cen_out, census_csv(result, params, alphabet, cen_family.radius, horizons));
            } else {
                std::string text;
                for (const auto& rec : result.records) text += record_to_json(rec).dump() + "\n";
                emit(cen_out, text);
            }
            const std::string summary = result.summary.to_json().dump(2) + "\n";
            if (!cen_summary.empty()) {
                io::write_text(cen_summary, summary);
            } else if (!cen_out.empty() && cen_out != "-") {
                std::cout << summary;
            }
            if (result.summary.consistency_violations > 0) {
                for (const auto& rec : result.records) {
                    if (const auto why = rec.consistency_violation()) {
                        std::cerr << "rule #" << rec.rule_index << ": " << *why << "\n";
                    }
                }
                return kPropertyFailure;
            }
            return 0;
        }
        if (*cls) {
            if (!cls_index && cls_rule.empty()) throw ParseError("pass --rule or --index");
            const Rule rule = cls_index ? Rule::from_index(TreeParams{cls_family.k}, Alphabet{cls_family.alphabet},
                                                           cls_family.radius, *cls_index, limits)
                                        : load_rule(cls_rule, limits);
            const ClassificationRecord rec = classify(rule, cls_h, limits);
            nlohmann::json doc = record_to_json(rec);
            doc["id"] = rule.id();
            if (cls_rho >= 0 && rule.quiescent()) {
                auto rng = rule_rng(cls_h.seed, rule);
                const auto samples = sample_configs(rule.params(), rule.alphabet(), cls_h.samples, rng);
                const auto probe = syndetic_return_probe(rule, samples, cls_rho, cls_h.t_max);
                doc["probe_max_first_hit"] = probe.max_first_hit ? nlohmann::json(*probe.max_first_hit) : nlohmann::json();
            }
            std::cout << doc.dump(2) << "\n";
            if (const auto why = rec.consistency_violation()) {
                std::cerr << "inconsistent record: " << *why << "\n";
                return kPropertyFailure;
            }
            return 0;
        }
        if (*ver) {
            if (!ver_rule.empty() || !ver_config.empty() || !ver_aux.empty()) {
                if (ver_rule.empty() || ver_config.empty() || ver_suite == "all") {
                    throw ParseError("replay needs --suite, --rule and --config");
                }
                nlohmann::json aux = nlohmann::json::object();
                if (!ver_aux.empty()) {
                    aux = io::read_json(ver_aux);
                    if (aux.contains("aux")) aux = aux.at("aux");
                }
                const SuiteCase c = load_case(ver_rule, ver_config, ver_suite, ver_step, aux);
                const SuiteReport report = run_cases({c}, suite_check(ver_suite));
                if (report.ok()) {
                    std::cout << "pass\n";
                    return 0;
                }
                std::cout << "FAIL " << report.failures.front().message << "\n";
                return kPropertyFailure;
            }
            ver_opts.params = TreeParams{ver_family.k};
            ver_opts.alphabet = Alphabet{ver_family.alphabet};
            ver_opts.radius = ver_family.radius;
            std::vector<std::string> suites;
            if (ver_suite == "all") {
                suites = suite_names();
            } else {
                suites.push_back(ver_suite);
            }
            SuiteReport total;
            for (const auto& s : suites) {
                const auto check = suite_check(s);
                total.merge(run_cases(suite_cases(s, ver_opts, limits), check));
            }
            return report_suites(total, ver_dump);
        }
        if (*enu) {
            const BallSpace space(TreeParams{enu_family.k}, Alphabet{enu_family.alphabet}, enu_family.radius, limits);
            if (enu_count) {
                std::cout << space.size() << "\n";
            } else {
                for (std::uint64_t i = 0; i < space.size(); ++i) std::cout << i << " " << space.to_string(i) << "\n";
            }
            return 0;
        }
        if (*rul) {
            const TreeParams params{rul_family.k};
            const Alphabet alphabet{rul_family.alphabet};
            std::optional<Rule> rule;
            if (rul_index) {
                rule = Rule::from_index(params, alphabet, rul_family.radius, *rul_index, limits);
            } else if (rul_name == "zero") {
                rule = constant_rule(params, alphabet, rul_family.radius, 0);
            } else if (rul_name == "identity") {
                rule = identity_rule(params, alphabet, rul_family.radius);
            } else if (rul_name == "or") {
                rule = or_rule(params, alphabet, rul_family.radius);
            } else {
                throw ParseError("pass --name or --index");
            }
            emit(rul_out, io::rule_to_json(*rule).dump(2) + "\n");
            return 0;
        }
    } catch (const treeca::Error& e) {
        std::cerr << "treeca: " << e.what() << "\n";
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "treeca: bad JSON: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
