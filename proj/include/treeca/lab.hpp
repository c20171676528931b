#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "treeca/quotient.hpp"
#include "treeca/rules.hpp"
#include "treeca/simulation.hpp"

namespace treeca {

struct Horizons {
    int n_max = 4;         // nilpotency horizon for the table checks
    int t_max = 16;        // steps per sampled trajectory
    int samples = 64;      // sampled finite configurations per rule
    std::uint64_t seed = 1;
};

struct ClassificationRecord {
    int k = 0;
    int alphabet = 0;
    int radius = 0;
    std::string rule_index;
    bool quiescent = false;
    std::optional<int> tree_nilpotent_horizon;
    std::optional<int> quotient_nilpotent_horizon;
    // Sampling results; absent for non-quiescent rules.
    std::optional<int> mortal_samples;
    int sample_count = 0;
    std::optional<int> max_first_death;
    std::optional<int> max_support_excess;

    std::optional<double> mortal_fraction() const;
    // Nilpotency transfer, quiescence gating and the hull-bounded support
    // bound. Returns a description of the first violation.
    std::optional<std::string> consistency_violation() const;
};

// Seeded generator for one rule of a census; independent of sharding.
std::mt19937_64 rule_rng(std::uint64_t seed, const Rule& rule);

// Finite configurations with support inside ball(e, 3): size uniform in 1..5
// (capped by the ball size), positions uniform without repetition, symbols
// uniform over the nonzero symbols. Alphabets of size 1 yield empty configs.
std::vector<FiniteConfig> sample_configs(const TreeParams& params, const Alphabet& alphabet, int count,
                                         std::mt19937_64& rng);

ClassificationRecord classify(const Rule& rule, const Horizons& horizons, const Limits& limits = {});

struct CensusSummary {
    std::uint64_t total = 0;
    std::uint64_t quiescent = 0;
    std::uint64_t tree_nilpotent = 0;
    std::uint64_t quotient_nilpotent = 0;
    // tree horizon -> number of rules
    std::map<int, std::uint64_t> tree_horizon_histogram;
    // Quiescent rules whose every sample died, but not nilpotent by n_max.
    std::uint64_t sampled_mortal_not_nilpotent = 0;
    std::uint64_t consistency_violations = 0;

    nlohmann::json to_json() const;
};

struct CensusResult {
    std::vector<ClassificationRecord> records;
    CensusSummary summary;
};

// Classifies every rule of the family (or of the index range [first, second)).
// Records come back in index order whatever the thread count.
CensusResult census(const TreeParams& params, const Alphabet& alphabet, int radius, const Horizons& horizons,
                    std::optional<std::pair<std::uint64_t, std::uint64_t>> shard = std::nullopt,
                    const Limits& limits = {}, unsigned threads = 1);

CensusSummary summarize(const std::vector<ClassificationRecord>& records);

// CSV columns: k, alphabet, radius, rule_index, quiescent, tree_nilp_horizon,
// quot_nilp_horizon, mortal_fraction, max_first_death, max_support_excess.
std::string census_csv_header();
std::string census_csv_row(const ClassificationRecord& record);
nlohmann::json record_to_json(const ClassificationRecord& record);
// Header comment + column line + rows.
std::string census_csv(const CensusResult& result, const TreeParams& params, const Alphabet& alphabet, int radius,
                       const Horizons& horizons);

// A configuration in Z = intersection of the Z_u: arbitrary symbols on the
// hull, level data per leaf (index c, zero past the end) on each branch B_u,
// arbitrary symbols elsewhere.
struct ZConfiguration {
    Labeling hull_labels;
    std::map<Vertex, std::vector<Symbol>> level_data;
    Labeling free_labels;
};

struct ZuResult {
    bool pass = true;
    std::string witness;
};

// Builds z on the truncated ball of radius `truncation`, applies one oracle
// step and checks that the image is still a function of c on every B_u inside
// the valid interior.
ZuResult verify_zu_invariance(const Rule& rule, const VertexSet& points, const ZConfiguration& z, int truncation);

ZConfiguration random_z_configuration(const TreeParams& params, const Alphabet& alphabet, const VertexSet& points,
                                      int truncation, std::mt19937_64& rng);

nlohmann::json z_configuration_to_json(const ZConfiguration& z);
ZConfiguration z_configuration_from_json(const nlohmann::json& doc);

struct SyndeticReport {
    // First n <= horizon with f^n(x) zero on ball(e, rho), per sample.
    std::vector<std::optional<int>> first_hits;
    // Max over samples; absent if some sample never hit.
    std::optional<int> max_first_hit;
};

SyndeticReport syndetic_return_probe(const Rule& rule, const std::vector<FiniteConfig>& samples, int rho, int horizon);

// Property suites behind `treeca verify`. Every case is replayable from a
// rule, a configuration, a step count and a JSON blob of extra data.
struct SuiteCase {
    std::string suite;
    Rule rule;
    FiniteConfig config;
    int step = 0;
    nlohmann::json aux;
};

// Returns a failure description, or nothing when the property holds.
using CaseCheck = std::function<std::optional<std::string>(const SuiteCase&)>;

struct Counterexample {
    SuiteCase failing_case;
    std::string message;
};

struct SuiteTally {
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
};

struct SuiteReport {
    std::map<std::string, SuiteTally> tallies;
    std::vector<Counterexample> failures;

    bool ok() const { return failures.empty(); }
    void merge(const SuiteReport& other);
};

const std::vector<std::string>& suite_names();

// The built-in check for a suite. Throws PreconditionError for unknown names.
CaseCheck suite_check(const std::string& suite);

struct SuiteOptions {
    TreeParams params{3};
    Alphabet alphabet{2};
    int radius = 1;
    int cases_per_rule = 4;
    int n_max = 4;
    std::uint64_t seed = 1;
};

// Generates the cases of a suite over all quiescent rules of the family.
std::vector<SuiteCase> suite_cases(const std::string& suite, const SuiteOptions& options, const Limits& limits = {});

SuiteReport run_cases(const std::vector<SuiteCase>& cases, const CaseCheck& check);

// Writes rule.json, config.txt and case.json into `dir`.
void dump_counterexample(const Counterexample& failure, const std::filesystem::path& dir);
SuiteCase load_case(const std::filesystem::path& rule_file, const std::filesystem::path& config_file,
                    const std::string& suite, int step, const nlohmann::json& aux);

}  // namespace treeca
