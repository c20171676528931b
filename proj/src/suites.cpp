#include <algorithm>
#include <filesystem>

#include "treeca/compact.hpp"
#include "treeca/errors.hpp"
#include "treeca/io.hpp"
#include "treeca/lab.hpp"
#include "treeca/random.hpp"

namespace treeca {

namespace {

FiniteConfig iterate(const Rule& rule, FiniteConfig x, int n) {
    for (int i = 0; i < n; ++i) x = step(rule, x);
    return x;
}

int max_depth(const FiniteConfig& x) {
    int d = 0;
    for (const auto& [v, s] : x.cells()) d = std::max(d, static_cast<int>(v.depth()));
    return d;
}

nlohmann::json cells_to_json(const FiniteConfig& x) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [v, s] : x.cells()) out[v.text()] = s;
    return out;
}

FiniteConfig cells_from_json(const nlohmann::json& doc, const TreeParams& params, const Alphabet& alphabet) {
    Labeling cells;
    for (const auto& [key, s] : doc.items()) cells[Vertex::parse(key)] = s.get<Symbol>();
    return FiniteConfig(params, alphabet, cells);
}

std::string describe(const FiniteConfig& x) {
    if (x.empty()) return "{}";
    std::string out = "{";
    bool first = true;
    for (const auto& [v, s] : x.cells()) {
        if (!first) out += ", ";
        first = false;
        out += v.text() + ":" + std::to_string(s);
    }
    return out + "}";
}

std::string first_difference(const FiniteConfig& a, const FiniteConfig& b) {
    VertexSet all = a.support();
    for (const auto& v : b.support()) all.insert(v);
    for (const auto& v : all) {
        if (a.at(v) != b.at(v)) {
            return "at " + v.text() + ": " + std::to_string(a.at(v)) + " vs " + std::to_string(b.at(v));
        }
    }
    return "no difference";
}

// Applies the oracle n times, starting from labels on ball(e, radius).
std::vector<Symbol> oracle_iterate(const OracleEvaluator& oracle, const TreeParams& params, int radius,
                                   std::vector<Symbol> labels, int n) {
    const int r = oracle.rule().radius();
    for (int i = 0; i < n; ++i) {
        const TruncatedBall tb(params, radius - i * r);
        labels = oracle.step(tb, labels);
    }
    return labels;
}

std::mt19937_64 suite_rng(std::uint64_t seed, const std::string& suite, const Rule& rule) {
    std::vector<std::uint32_t> material{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (char c : suite) material.push_back(static_cast<std::uint32_t>(c));
    material.push_back(0xffffffffu);
    material.push_back(static_cast<std::uint32_t>(rule.params().k));
    material.push_back(static_cast<std::uint32_t>(rule.alphabet().size));
    material.push_back(static_cast<std::uint32_t>(rule.radius()));
    for (char c : rule.index_string()) material.push_back(static_cast<std::uint32_t>(c));
    std::seed_seq seq(material.begin(), material.end());
    return std::mt19937_64(seq);
}

Vertex random_vertex(const std::vector<Vertex>& pool, std::mt19937_64& rng) {
    return pool[static_cast<std::size_t>(uniform_below(rng, pool.size()))];
}

std::vector<Vertex> ball_list(const TreeParams& params, const Vertex& center, int r) {
    const VertexSet s = ball(params, center, r);
    return {s.begin(), s.end()};
}

Symbol random_nonzero(const Alphabet& alphabet, std::mt19937_64& rng) {
    return static_cast<Symbol>(1 + uniform_below(rng, static_cast<std::uint64_t>(alphabet.size - 1)));
}

// Random config with 1..max_cells cells drawn from `pool`.
FiniteConfig random_config(const TreeParams& params, const Alphabet& alphabet, const std::vector<Vertex>& pool,
                           int max_cells, std::mt19937_64& rng) {
    FiniteConfig x(params, alphabet);
    if (alphabet.size < 2) return x;
    const auto cells = 1 + uniform_below(rng, static_cast<std::uint64_t>(max_cells));
    for (std::uint64_t i = 0; i < cells; ++i) x.set(random_vertex(pool, rng), random_nonzero(alphabet, rng));
    return x;
}

// ---------------------------------------------------------------------------
// checks

std::optional<std::string> check_oracle(const SuiteCase& c) {
    const Rule& rule = c.rule;
    const int n = c.step;
    if (n < 1) throw PreconditionError("oracle suite needs step >= 1");
    const int r = rule.radius();
    const int radius = max_depth(c.config) + 2 * n * r;
    const TruncatedBall tb(rule.params(), radius);
    const OracleEvaluator oracle(rule);
    const auto expected = oracle_iterate(oracle, rule.params(), radius, labels_on(tb, c.config), n);
    const FiniteConfig fast = iterate(rule, c.config, n);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const Vertex& v = tb.vertices[i];
        if (fast.at(v) != expected[i]) {
            return "step " + std::to_string(n) + " at " + v.text() + ": fast " + std::to_string(fast.at(v)) +
                   ", oracle " + std::to_string(expected[i]);
        }
    }
    const VertexSet cone = ball(rule.params(), c.config.support(), n * r);
    for (const auto& v : fast.support()) {
        if (!cone.contains(v)) return "support escaped the light cone at " + v.text();
    }
    return std::nullopt;
}

std::optional<std::string> check_compact(const SuiteCase& c) {
    const Rule& rule = c.rule;
    CompactConfig compact(c.config);
    FiniteConfig sparse = c.config;
    std::optional<HullDecomposition> hull;
    if (!c.config.empty()) hull.emplace(rule.params(), c.config.support());
    for (int s = 1; s <= c.step; ++s) {
        compact.step(rule);
        sparse = step(rule, sparse);
        const FiniteConfig expanded = compact.expand();
        if (!(expanded == sparse)) return "step " + std::to_string(s) + ": " + first_difference(expanded, sparse);
        if (compact.empty() != sparse.empty()) return "step " + std::to_string(s) + ": emptiness disagrees";
        if (compact.support_size() != sparse.support_size()) return "step " + std::to_string(s) + ": support size disagrees";
        bool zero_near = true;
        for (const auto& v : sparse.support()) zero_near = zero_near && distance(v, Vertex{}) > 2;
        if (compact.zero_within(2) != zero_near) return "step " + std::to_string(s) + ": zero_within(2) disagrees";
        std::optional<int> excess;
        if (hull) {
            for (const auto& v : sparse.support()) excess = std::max(excess.value_or(0), hull->distance_to_hull(v));
        }
        if (compact.support_excess() != excess) return "step " + std::to_string(s) + ": support excess disagrees";
    }
    return std::nullopt;
}

std::optional<std::string> check_equivariance(const SuiteCase& c) {
    const AutomorphismDescription g = io::automorphism_from_json(c.aux.at("automorphism"));
    g.validate(c.rule.params());
    const FiniteConfig lhs = iterate(c.rule, apply_automorphism(g, c.config), c.step);
    const FiniteConfig rhs = apply_automorphism(g, iterate(c.rule, c.config, c.step));
    if (lhs == rhs) return std::nullopt;
    return "f^n(g x) != g f^n(x) " + first_difference(lhs, rhs);
}

std::optional<std::string> check_additivity(const SuiteCase& c) {
    const FiniteConfig y = cells_from_json(c.aux.at("y"), c.rule.params(), c.rule.alphabet());
    const int n = c.step;
    for (const auto& a : c.config.support()) {
        for (const auto& b : y.support()) {
            if (distance(a, b) <= 2 * n * c.rule.radius()) {
                throw PreconditionError("supports of x and y are not separated by more than 2nr");
            }
        }
    }
    const FiniteConfig lhs = iterate(c.rule, disjoint_sum(c.config, y), n);
    const FiniteConfig rhs = disjoint_sum(iterate(c.rule, c.config, n), iterate(c.rule, y, n));
    if (lhs == rhs) return std::nullopt;
    return "f^n(x+y) != f^n(x)+f^n(y) " + first_difference(lhs, rhs);
}

std::optional<std::string> check_conjugacy(const SuiteCase& c) {
    const Rule& rule = c.rule;
    const int n = c.step;
    if (n < 1) throw PreconditionError("conjugacy suite needs step >= 1");
    std::map<std::int64_t, Symbol> cells;
    for (const auto& [key, s] : c.aux.at("oned").items()) cells[std::stoll(key)] = s.get<Symbol>();
    const OneDimConfig x(rule.alphabet(), cells);
    std::int64_t reach = 0;
    for (const auto& [i, s] : x.cells()) reach = std::max(reach, i < 0 ? -i : i);

    const int r = rule.radius();
    const int radius = static_cast<int>(reach) + 2 * n * r;
    const TruncatedBall tb(rule.params(), radius);
    const Labeling lifted = phi_expand(x, VertexSet(tb.vertices.begin(), tb.vertices.end()));
    std::vector<Symbol> labels(tb.size(), 0);
    for (std::size_t i = 0; i < tb.size(); ++i) labels[i] = lifted.at(tb.vertices[i]);
    const OracleEvaluator oracle(rule);
    const auto image = oracle_iterate(oracle, rule.params(), radius, labels, n);

    std::map<std::int64_t, std::size_t> by_level;
    for (std::size_t i = 0; i < image.size(); ++i) {
        const auto [it, fresh] = by_level.emplace(busemann_level(tb.vertices[i]), i);
        if (!fresh && image[it->second] != image[i]) {
            return "image not constant on level " + std::to_string(it->first) + ": " + tb.vertices[it->second].text() +
                   " has " + std::to_string(image[it->second]) + ", " + tb.vertices[i].text() + " has " +
                   std::to_string(image[i]);
        }
    }

    const OneDimRule bar = quotient_rule(rule);
    OneDimConfig y = x;
    for (int i = 0; i < n; ++i) y = oned_step(bar, y);
    const std::int64_t valid = radius - n * r;
    for (std::int64_t i = -valid; i <= valid; ++i) {
        const int idx = tb.index_of(path_vertex(i));
        if (image[static_cast<std::size_t>(idx)] != y.at(i)) {
            return "level " + std::to_string(i) + " after " + std::to_string(n) + " steps: tree " +
                   std::to_string(image[static_cast<std::size_t>(idx)]) + ", quotient " + std::to_string(y.at(i));
        }
    }
    for (const auto& [i, s] : y.cells()) {
        if (i < -valid || i > valid) return "quotient image reaches level " + std::to_string(i) + " outside the light cone";
    }
    return std::nullopt;
}

std::optional<std::string> check_transfer(const SuiteCase& c) {
    const int n_max = c.step;
    const auto tree = tree_nilpotency_horizon(c.rule, n_max);
    if (!tree) return std::nullopt;
    const auto quot = oned_nilpotency_horizon(quotient_rule(c.rule), n_max);
    if (!quot) return "tree-nilpotent at " + std::to_string(*tree) + " but the quotient is not nilpotent by " + std::to_string(n_max);
    if (*quot > *tree) {
        return "quotient horizon " + std::to_string(*quot) + " exceeds tree horizon " + std::to_string(*tree);
    }
    return std::nullopt;
}

// Value of f^n at the root, through the oracle, for labels on ball(e, n r).
Symbol center_after(const OracleEvaluator& oracle, const TreeParams& params, const std::vector<Symbol>& labels,
                    int n) {
    const int radius = n * oracle.rule().radius();
    return oracle_iterate(oracle, params, radius, labels, n).front();
}

std::optional<std::string> check_nilpotency(const SuiteCase& c) {
    const Rule& rule = c.rule;
    const int n = c.step;
    if (n < 1) throw PreconditionError("nilpotency suite needs step >= 1");
    const bool claimed = tree_nilpotent_at(rule, n);
    const auto& params = rule.params();
    const int radius = n * rule.radius();
    const TruncatedBall tb(params, radius);
    const OracleEvaluator oracle(rule);
    const auto a = static_cast<std::uint64_t>(rule.alphabet().size);

    // exhaustive when the dependence ball has few labelings
    std::uint64_t labelings = 1;
    bool exhaustive = true;
    for (std::size_t i = 0; i < tb.size() && exhaustive; ++i) {
        labelings *= a;
        exhaustive = labelings <= (std::uint64_t{1} << 16);
    }
    if (exhaustive) {
        std::vector<Symbol> labels(tb.size(), 0);
        for (std::uint64_t code = 0; code < labelings; ++code) {
            std::uint64_t rest = code;
            for (auto& s : labels) {
                s = static_cast<Symbol>(rest % a);
                rest /= a;
            }
            if (center_after(oracle, params, labels, n) != 0) {
                if (claimed) return "claimed nilpotent at " + std::to_string(n) + " but labeling #" + std::to_string(code) + " survives";
                return std::nullopt;
            }
        }
        if (!claimed) return "claimed not nilpotent at " + std::to_string(n) + " but every labeling dies";
        return std::nullopt;
    }

    if (rule.radius() == 1) {
        const NilpotencyCheck hc = history_nilpotency(rule, n);
        if (hc.nilpotent != claimed) return "history check and tree_nilpotent_at disagree";
        if (!hc.nilpotent) {
            if (!hc.witness) return "no witness for a non-nilpotent verdict";
            std::vector<Symbol> labels(tb.size(), 0);
            for (std::size_t i = 0; i < tb.size(); ++i) {
                const auto it = hc.witness->find(tb.vertices[i]);
                if (it != hc.witness->end()) labels[i] = it->second;
            }
            if (center_after(oracle, params, labels, n) == 0) return "witness does not survive " + std::to_string(n) + " steps";
        }
    }
    if (claimed) {
        const int samples = c.aux.value("samples", 64);
        std::mt19937_64 rng(c.aux.value("seed", std::uint64_t{1}));
        std::vector<Symbol> labels(tb.size(), 0);
        for (int s = 0; s < samples; ++s) {
            for (auto& v : labels) v = static_cast<Symbol>(uniform_below(rng, a));
            if (center_after(oracle, params, labels, n) != 0) {
                return "claimed nilpotent at " + std::to_string(n) + " but sample " + std::to_string(s) + " survives";
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_singleton(const SuiteCase& c) {
    if (c.config.support_size() != 1) throw PreconditionError("singleton suite needs a one-cell configuration");
    FiniteConfig y = c.config;
    for (int i = 0; i < std::max(1, c.step); ++i) {
        const FiniteConfig next = step(c.rule, y);
        if (y.support_size() == 1 && next.support_size() == 1 && next.support() != y.support()) {
            return "support moved from " + y.support().begin()->text() + " to " + next.support().begin()->text() +
                   " at step " + std::to_string(i + 1);
        }
        y = next;
    }
    return std::nullopt;
}

std::optional<std::string> check_zu(const SuiteCase& c) {
    VertexSet points;
    for (const auto& p : c.aux.at("points")) points.insert(Vertex::parse(p.get<std::string>()));
    const int truncation = c.aux.at("truncation").get<int>();
    const ZConfiguration z = z_configuration_from_json(c.aux.at("z"));
    const ZuResult res = verify_zu_invariance(c.rule, points, z, truncation);
    if (res.pass) return std::nullopt;
    return res.witness;
}

// ---------------------------------------------------------------------------
// generators

using Generator = void (*)(const Rule&, const SuiteOptions&, std::mt19937_64&, std::vector<SuiteCase>&);

SuiteCase make_case(const std::string& suite, const Rule& rule, FiniteConfig x, int step, nlohmann::json aux = nlohmann::json::object()) {
    return SuiteCase{suite, rule, std::move(x), step, std::move(aux)};
}

void gen_oracle(const Rule& rule, const SuiteOptions& opt, std::mt19937_64& rng, std::vector<SuiteCase>& out) {
    const auto& params = rule.params();
    const auto a = static_cast<std::uint64_t>(rule.alphabet().size);
    // every labeling of ball(e, 1) when that is small
    const auto near = ball_list(params, Vertex{}, 1);
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < near.size() && count <= 4096; ++i) count *= a;
    if (count <= 4096) {
        for (std::uint64_t code = 0; code < count; ++code) {
            FiniteConfig x(params, rule.alphabet());
            std::uint64_t rest = code;
            for (const auto& v : near) {
                x.set(v, static_cast<Symbol>(rest % a));
                rest /= a;
            }
            out.push_back(make_case("oracle", rule, std::move(x), 1));
        }
    }
    const auto pool = ball_list(params, Vertex{}, 3);
    for (int i = 0; i < opt.cases_per_rule; ++i) {
        const int n = 1 + static_cast<int>(uniform_below(rng, 3));
        out.push_back(make_case("oracle", rule, random_config(params, rule.alphabet(), pool, 6, rng), n));
    }
}

void gen_compact(const Rule& rule, const SuiteOptions& opt, std::mt19937_64& rng, std::vector<SuiteCase>& out) {
    const auto pool = ball_list(rule.params(), Vertex{}, 3);
    for (int i = 0; i < opt.cases_per_rule; ++i) {
        const int n = 1 + static_cast<int>(uniform_below(rng, 6));
        out.push_back(make_case("compact", rule, random_config(rule.params(), rule.alphabet(), pool, 5, rng), n));
    }
}

void gen_equivariance(const Rule& rule, const SuiteOptions& opt, std::mt19937_64& rng, std::vector<SuiteCase>& out) {
    const auto pool = ball_list(rule.params(), Vertex{}, 2);
    for (int i = 0; i < opt.cases_per_rule; ++i) {
        const int n = 1 + static_cast<int>(uniform_below(rng, 2));
        FiniteConfig x = random_config(rule.params(), rule.alphabet(), pool, 4, rng);
        const int depth = max_depth(x) + n * rule.radius() + 1;
        const auto g = random_automorphism(rule.params(), depth, 2, rng);
        out.push_back(make_case("equivariance", rule, std::move(x), n, {{"automorphism", io::automorphism_to_json(g)}}));
    }
}

void gen_additivity(const Rule& rule, const SuiteOptions& opt, std::mt19937_64& rng, std::vector<SuiteCase>& out) {
    const auto& params = rule.params();
    const auto pool = ball_list(params, Vertex{}, 2);
    for (int i = 0; i < opt.cases_per_rule; ++i) {
        const int n = 1 + static_cast<int>(uniform_below(rng, 2));
        FiniteConfig x = random_config(params, rule.alphabet(), pool, 4, rng);
        // y lives around a vertex far from the origin
        const int gap = 2 * n * rule.radius() + 2;
        std::string word(1, static_cast<char>('0' + uniform_below(rng, static_cast<std::uint64_t>(params.k))));
        while (static_cast<int>(word.size()) < gap + 4) {
            word += static_cast<char>('0' + uniform_below(rng, static_cast<std::uint64_t>(params.k - 1)));
        }
        const auto far = ball_list(params, Vertex(word), 1);
        FiniteConfig y(params, rule.alphabet());
        for (int attempt = 0; attempt < 16 && y.empty(); ++attempt) {
            FiniteConfig cand = random_config(params, rule.alphabet(), far, 3, rng);
            bool separated = true;
            for (const auto& p : x.support()) {
                for (const auto& q : cand.support()) separated = separated && distance(p, q) > 2 * n * rule.radius();
            }
            if (separated) y = std::move(cand);
        }
        out.push_back(make_case("additivity", rule, std::move(x), n, {{"y", cells_to_json(y)}}));
    }
}

void gen_conjugacy(const Rule& rule, const SuiteOptions& opt, std::mt19937_64& rng, std::vector<SuiteCase>& out) {
    for (int i = 0; i < opt.cases_per_rule; ++i) {
        const int n = 1 + static_cast<int>(uniform_below(rng, 3));
        nlohmann::json oned = nlohmann::json::object();
        if (rule.alphabet().size > 1) {
            const auto cells = 1 + uniform_below(rng, 4);
            for (std::uint64_t j = 0; j < cells; ++j) {
                const auto level = static_cast<std::int64_t>(uniform_below(rng, 5)) - 2;
                oned[std::to_string(level)] = random_nonzero(rule.alphabet(), rng);
            }
        }
        out.push_back(make_case("conjugacy", rule, FiniteConfig(rule.params(), rule.alphabet()), n, {{"oned", oned}}));
    }
}

void gen_transfer(const Rule& rule, const SuiteOptions& opt, std::mt19937_64&, std::vector<SuiteCase>& out) {
    out.push_back(make_case("transfer", rule, FiniteConfig(rule.params(), rule.alphabet()), opt.n_max));
}

void gen_nilpotency(const Rule& rule, const SuiteOptions& opt, std::mt19937_64& rng, std::vector<SuiteCase>& out) {
    for (int n = 1; n <= opt.n_max; ++n) {
        out.push_back(make_case("nilpotency", rule, FiniteConfig(rule.params(), rule.alphabet()), n,
                                {{"samples", std::max(opt.cases_per_rule, 1) * 16}, {"seed", rng()}}));
    }
}

void gen_singleton(const Rule& rule, const SuiteOptions&, std::mt19937_64&, std::vector<SuiteCase>& out) {
    for (const char* where : {"", "0", "10"}) {
        for (int s = 1; s < rule.alphabet().size; ++s) {
            FiniteConfig x(rule.params(), rule.alphabet());
            x.set(Vertex(where), static_cast<Symbol>(s));
            out.push_back(make_case("singleton", rule, std::move(x), 1));
        }
    }
}

void gen_zu(const Rule& rule, const SuiteOptions& opt, std::mt19937_64& rng, std::vector<SuiteCase>& out) {
    const auto& params = rule.params();
    const auto pool = ball_list(params, Vertex{}, 2);
    for (int i = 0; i < opt.cases_per_rule; ++i) {
        VertexSet points;
        const auto want = 2 + uniform_below(rng, 3);
        while (points.size() < want) points.insert(random_vertex(pool, rng));
        int deepest = 0;
        for (const auto& p : points) deepest = std::max(deepest, static_cast<int>(p.depth()));
        const int truncation = deepest + rule.radius() + 2;
        const auto z = random_z_configuration(params, rule.alphabet(), points, truncation, rng);
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : points) pts.push_back(p.text());
        out.push_back(make_case("zu", rule, FiniteConfig(params, rule.alphabet()), 1,
                                {{"points", pts}, {"truncation", truncation}, {"z", z_configuration_to_json(z)}}));
    }
}

struct SuiteEntry {
    const char* name;
    std::optional<std::string> (*check)(const SuiteCase&);
    Generator generate;
};

const SuiteEntry kSuites[] = {
    {"oracle", check_oracle, gen_oracle},
    {"compact", check_compact, gen_compact},
    {"equivariance", check_equivariance, gen_equivariance},
    {"additivity", check_additivity, gen_additivity},
    {"conjugacy", check_conjugacy, gen_conjugacy},
    {"transfer", check_transfer, gen_transfer},
    {"nilpotency", check_nilpotency, gen_nilpotency},
    {"singleton", check_singleton, gen_singleton},
    {"zu", check_zu, gen_zu},
};

const SuiteEntry& find_suite(const std::string& name) {
    for (const auto& entry : kSuites) {
        if (name == entry.name) return entry;
    }
    throw PreconditionError("unknown suite '" + name + "'");
}

}  // namespace

void SuiteReport::merge(const SuiteReport& other) {
    for (const auto& [name, tally] : other.tallies) {
        tallies[name].passed += tally.passed;
        tallies[name].failed += tally.failed;
    }
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& entry : kSuites) out.emplace_back(entry.name);
        return out;
    }();
    return names;
}

CaseCheck suite_check(const std::string& suite) { return find_suite(suite).check; }

std::vector<SuiteCase> suite_cases(const std::string& suite, const SuiteOptions& options, const Limits& limits) {
    const SuiteEntry& entry = find_suite(suite);
    const RuleEnumeration rules(options.params, options.alphabet, options.radius, limits);
    std::vector<SuiteCase> out;
    rules.for_each([&](const Rule& rule) {
        if (!rule.quiescent()) return;
        auto rng = suite_rng(options.seed, suite, rule);
        entry.generate(rule, options, rng, out);
    });
    return out;
}

SuiteReport run_cases(const std::vector<SuiteCase>& cases, const CaseCheck& check) {
    SuiteReport report;
    for (const auto& c : cases) {
        std::optional<std::string> failure;
        try {
            failure = check(c);
        } catch (const std::exception& e) {
            failure = std::string("error: ") + e.what();
        }
        auto& tally = report.tallies[c.suite];
        if (failure) {
            ++tally.failed;
            report.failures.push_back({c, *failure + " [rule " + c.rule.id() + ", config " + describe(c.config) +
                                              ", step " + std::to_string(c.step) + "]"});
        } else {
            ++tally.passed;
        }
    }
    return report;
}

void dump_counterexample(const Counterexample& failure, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const SuiteCase& c = failure.failing_case;
    io::write_text(dir / "rule.json", io::rule_to_json(c.rule).dump(2) + "\n");
    io::write_text(dir / "config.txt", io::format_config(c.config));
    const nlohmann::json doc{{"suite", c.suite}, {"step", c.step}, {"aux", c.aux}, {"message", failure.message}};
    io::write_text(dir / "case.json", doc.dump(2) + "\n");
}

SuiteCase load_case(const std::filesystem::path& rule_file, const std::filesystem::path& config_file,
                    const std::string& suite, int step, const nlohmann::json& aux) {
    find_suite(suite);
    Rule rule = io::rule_from_json(io::read_json(rule_file));
    FiniteConfig config = io::parse_config(io::read_text(config_file), rule.params(), rule.alphabet());
    return SuiteCase{suite, std::move(rule), std::move(config), step, aux};
}

}  // namespace treeca
