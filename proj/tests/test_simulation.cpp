#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "treeca/compact.hpp"
#include "treeca/errors.hpp"
#include "treeca/lab.hpp"
#include "treeca/simulation.hpp"

using namespace treeca;
using testing::V;
using testing::Vs;

namespace {

const TreeParams k3{3};
const Alphabet a2{2};

FiniteConfig cfg(std::initializer_list<std::pair<const char*, Symbol>> cells, TreeParams p = k3, Alphabet a = a2) {
    FiniteConfig x(p, a);
    for (const auto& [w, s] : cells) x.set(V(w), s);
    return x;
}

FiniteConfig all_ones(const VertexSet& vs) {
    FiniteConfig x(k3, a2);
    for (const auto& v : vs) x.set(v, 1);
    return x;
}

void expect_suite_clean(const std::string& suite, SuiteOptions opt) {
    const auto cases = suite_cases(suite, opt);
    REQUIRE(!cases.empty());
    const auto report = run_cases(cases, suite_check(suite));
    for (const auto& f : report.failures) FAIL_CHECK(f.message);
    CHECK(report.tallies.at(suite).passed == cases.size());
}

}  // namespace

TEST_CASE("finite configurations") {
    FiniteConfig x = cfg({{"e", 1}, {"0", 0}, {"10", 1}});
    CHECK(x.support() == Vs({"e", "10"}));
    CHECK(x.at(V("0")) == 0);
    x.set(V("e"), 0);
    CHECK(x.support() == Vs({"10"}));
    CHECK_THROWS_AS(x.set(V("02"), 1), AddressError);
    CHECK_THROWS_AS(x.set(V("1"), 2), PreconditionError);
}

TEST_CASE("step and run examples") {
    const Rule zero = constant_rule(k3, a2, 1);
    const Rule id = identity_rule(k3, a2, 1);
    const Rule orr = or_rule(k3, a2, 1);
    const FiniteConfig x = cfg({{"e", 1}, {"21", 1}, {"100", 1}});
    CHECK(step(zero, x).empty());
    CHECK(step(id, x) == x);
    const FiniteConfig seed = cfg({{"e", 1}});
    CHECK(step(orr, seed) == all_ones(ball(k3, V("e"), 1)));

    const auto t0 = run(zero, x, 3);
    REQUIRE(t0.states.size() == 4);
    CHECK(t0.states[0] == x);
    for (int i = 1; i <= 3; ++i) CHECK(t0.states[static_cast<std::size_t>(i)].empty());
    const auto t1 = run(id, x, 3);
    for (const auto& s : t1.states) CHECK(s == x);
    const auto t2 = run(orr, seed, 2);
    CHECK(t2.states[1].support() == ball(k3, V("e"), 1));
    CHECK(t2.states[2].support() == ball(k3, V("e"), 2));
    CHECK(t2.support_radius == std::vector<std::optional<int>>{0, 1, 2});

    const Rule bad = Rule(k3, a2, 1, {1, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(step(bad, x), NonQuiescentError);
    CHECK_THROWS_AS(run(bad, x, 1), NonQuiescentError);
    CHECK_THROWS_AS(step(identity_rule(TreeParams{4}, a2, 1), x), PreconditionError);
}

TEST_CASE("disjoint sums") {
    const FiniteConfig x = cfg({{"e", 1}});
    const FiniteConfig y = cfg({{"00", 1}});
    CHECK(disjoint_sum(x, FiniteConfig(k3, a2)) == x);
    CHECK(disjoint_sum(x, y) == cfg({{"e", 1}, {"00", 1}}));
    CHECK_THROWS_AS(disjoint_sum(x, cfg({{"e", 1}, {"1", 1}})), PreconditionError);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        FiniteConfig a(k3, a2), b(k3, a2);
        for (int j = 0; j < 4; ++j) {
            a.set(testing::random_vertex(3, 4, rng), 1);
            const Vertex v = testing::random_vertex(3, 4, rng);
            if (a.at(v) == 0) b.set(v, 1);
        }
        VertexSet overlap;
        for (const auto& v : a.support()) {
            if (b.at(v)) overlap.insert(v);
        }
        if (!overlap.empty()) continue;
        REQUIRE(disjoint_sum(a, b) == disjoint_sum(b, a));
    }
}

TEST_CASE("automorphism descriptions") {
    const FiniteConfig x = cfg({{"0", 1}, {"21", 1}});
    CHECK(apply_automorphism(AutomorphismDescription::identity(3), x) == x);

    AutomorphismDescription swap01;
    swap01.depth = 3;
    swap01.permutations[V("e")] = {1, 0, 2};
    CHECK(apply_automorphism(swap01, cfg({{"0", 1}})) == cfg({{"1", 1}}));
    CHECK(swap01.image(k3, V("01")) == V("11"));
    CHECK_THROWS_AS(swap01.image(k3, V("0000")), DomainError);
    CHECK_THROWS_AS(apply_automorphism(swap01, cfg({{"0000", 1}})), DomainError);

    AutomorphismDescription broken;
    broken.depth = 2;
    broken.permutations[V("e")] = {0, 0, 2};
    CHECK_THROWS_AS(broken.validate(k3), PreconditionError);

    std::mt19937_64 rng(5);
    for (int k : {2, 3, 4}) {
        const TreeParams p{k};
        for (int i = 0; i < 50; ++i) {
            const auto g = random_automorphism(p, 4, 3, rng);
            g.validate(p);
            const VertexSet dom = ball(p, V("e"), 4);
            VertexSet images;
            for (const auto& v : dom) images.insert(g.image(p, v));
            REQUIRE(images.size() == dom.size());
            for (const auto& v : dom) {
                for (const auto& w : dom) REQUIRE(distance(g.image(p, v), g.image(p, w)) == distance(v, w));
            }
        }
    }
}

TEST_CASE("oracle step examples") {
    const TruncatedBall tb(k3, 3);
    std::vector<Symbol> zeros(tb.size(), 0);
    for (const Rule& rule : {constant_rule(k3, a2, 1), identity_rule(k3, a2, 1), or_rule(k3, a2, 1)}) {
        const auto out = oracle_step(rule, tb, zeros);
        CHECK(out.size() == tb.prefix_size(2));
        CHECK(std::all_of(out.begin(), out.end(), [](Symbol s) { return s == 0; }));
    }
    std::mt19937_64 rng(3);
    std::vector<Symbol> labels(tb.size());
    for (auto& s : labels) s = static_cast<Symbol>(rng() & 1u);
    const auto same = oracle_step(identity_rule(k3, a2, 1), tb, labels);
    CHECK(std::equal(same.begin(), same.end(), labels.begin()));
    // OR on a seed at the root, radius-3 truncation
    const auto seed = labels_on(tb, cfg({{"e", 1}}));
    const auto grown = oracle_step(or_rule(k3, a2, 1), tb, seed);
    for (std::size_t i = 0; i < grown.size(); ++i) CHECK(grown[i] == (tb.depth[i] <= 1 ? 1u : 0u));
    // non-quiescent rules are fine for the oracle
    const auto ones = oracle_step(Rule(k3, a2, 1, {1, 1, 1, 1, 1, 1, 1, 1}), tb, zeros);
    CHECK(std::all_of(ones.begin(), ones.end(), [](Symbol s) { return s == 1; }));
    CHECK_THROWS_AS(oracle_step(or_rule(k3, a2, 2), TruncatedBall(k3, 1), std::vector<Symbol>(4, 0)), PreconditionError);
    CHECK_THROWS_AS(oracle_step(or_rule(k3, a2, 1), tb, std::vector<Symbol>(3, 0)), PreconditionError);
}

TEST_CASE("mortality and support profiles") {
    const Rule zero = constant_rule(k3, a2, 1);
    const Rule id = identity_rule(k3, a2, 1);
    const Rule orr = or_rule(k3, a2, 1);
    const FiniteConfig x = cfg({{"e", 1}, {"01", 1}});
    CHECK(mortality(zero, x, 5) == 1);
    CHECK(mortality(id, x, 10) == std::nullopt);
    CHECK(mortality(id, FiniteConfig(k3, a2), 10) == 0);
    CHECK(support_radius_profile(zero, x, 2) == std::vector<std::optional<int>>{0, std::nullopt, std::nullopt});
    CHECK(support_radius_profile(id, x, 3) == std::vector<std::optional<int>>{0, 0, 0, 0});
    CHECK(support_radius_profile(orr, cfg({{"e", 1}}), 4) == std::vector<std::optional<int>>{0, 1, 2, 3, 4});
    // measured from the hull {e, 0, 01}
    CHECK(support_radius_profile(orr, x, 2) == std::vector<std::optional<int>>{0, 1, 2});
}

TEST_CASE("compact simulation of a growing rule") {
    const Rule orr = or_rule(k3, a2, 1);
    CompactConfig c(cfg({{"e", 1}}));
    for (int n = 0; n < 40; ++n) c.step(orr);
    CHECK(c.support_size() == ball_size(k3, 40));
    CHECK(c.support_excess() == 40);
    CHECK(c.node_count() < 200);
    CHECK_FALSE(c.zero_within(40));
    CompactConfig d(cfg({{"0000", 1}}));
    CHECK(d.zero_within(3));
    CHECK_FALSE(d.zero_within(4));
    d.step(orr);
    CHECK_FALSE(d.zero_within(3));
}

TEST_CASE("oracle equivalence, exhaustive on ball(e, 1) plus random cases") {
    SuiteOptions opt;
    opt.cases_per_rule = 2;
    expect_suite_clean("oracle", opt);
}

TEST_CASE("compact and sparse simulators agree") {
    SuiteOptions opt;
    opt.cases_per_rule = 4;
    expect_suite_clean("compact", opt);
    opt.params = TreeParams{4};
    opt.cases_per_rule = 1;
    expect_suite_clean("compact", opt);
    opt.params = TreeParams{3};
    opt.alphabet = Alphabet{3};
    opt.cases_per_rule = 1;
    SuiteOptions sampled = opt;
    // the |A| = 3 family is too large to sweep; check a shard by hand
    const RuleEnumeration shard(sampled.params, sampled.alphabet, 1, {},
                                std::pair<std::uint64_t, std::uint64_t>{0, 3000});
    std::mt19937_64 rng(8);
    std::vector<SuiteCase> cases;
    for (int i = 0; i < 60; ++i) {
        const Rule rule = shard.at(3 * (rng() % 1000));
        FiniteConfig x(rule.params(), rule.alphabet());
        for (int j = 0; j < 3; ++j) x.set(testing::random_vertex(3, 3, rng), static_cast<Symbol>(1 + rng() % 2));
        cases.push_back(SuiteCase{"compact", rule, x, 5, nlohmann::json::object()});
    }
    const auto report = run_cases(cases, suite_check("compact"));
    for (const auto& f : report.failures) FAIL_CHECK(f.message);
}

TEST_CASE("equivariance under random automorphisms") {
    SuiteOptions opt;
    opt.cases_per_rule = 3;
    expect_suite_clean("equivariance", opt);
    opt.params = TreeParams{2};
    expect_suite_clean("equivariance", opt);
}

TEST_CASE("additivity for separated supports") {
    SuiteOptions opt;
    opt.cases_per_rule = 3;
    expect_suite_clean("additivity", opt);
}

TEST_CASE("light cone") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        const Rule rule = Rule::from_index(k3, a2, 1, 2 * (rng() % 128));
        FiniteConfig x(k3, a2);
        for (int j = 0; j < 3; ++j) x.set(testing::random_vertex(3, 3, rng), 1);
        FiniteConfig y = x;
        for (int n = 1; n <= 4; ++n) {
            y = step(rule, y);
            const VertexSet cone = ball(k3, x.support(), n);
            for (const auto& v : y.support()) REQUIRE(cone.contains(v));
        }
    }
}

TEST_CASE("singleton supports never move") {
    SuiteOptions opt;
    expect_suite_clean("singleton", opt);
    opt.params = TreeParams{2};
    expect_suite_clean("singleton", opt);
}
