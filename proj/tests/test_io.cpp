#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "treeca/errors.hpp"
#include "treeca/io.hpp"

using namespace treeca;
using testing::V;

namespace {

const TreeParams k3{3};
const Alphabet a2{2};

}  // namespace

TEST_CASE("rule files round-trip") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const Rule rule = Rule::from_index(k3, a2, 1, rng() % 256);
        auto doc = io::rule_to_json(rule);
        CHECK(doc["k"] == 3);
        CHECK(doc["table"].size() == 8);
        // entry order does not matter
        auto& table = doc["table"];
        std::vector<nlohmann::json> entries(table.begin(), table.end());
        std::shuffle(entries.begin(), entries.end(), rng);
        table = entries;
        CHECK(io::rule_from_json(doc) == rule);
        CHECK(io::rule_from_json(nlohmann::json::parse(doc.dump())) == rule);
    }
    const Rule big = Rule::from_index(k3, a2, 2, 123456789);
    CHECK(io::rule_from_json(io::rule_to_json(big)) == big);
    CHECK(io::rule_to_json(or_rule(k3, a2, 1))["table"][5]["ball"] == "1(0,0,1)");
}

TEST_CASE("malformed rule files are rejected") {
    const auto good = io::rule_to_json(or_rule(k3, a2, 1));

    auto missing = good;
    missing["table"].erase(3);
    CHECK_THROWS_AS(io::rule_from_json(missing), ParseError);

    auto duplicate = good;
    duplicate["table"][2]["ball"] = "0(1,0,1)";  // same ball as entry 2, reordered
    duplicate["table"].push_back(duplicate["table"][2]);
    CHECK_THROWS_AS(io::rule_from_json(duplicate), ParseError);

    auto swapped = good;
    swapped["table"][1]["ball"] = good["table"][2]["ball"];
    CHECK_THROWS_AS(io::rule_from_json(swapped), ParseError);

    auto bad_out = good;
    bad_out["table"][0]["out"] = 2;
    CHECK_THROWS_AS(io::rule_from_json(bad_out), ParseError);

    auto bad_ball = good;
    bad_ball["table"][0]["ball"] = "0(0,0)";
    CHECK_THROWS_AS(io::rule_from_json(bad_ball), ParseError);

    auto no_k = good;
    no_k.erase("k");
    CHECK_THROWS_AS(io::rule_from_json(no_k), ParseError);

    auto wrong_type = good;
    wrong_type["radius"] = "one";
    CHECK_THROWS_AS(io::rule_from_json(wrong_type), ParseError);
}

TEST_CASE("configuration text") {
    const auto x = io::parse_config("e 1\n# comment\n\n10 1   # trailing\n0 0\n  21\t1\n", k3, a2);
    CHECK(x.support() == testing::Vs({"e", "10", "21"}));
    CHECK(io::format_config(x) == "e 1\n10 1\n21 1\n");
    CHECK(io::parse_config(io::format_config(x), k3, a2) == x);
    CHECK(io::parse_config("", k3, a2).empty());
    CHECK_THROWS_AS(io::parse_config("e 1\ne 0\n", k3, a2), ParseError);
    CHECK_THROWS_AS(io::parse_config("02 1\n", k3, a2), ParseError);
    CHECK_THROWS_AS(io::parse_config("0 2\n", k3, a2), ParseError);
    CHECK_THROWS_AS(io::parse_config("0 1 1\n", k3, a2), ParseError);
    CHECK_THROWS_AS(io::parse_config("0\n", k3, a2), ParseError);
    CHECK_THROWS_AS(io::parse_config("x 1\n", k3, a2), ParseError);
    CHECK_THROWS_AS(io::parse_config("0 -1\n", k3, a2), ParseError);
}

TEST_CASE("trajectory output") {
    FiniteConfig seed(k3, a2);
    seed.set(V("e"), 1);
    const auto traj = run(or_rule(k3, a2, 1), seed, 1);
    CHECK(io::format_trajectory(traj) == "## step 0\ne 1\n## step 1\ne 1\n0 1\n1 1\n2 1\n");
    const auto doc = io::trajectory_to_json(traj);
    CHECK(doc["steps"].size() == 2);
    CHECK(doc["steps"][1]["cells"]["2"] == 1);
    CHECK(doc["steps"][1]["support_radius"] == 1);
}

TEST_CASE("1D rule and configuration files") {
    const OneDimRule bar = quotient_rule(or_rule(k3, a2, 1));
    const auto doc = io::oned_rule_to_json(bar);
    CHECK(doc["table"][4]["window"] == "100");
    CHECK(doc["table"][4]["out"] == 1);
    CHECK(io::oned_rule_from_json(doc) == bar);
    auto short_window = doc;
    short_window["table"][0]["window"] = "00";
    CHECK_THROWS_AS(io::oned_rule_from_json(short_window), ParseError);
    auto missing = doc;
    missing["table"].erase(7);
    CHECK_THROWS_AS(io::oned_rule_from_json(missing), ParseError);

    const auto x = io::parse_oned_config("-3 1\n0 1\n# note\n7 0\n", a2);
    CHECK(x.cells() == std::map<std::int64_t, Symbol>{{-3, 1}, {0, 1}});
    CHECK(io::parse_oned_config(io::format_oned_config(x), a2) == x);
    CHECK_THROWS_AS(io::parse_oned_config("1 1\n1 0\n", a2), ParseError);
}

TEST_CASE("automorphism descriptions round-trip") {
    std::mt19937_64 rng(3);
    const auto g = random_automorphism(k3, 3, 2, rng);
    const auto back = io::automorphism_from_json(io::automorphism_to_json(g));
    CHECK(back.anchor_image == g.anchor_image);
    CHECK(back.depth == g.depth);
    CHECK(back.permutations == g.permutations);
}
