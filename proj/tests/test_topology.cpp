#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "treeca/errors.hpp"
#include "treeca/topology.hpp"

using namespace treeca;
using testing::V;
using testing::Vs;

namespace {

VertexSet as_set(const std::vector<Vertex>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("vertex text form") {
    CHECK(V("e").is_root());
    CHECK(V("e").text() == "e");
    CHECK(V("102").text() == "102");
    CHECK(V("102").parent() == V("10"));
    CHECK(V("e").child(2) == V("2"));
    CHECK_THROWS_AS(V("x1"), AddressError);
    CHECK_THROWS_AS(V(""), AddressError);
}

TEST_CASE("neighbors of small vertices") {
    const TreeParams k3{3}, k2{2};
    CHECK(as_set(neighbors(k3, V("e"))) == Vs({"0", "1", "2"}));
    CHECK(as_set(neighbors(k3, V("1"))) == Vs({"e", "10", "11"}));
    CHECK(as_set(neighbors(k2, V("0"))) == Vs({"e", "00"}));
    CHECK_THROWS_AS(neighbors(k3, V("02")), AddressError);
    CHECK_THROWS_AS(neighbors(k3, V("3")), AddressError);
    CHECK_THROWS_AS(TreeParams{1}.validate(), PreconditionError);
}

TEST_CASE("degree regularity and symmetric adjacency") {
    std::mt19937_64 rng(7);
    for (int k : {2, 3, 4, 5}) {
        const TreeParams p{k};
        for (int i = 0; i < 10000; ++i) {
            const Vertex v = testing::random_vertex(k, 8, rng);
            const auto ns = neighbors(p, v);
            REQUIRE(ns.size() == static_cast<std::size_t>(k));
            REQUIRE(as_set(ns).size() == static_cast<std::size_t>(k));
            for (const auto& w : ns) {
                const auto back = neighbors(p, w);
                REQUIRE(std::find(back.begin(), back.end(), v) != back.end());
            }
        }
    }
}

TEST_CASE("distance agrees with BFS on a radius-3 ball") {
    CHECK(distance(V("e"), V("e")) == 0);
    CHECK(distance(V("0"), V("1")) == 2);
    CHECK(distance(V("10"), V("11")) == 2);
    for (int k : {2, 3, 4}) {
        const oracle::Graph g(k, 3);
        for (const auto& a : g.words) {
            const auto dist = g.bfs(a);
            for (std::size_t j = 0; j < g.words.size(); ++j) {
                REQUIRE(distance(Vertex(a), Vertex(g.words[j])) == dist[j]);
            }
        }
    }
}

TEST_CASE("metric axioms on random triples") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5000; ++i) {
        const Vertex a = testing::random_vertex(3, 10, rng);
        const Vertex b = testing::random_vertex(3, 10, rng);
        const Vertex c = testing::random_vertex(3, 10, rng);
        REQUIRE(distance(a, b) == distance(b, a));
        REQUIRE((distance(a, b) == 0) == (a == b));
        REQUIRE(distance(a, c) <= distance(a, b) + distance(b, c));
    }
}

TEST_CASE("ball sizes") {
    const TreeParams k3{3};
    CHECK(ball(k3, V("e"), 1) == Vs({"e", "0", "1", "2"}));
    CHECK(ball(k3, V("e"), 2).size() == 10);
    CHECK(ball(k3, V("e"), 3).size() == 22);
    for (int k : {2, 3, 4, 5}) {
        const oracle::Graph g(k, 7);
        for (int r = 0; r <= 3; ++r) {
            const auto dist = g.bfs("0");
            std::size_t n = 0;
            for (int d : dist) n += (d >= 0 && d <= r) ? 1 : 0;
            REQUIRE(ball(TreeParams{k}, V("0"), r).size() == n);
            REQUIRE(ball_size(TreeParams{k}, r) == n);
        }
    }
}

TEST_CASE("busemann level examples") {
    CHECK(busemann_level(V("e")) == 0);
    CHECK(busemann_level(V("00")) == -2);
    CHECK(busemann_level(V("1")) == 1);
    CHECK(busemann_level(V("01")) == 0);
}

TEST_CASE("busemann level matches the limit along the canonical path") {
    // d(p(-n), t) - n by BFS, with n past the leading-zero count of t
    const int n = 6;
    const oracle::Graph g(3, 10);
    const auto dist = g.bfs(std::string(static_cast<std::size_t>(n), '0'));
    for (std::size_t j = 0; j < g.words.size(); ++j) {
        if (g.words[j].size() > 4) continue;
        REQUIRE(busemann_level(Vertex(g.words[j])) == dist[j] - n);
    }
    // and stays put for n + 1
    const auto dist2 = g.bfs(std::string(static_cast<std::size_t>(n + 1), '0'));
    for (std::size_t j = 0; j < g.words.size(); ++j) {
        if (g.words[j].size() > 4) continue;
        REQUIRE(dist2[j] - (n + 1) == dist[j] - n);
    }
}

TEST_CASE("busemann level along the path and across edges") {
    for (std::int64_t i = -20; i <= 20; ++i) REQUIRE(busemann_level(path_vertex(i)) == i);
    CHECK(path_vertex(-2) == V("00"));
    CHECK(path_vertex(0) == V("e"));
    CHECK(path_vertex(3) == V("100"));
    std::mt19937_64 rng(3);
    for (int k : {2, 3, 5}) {
        for (int i = 0; i < 2000; ++i) {
            const Vertex v = testing::random_vertex(k, 9, rng);
            for (const auto& w : neighbors(TreeParams{k}, v)) {
                const auto diff = busemann_level(w) - busemann_level(v);
                REQUIRE((diff == 1 || diff == -1));
            }
        }
    }
}

TEST_CASE("hull decomposition examples") {
    const TreeParams k3{3};
    auto h = hull_decomposition(k3, Vs({"0", "1"}));
    CHECK(h.hull() == Vs({"0", "e", "1"}));
    CHECK(h.leaves() == Vs({"0", "1"}));

    h = hull_decomposition(k3, Vs({"0", "00"}));
    CHECK(h.hull() == Vs({"0", "00"}));
    CHECK(h.leaves() == Vs({"0", "00"}));

    h = hull_decomposition(k3, Vs({"00", "01", "1"}));
    CHECK(h.hull() == Vs({"00", "01", "0", "e", "1"}));
    CHECK(h.leaves() == Vs({"00", "01", "1"}));

    CHECK_THROWS_AS(hull_decomposition(k3, Vs({"0"})), PreconditionError);
    CHECK_THROWS_AS(hull_decomposition(k3, VertexSet{}), PreconditionError);
}

namespace {

bool connected(const oracle::Graph& g, const std::vector<int>& members) {
    if (members.empty()) return false;
    std::vector<bool> in(g.words.size(), false), seen(g.words.size(), false);
    for (int m : members) in[static_cast<std::size_t>(m)] = true;
    std::vector<int> stack{members.front()};
    seen[static_cast<std::size_t>(members.front())] = true;
    std::size_t reached = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        ++reached;
        for (int w : g.adj[static_cast<std::size_t>(v)]) {
            if (in[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                stack.push_back(w);
            }
        }
    }
    return reached == members.size();
}

}  // namespace

TEST_CASE("hull is the minimal connected superset") {
    // Brute force over all subsets of ball(e, 2) for k = 3.
    const oracle::Graph g(3, 2);
    const std::size_t n = g.words.size();
    std::mt19937_64 rng(5);
    int checked = 0;
    while (checked < 60) {
        VertexSet points;
        const int want = 2 + static_cast<int>(rng() % 3);
        while (static_cast<int>(points.size()) < want) points.insert(Vertex(g.words[rng() % n]));
        const auto h = hull_decomposition(TreeParams{3}, points);
        if (h.hull().size() > 8) continue;
        ++checked;
        std::size_t best = n + 1;
        std::vector<VertexSet> minimal;
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> members;
            VertexSet chosen;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask >> i & 1u) {
                    members.push_back(static_cast<int>(i));
                    chosen.insert(Vertex(g.words[i]));
                }
            }
            if (members.size() > best) continue;
            if (!std::includes(chosen.begin(), chosen.end(), points.begin(), points.end())) continue;
            if (!connected(g, members)) continue;
            if (members.size() < best) {
                best = members.size();
                minimal.clear();
            }
            minimal.push_back(chosen);
        }
        REQUIRE(minimal.size() == 1);
        REQUIRE(minimal.front() == h.hull());
    }
}

TEST_CASE("leaf branches") {
    const TreeParams p{3};
    std::mt19937_64 rng(9);
    const VertexSet probe = ball(p, V("e"), 6);
    for (int trial = 0; trial < 40; ++trial) {
        VertexSet points;
        const int want = 2 + static_cast<int>(rng() % 3);
        while (static_cast<int>(points.size()) < want) points.insert(testing::random_vertex(3, 3, rng));
        const auto h = hull_decomposition(p, points);
        REQUIRE(std::includes(h.hull().begin(), h.hull().end(), points.begin(), points.end()));
        for (const auto& u : h.leaves()) {
            int inside = 0;
            for (const auto& w : neighbors(p, u)) inside += h.in_hull(w) ? 1 : 0;
            REQUIRE(inside == 1);
            REQUIRE(h.coordinate(u, u) == 0);
        }
        for (const auto& t : probe) {
            int owners = 0;
            for (const auto& u : h.leaves()) {
                if (!h.in_component(u, t)) continue;
                ++owners;
                REQUIRE(h.coordinate(u, t) == distance(t, u));
                REQUIRE(h.component_of(t) == u);
                // Literal reading: t in (T \ S) + u, strictly nearer to u than to the other leaves.
                REQUIRE((t == u || !h.in_hull(t)));
                for (const auto& other : h.leaves()) {
                    if (other != u) REQUIRE(distance(t, u) < distance(t, other));
                }
                if (t != u) {
                    int closer = 0;
                    for (const auto& w : neighbors(p, t)) closer += distance(w, u) < distance(t, u) ? 1 : 0;
                    REQUIRE(closer == 1);
                    // the step towards u stays in the branch
                    for (const auto& w : neighbors(p, t)) {
                        if (distance(w, u) < distance(t, u)) REQUIRE(h.in_component(u, w));
                    }
                }
            }
            REQUIRE(owners <= 1);
            if (h.in_hull(t) && !h.leaves().contains(t)) REQUIRE(owners == 0);
        }
    }
}

TEST_CASE("truncated ball layout") {
    const TruncatedBall tb(TreeParams{3}, 3);
    CHECK(tb.size() == 22);
    CHECK(tb.prefix_size(0) == 1);
    CHECK(tb.prefix_size(1) == 4);
    CHECK(tb.prefix_size(2) == 10);
    for (std::size_t i = 0; i < tb.size(); ++i) {
        CHECK(tb.index_of(tb.vertices[i]) == static_cast<int>(i));
        const std::size_t expect = tb.depth[i] < 3 ? 3u : 1u;
        CHECK(tb.adjacency[i].size() == expect);
    }
    CHECK(tb.index_of(V("0000")) == -1);
}
