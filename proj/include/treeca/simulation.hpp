#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "treeca/rules.hpp"
#include "treeca/topology.hpp"

namespace treeca {

// Finite-support configuration. Only nonzero symbols are stored; every other
// vertex carries 0.
class FiniteConfig {
public:
    FiniteConfig(TreeParams params, Alphabet alphabet);
    // Zero entries of `cells` are dropped. Throws on invalid addresses or symbols.
    FiniteConfig(TreeParams params, Alphabet alphabet, const Labeling& cells);

    const TreeParams& params() const { return params_; }
    const Alphabet& alphabet() const { return alphabet_; }
    const Labeling& cells() const { return cells_; }

    Symbol at(const Vertex& v) const;
    void set(const Vertex& v, Symbol s);

    VertexSet support() const;
    std::size_t support_size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    friend bool operator==(const FiniteConfig& a, const FiniteConfig& b) {
        return a.params_ == b.params_ && a.alphabet_ == b.alphabet_ && a.cells_ == b.cells_;
    }

private:
    TreeParams params_;
    Alphabet alphabet_;
    Labeling cells_;
};

// Canonical rank of ball(center, space.radius()) read from x.
std::uint64_t ball_rank_in(const BallSpace& space, const FiniteConfig& x, const Vertex& center);

// One application of the global map. Throws NonQuiescentError unless f(0) = 0.
FiniteConfig step(const Rule& rule, const FiniteConfig& x);

struct Trajectory {
    std::vector<FiniteConfig> states;
    // Max distance of the support from the hull of the initial support, per
    // step; absent when the support is empty.
    std::vector<std::optional<int>> support_radius;
};

Trajectory run(const Rule& rule, const FiniteConfig& x, int steps);

// x + y for configurations with disjoint supports.
FiniteConfig disjoint_sum(const FiniteConfig& x, const FiniteConfig& y);

// Finite description of a tree automorphism g. g maps the root to
// anchor_image. For each vertex u, the children of u (in digit order) go to
// the neighbors of g(u) other than g(parent(u)), listed in neighbor order and
// picked through permutations[u]. Vertices without an entry use the identity.
// The description covers ball(e, depth).
struct AutomorphismDescription {
    Vertex anchor_image;
    int depth = 0;
    std::map<Vertex, std::vector<int>> permutations;

    static AutomorphismDescription identity(int depth);

    // Throws PreconditionError on malformed permutations.
    void validate(const TreeParams& params) const;
    // Throws DomainError when v lies beyond the described depth.
    Vertex image(const TreeParams& params, const Vertex& v) const;
};

// (g x)_{g(h)} = x_h. Throws DomainError if supp(x) is not described.
FiniteConfig apply_automorphism(const AutomorphismDescription& g, const FiniteConfig& x);

AutomorphismDescription random_automorphism(const TreeParams& params, int depth, int anchor_radius,
                                            std::mt19937_64& rng);

// Independent brute-force evaluator on an explicit truncated ball. Balls are
// canonicalized by sorted AHU strings built from adjacency lists, then looked
// up in a string table built from the rule's canonical ball list.
class OracleEvaluator {
public:
    explicit OracleEvaluator(const Rule& rule);

    const Rule& rule() const { return rule_; }

    // Labels on the vertices of tb at depth <= tb.radius - rule.radius, in
    // tb's vertex order. Vertices outside the truncation count as 0.
    std::vector<Symbol> step(const TruncatedBall& tb, std::span<const Symbol> labels) const;

    // The output at vertex v, whose ball must lie inside tb.
    Symbol evaluate_at(const TruncatedBall& tb, std::span<const Symbol> labels, int v) const;

private:
    std::string key(const TruncatedBall& tb, std::span<const Symbol> labels, int v, int from, int height) const;

    Rule rule_;
    std::unordered_map<std::string, Symbol> table_;
};

std::vector<Symbol> oracle_step(const Rule& rule, const TruncatedBall& tb, std::span<const Symbol> labels);

// Labels of x on tb (0 outside the support).
std::vector<Symbol> labels_on(const TruncatedBall& tb, const FiniteConfig& x);

// Least n <= horizon with f^n(x) = 0.
std::optional<int> mortality(const Rule& rule, const FiniteConfig& x, int horizon);

// Max distance from the hull of supp(x) (the single vertex when |supp| = 1)
// to supp(f^n(x)), for n = 0..steps; absent entries mark an empty support.
std::vector<std::optional<int>> support_radius_profile(const Rule& rule, const FiniteConfig& x, int steps);

}  // namespace treeca
