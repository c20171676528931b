#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treeca/topology.hpp"

namespace treeca {

using Symbol = std::uint32_t;

// Symbols are 0..size-1. Symbol 0 is the quiescent state and the target of
// every nilpotency check.
struct Alphabet {
    int size = 2;

    void validate() const;
    bool contains(Symbol s) const { return s < static_cast<Symbol>(size); }
    friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

// Caps on combinatorial enumerations. Exceeding one raises CapacityError.
struct Limits {
    std::uint64_t max_canonical_balls = 10'000'000;
    std::uint64_t max_rules = 10'000'000;
    std::uint64_t max_windows = 10'000'000;
};

// Binomial coefficient, throwing CapacityError when it exceeds 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t j);
// Number of multisets of size m over n items.
std::uint64_t multichoose(std::uint64_t n, std::uint64_t m);

// Explicit rooted labeled tree: a symbol and its child subtrees. Used as the
// readable form of a canonical ball.
struct Shape {
    Symbol symbol = 0;
    std::vector<Shape> children;

    friend bool operator==(const Shape&, const Shape&) = default;
};

// The set of labeled radius-r balls of T_k up to automorphisms fixing the
// center, with a ranking onto 0..size()-1.
//
// A descriptor of height h is a symbol plus a multiset of k-1 descriptors of
// height h-1 (height 0 is a bare symbol). A ball of radius r >= 1 is a center
// symbol plus a multiset of k descriptors of height r-1. Ranks are ordered
// symbol first, then by the sorted tuple of child ranks lexicographically, so
// rank 0 is always the all-zero ball.
class BallSpace {
public:
    BallSpace(TreeParams params, Alphabet alphabet, int radius, const Limits& limits = {});

    const TreeParams& params() const { return params_; }
    const Alphabet& alphabet() const { return alphabet_; }
    int radius() const { return radius_; }
    std::uint64_t size() const { return size_; }

    std::uint64_t descriptor_count(int height) const { return descriptor_counts_.at(static_cast<std::size_t>(height)); }

    // Rank of a height-h descriptor. child_ranks are sorted in place.
    std::uint64_t descriptor_rank(int height, Symbol symbol, std::span<std::uint64_t> child_ranks) const;
    // Rank of the whole ball. child_ranks (height radius-1) are sorted in place.
    std::uint64_t ball_rank(Symbol center, std::span<std::uint64_t> child_ranks) const;

    std::uint64_t rank(const Shape& ball) const;
    Shape unrank(std::uint64_t index) const;

    // Text form: "1(0(0,1),0(1,1),1(0,0))", children in ascending rank order.
    std::string to_string(std::uint64_t index) const;
    // Accepts children in any order; throws ParseError on malformed text or a
    // shape that does not match (k, radius).
    std::uint64_t parse(std::string_view text) const;

private:
    std::uint64_t descriptor_rank_impl(int height, Symbol symbol, std::span<std::uint64_t> child_ranks) const;
    std::uint64_t rank_descriptor(const Shape& node, int height) const;
    Shape unrank_descriptor(std::uint64_t index, int height) const;
    void check_shape(const Shape& node, int height, bool center) const;

    TreeParams params_;
    Alphabet alphabet_;
    int radius_;
    std::vector<std::uint64_t> descriptor_counts_;
    std::uint64_t size_ = 0;
};

// A labeled radius-r ball up to rooted automorphism, identified by its rank in
// the BallSpace for (k, |A|, r).
struct CanonicalBall {
    int radius = 0;
    std::uint64_t index = 0;

    friend auto operator<=>(const CanonicalBall&, const CanonicalBall&) = default;
};

using Labeling = std::map<Vertex, Symbol>;

// Canonical form of the labeled ball(center, space.radius()). The labeling
// must be total on the ball; symbols must lie in the alphabet.
CanonicalBall canonicalize(const BallSpace& space, const Labeling& labels, const Vertex& center = Vertex{});
CanonicalBall canonicalize(const TreeParams& params, const Alphabet& alphabet, int radius, const Labeling& labels,
                           const Vertex& center = Vertex{});

// All canonical balls of the given radius in rank order.
std::vector<CanonicalBall> enumerate_canonical_balls(const TreeParams& params, const Alphabet& alphabet, int radius,
                                                     const Limits& limits = {});

// A G_k-invariant local rule: a total table from canonical radius-r balls to
// symbols. Rule index = sum_i table[i] * |A|^i over the canonical ball order.
class Rule {
public:
    Rule(TreeParams params, Alphabet alphabet, int radius, std::vector<Symbol> table, const Limits& limits = {});

    static Rule from_index(TreeParams params, Alphabet alphabet, int radius, std::uint64_t index,
                           const Limits& limits = {});
    static Rule from_function(TreeParams params, Alphabet alphabet, int radius,
                              const std::function<Symbol(const Shape&)>& fn, const Limits& limits = {});

    const TreeParams& params() const { return space_.params(); }
    const Alphabet& alphabet() const { return space_.alphabet(); }
    int radius() const { return space_.radius(); }
    const BallSpace& space() const { return space_; }
    const std::vector<Symbol>& table() const { return table_; }
    Symbol output(std::uint64_t ball_index) const { return table_[static_cast<std::size_t>(ball_index)]; }

    bool quiescent() const { return table_.front() == 0; }
    // Base-|A| index of the table, if it fits in 64 bits.
    std::optional<std::uint64_t> index() const;
    // The index in decimal, without the 64-bit limit.
    std::string index_string() const;
    // Human-readable id such as "k3-a2-r1-#254".
    std::string id() const;

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.params() == b.params() && a.alphabet() == b.alphabet() && a.radius() == b.radius() &&
               a.table_ == b.table_;
    }

private:
    BallSpace space_;
    std::vector<Symbol> table_;
};

Rule constant_rule(TreeParams params, Alphabet alphabet, int radius, Symbol value = 0);
// Output the center symbol.
Rule identity_rule(TreeParams params, Alphabet alphabet, int radius);
// Output 1 iff some label in the ball is nonzero.
Rule or_rule(TreeParams params, Alphabet alphabet, int radius);

Symbol evaluate(const Rule& rule, const Labeling& labels, const Vertex& center = Vertex{});

// f after g: radius f.radius + g.radius. For a ball B, apply g at every
// vertex of ball(center, f.radius) reading inside B, then f at the center.
Rule compose(const Rule& f, const Rule& g, const Limits& limits = {});

// The same local function declared at a larger radius.
Rule lift_radius(const Rule& rule, int radius, const Limits& limits = {});
// The same local function declared at a smaller radius. Throws
// PreconditionError if the table depends on labels beyond `radius`.
Rule restrict_radius(const Rule& rule, int radius, const Limits& limits = {});

// Shell-wise dependence of a rule. shell_dependent[s] is true iff two balls
// differing only at distance s from the center have different outputs.
struct NeighborhoodReport {
    int effective_radius = 0;
    std::vector<bool> shell_dependent;
};

NeighborhoodReport minimal_neighborhood(const Rule& rule);

// The rule space for (k, |A|, r) in index order, optionally restricted to a
// half-open index range for sharding.
class RuleEnumeration {
public:
    RuleEnumeration(TreeParams params, Alphabet alphabet, int radius, const Limits& limits = {},
                    std::optional<std::pair<std::uint64_t, std::uint64_t>> range = std::nullopt);

    // Total number of rules of the family, if it fits in 64 bits.
    std::optional<std::uint64_t> family_size() const { return family_size_; }
    std::uint64_t begin_index() const { return begin_; }
    std::uint64_t end_index() const { return end_; }
    std::uint64_t size() const { return end_ - begin_; }
    Rule at(std::uint64_t index) const;

    template <typename F>
    void for_each(F&& fn) const {
        for (std::uint64_t i = begin_; i < end_; ++i) fn(at(i));
    }

private:
    BallSpace space_;
    Limits limits_;
    std::optional<std::uint64_t> family_size_;
    std::uint64_t begin_ = 0;
    std::uint64_t end_ = 0;
};

}  // namespace treeca
