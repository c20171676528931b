#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "treeca/rules.hpp"
#include "treeca/topology.hpp"

namespace treeca {

// Finite-support configuration on Z. Absent levels carry 0.
class OneDimConfig {
public:
    explicit OneDimConfig(Alphabet alphabet);
    OneDimConfig(Alphabet alphabet, const std::map<std::int64_t, Symbol>& cells);

    const Alphabet& alphabet() const { return alphabet_; }
    const std::map<std::int64_t, Symbol>& cells() const { return cells_; }
    Symbol at(std::int64_t level) const;
    void set(std::int64_t level, Symbol s);
    bool empty() const { return cells_.empty(); }

    friend bool operator==(const OneDimConfig&, const OneDimConfig&) = default;

private:
    Alphabet alphabet_;
    std::map<std::int64_t, Symbol> cells_;
};

// sigma(x)_i = x_{i+1}, applied `by` times (negative values shift the other way).
OneDimConfig shift(const OneDimConfig& x, std::int64_t by = 1);

// Sliding-window rule on Z. Windows are indexed as base-|A| numbers with the
// leftmost cell most significant, matching their digit-string text form.
class OneDimRule {
public:
    OneDimRule(Alphabet alphabet, int radius, std::vector<Symbol> table);

    const Alphabet& alphabet() const { return alphabet_; }
    int radius() const { return radius_; }
    int window_length() const { return 2 * radius_ + 1; }
    const std::vector<Symbol>& table() const { return table_; }
    bool quiescent() const { return table_.front() == 0; }

    Symbol output(std::span<const Symbol> window) const;
    std::uint64_t window_index(std::span<const Symbol> window) const;
    std::vector<Symbol> window_at(std::uint64_t index) const;

    friend bool operator==(const OneDimRule&, const OneDimRule&) = default;

private:
    Alphabet alphabet_;
    int radius_;
    std::vector<Symbol> table_;
};

// phi(x)_t = x_{b(t)} on the given vertices (zeros included).
Labeling phi_expand(const OneDimConfig& x, const VertexSet& region);

// The induced CA on Z: window w is sent to the tree rule's output on
// ball(e, r) labeled level-wise by w.
OneDimRule quotient_rule(const Rule& rule);

// Throws NonQuiescentError unless the all-zero window maps to 0.
OneDimConfig oned_step(const OneDimRule& rule, const OneDimConfig& x);

// f^n == 0 on A^Z, checked over all words of length 2nr+1.
bool oned_nilpotent_at(const OneDimRule& rule, int n, const Limits& limits = {});

// f^n == 0 on A^{T_k}. Radius-1 rules use the history check below; others
// compose the rule n times and inspect the table.
bool tree_nilpotent_at(const Rule& rule, int n, const Limits& limits = {});

// f^n == 0 via the n-fold composition table over canonical balls of radius n*r.
bool composed_nilpotent_at(const Rule& rule, int n, const Limits& limits = {});

// Exact f^n == 0 test for radius-1 rules without building the radius-n table.
//
// For a vertex at distance i from the center only its values at times
// 0..n-i matter. Working inwards from distance n, each level keeps the set of
// (parent history prefix, own history) pairs realizable by some labeling of
// the subtree below it; the center then checks whether any realizable
// history ends in a nonzero symbol. When one does, `witness` is a labeling of
// ball(e, n) whose n-th image is nonzero at e.
struct NilpotencyCheck {
    bool nilpotent = false;
    std::optional<Labeling> witness;
};

NilpotencyCheck history_nilpotency(const Rule& rule, int n, const Limits& limits = {});

// Least n in 1..n_max with the property, if any.
std::optional<int> tree_nilpotency_horizon(const Rule& rule, int n_max, const Limits& limits = {});
std::optional<int> oned_nilpotency_horizon(const OneDimRule& rule, int n_max, const Limits& limits = {});

}  // namespace treeca
