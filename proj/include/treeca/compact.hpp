#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treeca/rules.hpp"
#include "treeca/simulation.hpp"

namespace treeca {

// Finite configuration stored up to sibling symmetry.
//
// The tree is rooted at e. A node stands for a group of sibling vertices that
// carried identical subtrees in the initial configuration; every automorphism
// permuting such siblings fixes x and therefore every f^n(x), so the group
// stays uniform along the whole trajectory. A frontier node has only all-zero
// subtrees below it. Growth from a small seed adds one node per frontier group
// and level instead of (k-1)^depth vertices.
class CompactConfig {
public:
    explicit CompactConfig(const FiniteConfig& x);

    // Throws NonQuiescentError unless f(0) = 0.
    void step(const Rule& rule);

    bool empty() const;
    // True iff every cell within distance `radius` of the root is zero.
    bool zero_within(int radius) const;
    // Max distance of a nonzero cell from the hull of the initial support.
    std::optional<int> support_excess() const;
    // Number of nonzero cells; throws CapacityError beyond 64 bits.
    std::uint64_t support_size() const;
    std::size_t node_count() const { return nodes_.size(); }

    FiniteConfig expand() const;

private:
    struct Node {
        Symbol symbol = 0;
        int parent = -1;
        std::vector<char> digits;  // child digits of the parent covered by this group
        std::vector<int> children;
        bool frontier = false;
        int depth = 0;
        int hull_distance = 0;
    };

    int add_node(Node node);
    void expand_frontier(int id);
    void pad(int radius);
    std::uint64_t descriptor_down(const BallSpace& space, int id, int height) const;
    std::uint64_t descriptor_up(const BallSpace& space, int from, int height) const;
    std::uint64_t ball_rank(const BallSpace& space, int id) const;
    int child_slots(int id) const;

    TreeParams params_;
    Alphabet alphabet_;
    std::vector<Node> nodes_;
};

}  // namespace treeca
