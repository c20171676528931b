#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace treeca {

// Degree of the regular tree. k = 2 is the bi-infinite path.
struct TreeParams {
    int k = 3;

    // Throws PreconditionError unless 2 <= k <= 10 (digits must fit one
    // decimal character in the text form).
    void validate() const;
    friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

// Word address of a vertex of T_k. The empty word is the root address.
// The first digit ranges over {0..k-1}, later digits over {0..k-2}.
// Digits are stored as the characters '0'..'9', so ordering of vertices is
// the lexicographic order of their text form.
class Vertex {
public:
    Vertex() = default;
    explicit Vertex(std::string digits) : word_(std::move(digits)) {}

    // Parses the text form ("e" for the root). Throws AddressError on
    // characters that are not decimal digits.
    static Vertex parse(std::string_view text);

    const std::string& word() const { return word_; }
    std::size_t depth() const { return word_.size(); }
    bool is_root() const { return word_.empty(); }
    int digit(std::size_t i) const { return word_[i] - '0'; }

    Vertex parent() const;
    Vertex child(int digit) const;
    bool has_prefix(const Vertex& prefix) const;

    // "e" for the root, else the digit string.
    std::string text() const;

    friend auto operator<=>(const Vertex&, const Vertex&) = default;
    friend bool operator==(const Vertex&, const Vertex&) = default;

private:
    std::string word_;
};

using VertexSet = std::set<Vertex>;

bool is_valid(const TreeParams& params, const Vertex& v);

// Throws AddressError if v is not a valid address for params.k.
void check_address(const TreeParams& params, const Vertex& v);

// The k neighbors of v: its parent (unless v is the root) followed by its
// children in digit order.
std::vector<Vertex> neighbors(const TreeParams& params, const Vertex& v);

// Neighbors of v other than `from`. `from` must be adjacent to v.
std::vector<Vertex> neighbors_except(const TreeParams& params, const Vertex& v, const Vertex& from);

std::size_t common_prefix_length(const Vertex& a, const Vertex& b);

// Path metric: |v| + |w| - 2 |lcp(v, w)|.
int distance(const Vertex& v, const Vertex& w);

// All vertices within distance r of center.
VertexSet ball(const TreeParams& params, const Vertex& center, int r);

// Union of ball(s, r) over s in centers.
VertexSet ball(const TreeParams& params, const VertexSet& centers, int r);

// |ball(., r)|: 1 + k((k-1)^r - 1)/(k-2) for k >= 3, 1 + 2r for k = 2.
std::uint64_t ball_size(const TreeParams& params, int r);

// Canonical bi-infinite path: p(-n) is the word 0^n, p(n) is 1 0^(n-1).
Vertex path_vertex(std::int64_t n);

// Busemann function towards the end p(-inf), normalised so b(p(0)) = 0:
// |v| - 2 * (number of leading zeros of v).
std::int64_t busemann_level(const Vertex& v);

// Convex hull of a finite vertex set together with its leaves and the
// branches hanging off every leaf.
//
// For a leaf u, B_u is u together with every vertex outside the hull whose
// nearest hull vertex is u, i.e. the component of T \ (S \ F) containing u.
// The coordinate c(t) = d(t, u) is the depth of t in that branch.
class HullDecomposition {
public:
    HullDecomposition(const TreeParams& params, const VertexSet& points);

    const VertexSet& hull() const { return hull_; }
    const VertexSet& leaves() const { return leaves_; }
    // Top of the hull in the word order: longest common prefix of the points.
    const Vertex& top() const { return top_; }

    bool in_hull(const Vertex& t) const { return hull_.contains(t); }

    // Nearest hull vertex to t.
    Vertex projection(const Vertex& t) const;
    int distance_to_hull(const Vertex& t) const;

    // Membership in B_u. Throws PreconditionError if u is not a leaf.
    bool in_component(const Vertex& u, const Vertex& t) const;
    // The leaf u with t in B_u, if any.
    std::optional<Vertex> component_of(const Vertex& t) const;
    // c(t) = d(t, u); t must lie in B_u.
    int coordinate(const Vertex& u, const Vertex& t) const;

private:
    TreeParams params_;
    VertexSet hull_;
    VertexSet leaves_;
    Vertex top_;
};

// Throws PreconditionError if |points| < 2.
HullDecomposition hull_decomposition(const TreeParams& params, const VertexSet& points);

// ball(e, radius) as an explicit graph. Vertices are sorted by (distance from
// the root, word), so the vertices within any smaller radius form a prefix.
// Adjacency lists only contain vertices inside the truncation.
struct TruncatedBall {
    TreeParams params;
    int radius = 0;
    std::vector<Vertex> vertices;
    std::vector<int> depth;
    std::vector<std::vector<int>> adjacency;
    std::map<Vertex, int> index;

    TruncatedBall(TreeParams params, int radius);

    std::size_t size() const { return vertices.size(); }
    // Number of vertices at depth <= r.
    std::size_t prefix_size(int r) const;
    int index_of(const Vertex& v) const;  // -1 if outside
};

}  // namespace treeca
