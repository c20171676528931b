#include "treeca/topology.hpp"

#include <algorithm>
#include <deque>

#include "treeca/errors.hpp"

namespace treeca {

void TreeParams::validate() const {
    if (k < 2 || k > 10) {
        throw PreconditionError("tree degree k must lie in [2, 10], got " + std::to_string(k));
    }
}

Vertex Vertex::parse(std::string_view text) {
    if (text == "e") return Vertex{};
    if (text.empty()) throw AddressError("empty vertex text; use \"e\" for the root");
    for (char c : text) {
        if (c < '0' || c > '9') throw AddressError("bad vertex word '" + std::string(text) + "'");
    }
    return Vertex{std::string(text)};
}

Vertex Vertex::parent() const {
    if (word_.empty()) throw PreconditionError("the root address has no parent");
    return Vertex{word_.substr(0, word_.size() - 1)};
}

Vertex Vertex::child(int digit) const {
    std::string w = word_;
    w.push_back(static_cast<char>('0' + digit));
    return Vertex{std::move(w)};
}

bool Vertex::has_prefix(const Vertex& prefix) const {
    return word_.size() >= prefix.word_.size() && word_.compare(0, prefix.word_.size(), prefix.word_) == 0;
}

std::string Vertex::text() const { return word_.empty() ? std::string("e") : word_; }

bool is_valid(const TreeParams& params, const Vertex& v) {
    for (std::size_t i = 0; i < v.depth(); ++i) {
        const int d = v.digit(i);
        const int limit = (i == 0) ? params.k - 1 : params.k - 2;
        if (d < 0 || d > limit) return false;
    }
    return true;
}

void check_address(const TreeParams& params, const Vertex& v) {
    if (!is_valid(params, v)) {
        throw AddressError("vertex '" + v.text() + "' is not an address of T_" + std::to_string(params.k));
    }
}

namespace {

int child_count(const TreeParams& params, const Vertex& v) { return v.is_root() ? params.k : params.k - 1; }

}  // namespace

std::vector<Vertex> neighbors(const TreeParams& params, const Vertex& v) {
    check_address(params, v);
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(params.k));
    if (!v.is_root()) out.push_back(v.parent());
    for (int d = 0; d < child_count(params, v); ++d) out.push_back(v.child(d));
    return out;
}

std::vector<Vertex> neighbors_except(const TreeParams& params, const Vertex& v, const Vertex& from) {
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(params.k));
    if (!v.is_root()) {
        Vertex p = v.parent();
        if (p != from) out.push_back(std::move(p));
    }
    for (int d = 0; d < child_count(params, v); ++d) {
        Vertex c = v.child(d);
        if (c != from) out.push_back(std::move(c));
    }
    return out;
}

std::size_t common_prefix_length(const Vertex& a, const Vertex& b) {
    const auto& x = a.word();
    const auto& y = b.word();
    const auto mm = std::mismatch(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(std::min(x.size(), y.size())), y.begin());
    return static_cast<std::size_t>(mm.first - x.begin());
}

int distance(const Vertex& v, const Vertex& w) {
    const auto lcp = common_prefix_length(v, w);
    return static_cast<int>(v.depth() + w.depth() - 2 * lcp);
}

VertexSet ball(const TreeParams& params, const Vertex& center, int r) {
    return ball(params, VertexSet{center}, r);
}

VertexSet ball(const TreeParams& params, const VertexSet& centers, int r) {
    if (r < 0) throw PreconditionError("ball radius must be non-negative");
    VertexSet seen;
    std::deque<std::pair<Vertex, int>> queue;
    for (const auto& c : centers) {
        check_address(params, c);
        if (seen.insert(c).second) queue.emplace_back(c, 0);
    }
    while (!queue.empty()) {
        auto [v, d] = std::move(queue.front());
        queue.pop_front();
        if (d == r) continue;
        for (auto& w : neighbors(params, v)) {
            if (seen.insert(w).second) queue.emplace_back(std::move(w), d + 1);
        }
    }
    return seen;
}

std::uint64_t ball_size(const TreeParams& params, int r) {
    if (params.k == 2) return 1 + 2 * static_cast<std::uint64_t>(r);
    std::uint64_t total = 1;
    std::uint64_t shell = static_cast<std::uint64_t>(params.k);
    for (int i = 1; i <= r; ++i) {
        total += shell;
        shell *= static_cast<std::uint64_t>(params.k - 1);
    }
    return total;
}

Vertex path_vertex(std::int64_t n) {
    if (n <= 0) return Vertex{std::string(static_cast<std::size_t>(-n), '0')};
    return Vertex{"1" + std::string(static_cast<std::size_t>(n - 1), '0')};
}

std::int64_t busemann_level(const Vertex& v) {
    const auto& w = v.word();
    const auto zeros = static_cast<std::int64_t>(std::find_if(w.begin(), w.end(), [](char c) { return c != '0'; }) - w.begin());
    return static_cast<std::int64_t>(w.size()) - 2 * zeros;
}

HullDecomposition::HullDecomposition(const TreeParams& params, const VertexSet& points) : params_(params) {
    if (points.empty()) throw PreconditionError("hull of an empty vertex set");
    top_ = *points.begin();
    for (const auto& p : points) {
        check_address(params, p);
        top_ = Vertex{top_.word().substr(0, common_prefix_length(top_, p))};
    }
    // In the word tree the geodesic from p to top is the chain of prefixes of
    // p no shorter than top, so the hull is the union of those chains.
    for (const auto& p : points) {
        for (std::size_t len = top_.depth(); len <= p.depth(); ++len) hull_.insert(Vertex{p.word().substr(0, len)});
    }
    for (const auto& v : hull_) {
        int degree = 0;
        for (const auto& w : neighbors(params, v)) degree += hull_.contains(w) ? 1 : 0;
        if (degree <= 1) leaves_.insert(v);
    }
}

Vertex HullDecomposition::projection(const Vertex& t) const {
    if (!t.has_prefix(top_)) return top_;
    for (std::size_t len = t.depth();; --len) {
        Vertex prefix{t.word().substr(0, len)};
        if (hull_.contains(prefix)) return prefix;
        if (len == top_.depth()) break;
    }
    return top_;
}

int HullDecomposition::distance_to_hull(const Vertex& t) const { return distance(t, projection(t)); }

bool HullDecomposition::in_component(const Vertex& u, const Vertex& t) const {
    if (!leaves_.contains(u)) throw PreconditionError("vertex '" + u.text() + "' is not a leaf of the hull");
    if (t == u) return true;
    return !hull_.contains(t) && projection(t) == u;
}

std::optional<Vertex> HullDecomposition::component_of(const Vertex& t) const {
    if (leaves_.contains(t)) return t;
    if (hull_.contains(t)) return std::nullopt;
    Vertex p = projection(t);
    if (leaves_.contains(p)) return p;
    return std::nullopt;
}

int HullDecomposition::coordinate(const Vertex& u, const Vertex& t) const {
    if (!in_component(u, t)) throw PreconditionError("vertex '" + t.text() + "' is not in the branch of leaf '" + u.text() + "'");
    return distance(t, u);
}

HullDecomposition hull_decomposition(const TreeParams& params, const VertexSet& points) {
    if (points.size() < 2) throw PreconditionError("hull decomposition needs at least two points");
    return HullDecomposition(params, points);
}

}  // namespace treeca

namespace treeca {

TruncatedBall::TruncatedBall(TreeParams p, int r) : params(p), radius(r) {
    params.validate();
    const VertexSet all = ball(params, Vertex{}, radius);
    vertices.assign(all.begin(), all.end());
    std::stable_sort(vertices.begin(), vertices.end(),
                     [](const Vertex& a, const Vertex& b) { return a.depth() < b.depth(); });
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        index.emplace(vertices[i], static_cast<int>(i));
        depth.push_back(static_cast<int>(vertices[i].depth()));
    }
    adjacency.resize(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (const auto& w : neighbors(params, vertices[i])) {
            if (auto it = index.find(w); it != index.end()) adjacency[i].push_back(it->second);
        }
    }
}

std::size_t TruncatedBall::prefix_size(int r) const {
    if (r < 0) return 0;
    return static_cast<std::size_t>(std::upper_bound(depth.begin(), depth.end(), r) - depth.begin());
}

int TruncatedBall::index_of(const Vertex& v) const {
    auto it = index.find(v);
    return it == index.end() ? -1 : it->second;
}

}  // namespace treeca
