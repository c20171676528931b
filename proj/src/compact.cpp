#include "treeca/compact.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "treeca/errors.hpp"

namespace treeca {

CompactConfig::CompactConfig(const FiniteConfig& x) : params_(x.params()), alphabet_(x.alphabet()) {
    VertexSet explicit_vertices{Vertex{}};
    for (const auto& [v, s] : x.cells()) {
        for (std::size_t len = 0; len <= v.depth(); ++len) explicit_vertices.insert(Vertex{v.word().substr(0, len)});
    }
    std::optional<HullDecomposition> hull;
    if (!x.empty()) hull.emplace(params_, x.support());

    // Word order visits parents before children.
    std::map<Vertex, int> ids;
    for (const auto& v : explicit_vertices) {
        Node node;
        node.symbol = x.at(v);
        node.depth = static_cast<int>(v.depth());
        node.hull_distance = hull ? hull->distance_to_hull(v) : 0;
        if (!v.is_root()) {
            node.parent = ids.at(v.parent());
            node.digits.push_back(v.word().back());
        }
        const int id = add_node(std::move(node));
        ids.emplace(v, id);
        if (!v.is_root()) nodes_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(id)].parent)].children.push_back(id);
    }
    for (const auto& v : explicit_vertices) {
        const int id = ids.at(v);
        std::vector<char> free_digits;
        for (int d = 0; d < child_slots(id); ++d) {
            if (!explicit_vertices.contains(v.child(d))) free_digits.push_back(static_cast<char>('0' + d));
        }
        if (free_digits.size() == static_cast<std::size_t>(child_slots(id))) {
            nodes_[static_cast<std::size_t>(id)].frontier = true;
            continue;
        }
        if (free_digits.empty()) continue;
        Node zeros;
        zeros.parent = id;
        zeros.depth = static_cast<int>(v.depth()) + 1;
        zeros.frontier = true;
        zeros.hull_distance = hull ? hull->distance_to_hull(v.child(free_digits.front() - '0')) : 0;
        zeros.digits = std::move(free_digits);
        const int zid = add_node(std::move(zeros));
        nodes_[static_cast<std::size_t>(id)].children.push_back(zid);
    }
}

int CompactConfig::add_node(Node node) {
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size() - 1);
}

int CompactConfig::child_slots(int id) const { return nodes_[static_cast<std::size_t>(id)].parent < 0 ? params_.k : params_.k - 1; }

void CompactConfig::expand_frontier(int id) {
    Node child;
    child.parent = id;
    child.depth = nodes_[static_cast<std::size_t>(id)].depth + 1;
    child.hull_distance = nodes_[static_cast<std::size_t>(id)].hull_distance + 1;
    child.frontier = true;
    for (int d = 0; d < child_slots(id); ++d) child.digits.push_back(static_cast<char>('0' + d));
    const int cid = add_node(std::move(child));
    nodes_[static_cast<std::size_t>(id)].frontier = false;
    nodes_[static_cast<std::size_t>(id)].children.push_back(cid);
}

// Makes every vertex within `radius` of a nonzero cell explicit. Vertices
// below the remaining frontier then see all-zero balls.
void CompactConfig::pad(int radius) {
    std::vector<int> dist(nodes_.size(), -1);
    std::deque<int> queue;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].symbol != 0) {
            dist[i] = 0;
            queue.push_back(static_cast<int>(i));
        }
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        const int d = dist[static_cast<std::size_t>(u)];
        if (d >= radius) continue;
        if (nodes_[static_cast<std::size_t>(u)].frontier) {
            expand_frontier(u);
            dist.resize(nodes_.size(), -1);
        }
        auto visit = [&](int w) {
            if (w >= 0 && dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = d + 1;
                queue.push_back(w);
            }
        };
        visit(nodes_[static_cast<std::size_t>(u)].parent);
        for (int c : nodes_[static_cast<std::size_t>(u)].children) visit(c);
    }
}

std::uint64_t CompactConfig::descriptor_down(const BallSpace& space, int id, int height) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (height == 0) return node.symbol;
    std::uint64_t ranks[16];
    std::size_t n = 0;
    if (node.frontier) {
        for (int i = 0; i < child_slots(id); ++i) ranks[n++] = 0;
    } else {
        for (int c : node.children) {
            const std::uint64_t r = descriptor_down(space, c, height - 1);
            for (std::size_t m = 0; m < nodes_[static_cast<std::size_t>(c)].digits.size(); ++m) ranks[n++] = r;
        }
    }
    return space.descriptor_rank(height, node.symbol, std::span(ranks, n));
}

// Descriptor of the parent of `from`, seen from one member of `from`.
std::uint64_t CompactConfig::descriptor_up(const BallSpace& space, int from, int height) const {
    const int pid = nodes_[static_cast<std::size_t>(from)].parent;
    const Node& parent = nodes_[static_cast<std::size_t>(pid)];
    if (height == 0) return parent.symbol;
    std::uint64_t ranks[16];
    std::size_t n = 0;
    if (parent.parent >= 0) ranks[n++] = descriptor_up(space, pid, height - 1);
    for (int c : parent.children) {
        std::size_t copies = nodes_[static_cast<std::size_t>(c)].digits.size();
        if (c == from) --copies;
        if (copies == 0) continue;
        const std::uint64_t r = descriptor_down(space, c, height - 1);
        for (std::size_t m = 0; m < copies; ++m) ranks[n++] = r;
    }
    return space.descriptor_rank(height, parent.symbol, std::span(ranks, n));
}

std::uint64_t CompactConfig::ball_rank(const BallSpace& space, int id) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (space.radius() == 0) return node.symbol;
    const int h = space.radius() - 1;
    std::uint64_t ranks[16];
    std::size_t n = 0;
    if (node.parent >= 0) ranks[n++] = descriptor_up(space, id, h);
    if (node.frontier) {
        for (int i = 0; i < child_slots(id); ++i) ranks[n++] = 0;
    } else {
        for (int c : node.children) {
            const std::uint64_t r = descriptor_down(space, c, h);
            for (std::size_t m = 0; m < nodes_[static_cast<std::size_t>(c)].digits.size(); ++m) ranks[n++] = r;
        }
    }
    return space.ball_rank(node.symbol, std::span(ranks, n));
}

void CompactConfig::step(const Rule& rule) {
    if (!rule.quiescent()) {
        throw NonQuiescentError("rule " + rule.id() + " is not quiescent; finite supports are not preserved");
    }
    if (!(rule.params() == params_) || !(rule.alphabet() == alphabet_)) {
        throw PreconditionError("rule and configuration disagree on k or the alphabet");
    }
    if (empty()) return;
    pad(rule.radius());
    std::vector<Symbol> next(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) next[i] = rule.output(ball_rank(rule.space(), static_cast<int>(i)));
    for (std::size_t i = 0; i < nodes_.size(); ++i) nodes_[i].symbol = next[i];
}

bool CompactConfig::empty() const {
    return std::none_of(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.symbol != 0; });
}

bool CompactConfig::zero_within(int radius) const {
    return std::none_of(nodes_.begin(), nodes_.end(),
                        [radius](const Node& n) { return n.symbol != 0 && n.depth <= radius; });
}

std::optional<int> CompactConfig::support_excess() const {
    std::optional<int> best;
    for (const auto& n : nodes_) {
        if (n.symbol != 0) best = std::max(best.value_or(0), n.hull_distance);
    }
    return best;
}

std::uint64_t CompactConfig::support_size() const {
    std::vector<unsigned __int128> count(nodes_.size());
    unsigned __int128 total = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto mult = static_cast<unsigned __int128>(std::max<std::size_t>(1, nodes_[i].digits.size()));
        count[i] = nodes_[i].parent < 0 ? mult : mult * count[static_cast<std::size_t>(nodes_[i].parent)];
        if (count[i] > static_cast<unsigned __int128>(~std::uint64_t{0})) throw CapacityError("support size overflows 64 bits");
        if (nodes_[i].symbol != 0) total += count[i];
    }
    if (total > static_cast<unsigned __int128>(~std::uint64_t{0})) throw CapacityError("support size overflows 64 bits");
    return static_cast<std::uint64_t>(total);
}

FiniteConfig CompactConfig::expand() const {
    FiniteConfig out(params_, alphabet_);
    std::vector<std::pair<int, std::string>> stack{{0, std::string{}}};
    while (!stack.empty()) {
        auto [id, word] = std::move(stack.back());
        stack.pop_back();
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (node.symbol != 0) out.set(Vertex{word}, node.symbol);
        for (int c : node.children) {
            for (char d : nodes_[static_cast<std::size_t>(c)].digits) stack.emplace_back(c, word + d);
        }
    }
    return out;
}

}  // namespace treeca
