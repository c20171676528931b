#include "treeca/simulation.hpp"

#include <algorithm>
#include <numeric>

#include "treeca/compact.hpp"
#include "treeca/errors.hpp"
#include "treeca/random.hpp"

namespace treeca {

FiniteConfig::FiniteConfig(TreeParams params, Alphabet alphabet) : params_(params), alphabet_(alphabet) {
    params_.validate();
    alphabet_.validate();
}

FiniteConfig::FiniteConfig(TreeParams params, Alphabet alphabet, const Labeling& cells)
    : FiniteConfig(params, alphabet) {
    for (const auto& [v, s] : cells) set(v, s);
}

Symbol FiniteConfig::at(const Vertex& v) const {
    auto it = cells_.find(v);
    return it == cells_.end() ? Symbol{0} : it->second;
}

void FiniteConfig::set(const Vertex& v, Symbol s) {
    check_address(params_, v);
    if (!alphabet_.contains(s)) {
        throw PreconditionError("symbol " + std::to_string(s) + " outside alphabet of size " +
                                std::to_string(alphabet_.size));
    }
    if (s == 0) {
        cells_.erase(v);
    } else {
        cells_[v] = s;
    }
}

VertexSet FiniteConfig::support() const {
    VertexSet out;
    for (const auto& entry : cells_) out.insert(out.end(), entry.first);
    return out;
}

namespace {

std::uint64_t config_descriptor(const BallSpace& space, const FiniteConfig& x, const Vertex& v, const Vertex& from,
                                int height) {
    if (height == 0) return x.at(v);
    std::uint64_t ranks[16];
    std::size_t n = 0;
    for (const auto& w : neighbors_except(space.params(), v, from)) {
        ranks[n++] = config_descriptor(space, x, w, v, height - 1);
    }
    return space.descriptor_rank(height, x.at(v), std::span(ranks, n));
}

void require_quiescent(const Rule& rule) {
    if (!rule.quiescent()) {
        throw NonQuiescentError("rule " + rule.id() +
                                " maps the all-zero ball to a nonzero symbol; finite supports are not preserved");
    }
}

void require_compatible(const Rule& rule, const FiniteConfig& x) {
    if (!(rule.params() == x.params()) || !(rule.alphabet() == x.alphabet())) {
        throw PreconditionError("rule and configuration disagree on k or the alphabet");
    }
}

std::optional<int> max_hull_distance(const std::optional<HullDecomposition>& hull, const FiniteConfig& x) {
    if (x.empty()) return std::nullopt;
    int best = 0;
    for (const auto& [v, s] : x.cells()) best = std::max(best, hull->distance_to_hull(v));
    return best;
}

}  // namespace

std::uint64_t ball_rank_in(const BallSpace& space, const FiniteConfig& x, const Vertex& center) {
    if (space.radius() == 0) return x.at(center);
    std::uint64_t ranks[16];
    std::size_t n = 0;
    for (const auto& w : neighbors(space.params(), center)) {
        ranks[n++] = config_descriptor(space, x, w, center, space.radius() - 1);
    }
    return space.ball_rank(x.at(center), std::span(ranks, n));
}

FiniteConfig step(const Rule& rule, const FiniteConfig& x) {
    require_quiescent(rule);
    require_compatible(rule, x);
    FiniteConfig out(x.params(), x.alphabet());
    if (x.empty()) return out;
    for (const auto& t : ball(x.params(), x.support(), rule.radius())) {
        const Symbol s = rule.output(ball_rank_in(rule.space(), x, t));
        if (s != 0) out.set(t, s);
    }
    return out;
}

Trajectory run(const Rule& rule, const FiniteConfig& x, int steps) {
    if (steps < 0) throw PreconditionError("step count must be non-negative");
    require_quiescent(rule);
    Trajectory traj;
    std::optional<HullDecomposition> hull;
    if (!x.empty()) hull.emplace(x.params(), x.support());
    traj.states.push_back(x);
    traj.support_radius.push_back(max_hull_distance(hull, x));
    for (int n = 0; n < steps; ++n) {
        traj.states.push_back(step(rule, traj.states.back()));
        traj.support_radius.push_back(max_hull_distance(hull, traj.states.back()));
    }
    return traj;
}

FiniteConfig disjoint_sum(const FiniteConfig& x, const FiniteConfig& y) {
    if (!(x.params() == y.params()) || !(x.alphabet() == y.alphabet())) {
        throw PreconditionError("disjoint_sum needs configurations over the same tree and alphabet");
    }
    FiniteConfig out = x;
    for (const auto& [v, s] : y.cells()) {
        if (x.at(v) != 0) throw PreconditionError("supports overlap at vertex '" + v.text() + "'");
        out.set(v, s);
    }
    return out;
}

AutomorphismDescription AutomorphismDescription::identity(int depth) {
    AutomorphismDescription g;
    g.depth = depth;
    return g;
}

void AutomorphismDescription::validate(const TreeParams& params) const {
    check_address(params, anchor_image);
    if (depth < 0) throw PreconditionError("automorphism description depth must be non-negative");
    for (const auto& [u, perm] : permutations) {
        check_address(params, u);
        if (static_cast<int>(u.depth()) > depth) {
            throw PreconditionError("permutation attached to '" + u.text() + "' lies beyond the described depth");
        }
        const std::size_t arity = static_cast<std::size_t>(u.is_root() ? params.k : params.k - 1);
        std::vector<int> sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expected(arity);
        std::iota(expected.begin(), expected.end(), 0);
        if (sorted != expected) throw PreconditionError("entry for '" + u.text() + "' is not a permutation");
    }
}

Vertex AutomorphismDescription::image(const TreeParams& params, const Vertex& v) const {
    if (static_cast<int>(v.depth()) > depth) {
        throw DomainError("vertex '" + v.text() + "' lies outside the described region of the automorphism");
    }
    Vertex u;
    Vertex gu = anchor_image;
    Vertex g_parent;
    for (std::size_t i = 0; i < v.depth(); ++i) {
        std::vector<Vertex> options = u.is_root() ? neighbors(params, gu) : neighbors_except(params, gu, g_parent);
        int slot = v.digit(i);
        if (auto it = permutations.find(u); it != permutations.end()) slot = it->second[static_cast<std::size_t>(slot)];
        g_parent = gu;
        gu = options[static_cast<std::size_t>(slot)];
        u = u.child(v.digit(i));
    }
    return gu;
}

FiniteConfig apply_automorphism(const AutomorphismDescription& g, const FiniteConfig& x) {
    FiniteConfig out(x.params(), x.alphabet());
    for (const auto& [v, s] : x.cells()) out.set(g.image(x.params(), v), s);
    return out;
}

AutomorphismDescription random_automorphism(const TreeParams& params, int depth, int anchor_radius,
                                            std::mt19937_64& rng) {
    AutomorphismDescription g;
    g.depth = depth;
    const VertexSet anchors = ball(params, Vertex{}, anchor_radius);
    g.anchor_image = *std::next(anchors.begin(), static_cast<std::ptrdiff_t>(uniform_below(rng, anchors.size())));
    if (depth > 0) {
        for (const auto& u : ball(params, Vertex{}, depth - 1)) {
            std::vector<int> perm(static_cast<std::size_t>(u.is_root() ? params.k : params.k - 1));
            std::iota(perm.begin(), perm.end(), 0);
            shuffle_in_place(perm, rng);
            g.permutations.emplace(u, std::move(perm));
        }
    }
    return g;
}

namespace {

std::string shape_key(const Shape& node) {
    std::string key = std::to_string(node.symbol);
    if (node.children.empty()) return key;
    std::vector<std::string> parts;
    for (const auto& c : node.children) parts.push_back(shape_key(c));
    std::sort(parts.begin(), parts.end());
    key += '(';
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) key += ',';
        key += parts[i];
    }
    key += ')';
    return key;
}

}  // namespace

OracleEvaluator::OracleEvaluator(const Rule& rule) : rule_(rule) {
    for (std::uint64_t i = 0; i < rule.space().size(); ++i) table_.emplace(shape_key(rule.space().unrank(i)), rule.output(i));
}

std::string OracleEvaluator::key(const TruncatedBall& tb, std::span<const Symbol> labels, int v, int from,
                                 int height) const {
    std::string out = std::to_string(labels[static_cast<std::size_t>(v)]);
    if (height == 0) return out;
    std::vector<std::string> parts;
    for (int w : tb.adjacency[static_cast<std::size_t>(v)]) {
        if (w != from) parts.push_back(key(tb, labels, w, v, height - 1));
    }
    std::sort(parts.begin(), parts.end());
    out += '(';
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    out += ')';
    return out;
}

Symbol OracleEvaluator::evaluate_at(const TruncatedBall& tb, std::span<const Symbol> labels, int v) const {
    if (tb.depth[static_cast<std::size_t>(v)] + rule_.radius() > tb.radius) {
        throw PreconditionError("ball around '" + tb.vertices[static_cast<std::size_t>(v)].text() +
                                "' leaves the truncation");
    }
    auto it = table_.find(key(tb, labels, v, -1, rule_.radius()));
    if (it == table_.end()) throw PreconditionError("labeled ball has symbols outside the alphabet");
    return it->second;
}

std::vector<Symbol> OracleEvaluator::step(const TruncatedBall& tb, std::span<const Symbol> labels) const {
    if (tb.radius < rule_.radius()) throw PreconditionError("truncation radius is smaller than the rule radius");
    if (labels.size() != tb.size()) throw PreconditionError("label vector does not match the truncated ball");
    const std::size_t interior = tb.prefix_size(tb.radius - rule_.radius());
    std::vector<Symbol> out(interior);
    for (std::size_t v = 0; v < interior; ++v) out[v] = evaluate_at(tb, labels, static_cast<int>(v));
    return out;
}

std::vector<Symbol> oracle_step(const Rule& rule, const TruncatedBall& tb, std::span<const Symbol> labels) {
    return OracleEvaluator(rule).step(tb, labels);
}

std::vector<Symbol> labels_on(const TruncatedBall& tb, const FiniteConfig& x) {
    std::vector<Symbol> out(tb.size(), 0);
    for (std::size_t i = 0; i < tb.size(); ++i) out[i] = x.at(tb.vertices[i]);
    return out;
}

std::optional<int> mortality(const Rule& rule, const FiniteConfig& x, int horizon) {
    require_quiescent(rule);
    require_compatible(rule, x);
    CompactConfig state(x);
    for (int n = 0; n <= horizon; ++n) {
        if (state.empty()) return n;
        if (n < horizon) state.step(rule);
    }
    return std::nullopt;
}

std::vector<std::optional<int>> support_radius_profile(const Rule& rule, const FiniteConfig& x, int steps) {
    require_quiescent(rule);
    require_compatible(rule, x);
    CompactConfig state(x);
    std::vector<std::optional<int>> out;
    out.push_back(state.support_excess());
    for (int n = 0; n < steps; ++n) {
        state.step(rule);
        out.push_back(state.support_excess());
    }
    return out;
}

}  // namespace treeca
