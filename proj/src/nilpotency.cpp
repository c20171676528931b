#include <unordered_set>

#include "treeca/errors.hpp"
#include "treeca/quotient.hpp"

namespace treeca {

namespace {

// A realizable (parent history prefix, own history) pair for a vertex at a
// fixed distance from the center, with one choice of child entries that
// realizes it. Histories are base-|A| numbers, time 0 least significant.
struct HistoryEntry {
    std::uint64_t parent_prefix = 0;
    std::uint64_t history = 0;
    std::vector<int> children;
};

struct HistoryLevel {
    std::vector<HistoryEntry> entries;
    // parent_prefix -> indices into entries
    std::vector<std::vector<int>> by_parent;
};

class HistorySolver {
public:
    HistorySolver(const Rule& rule, int n, const Limits& limits) : rule_(rule), n_(n), a_(rule.alphabet().size) {
        powers_.push_back(1);
        for (int i = 0; i <= 2 * n + 1; ++i) {
            if (powers_.back() > limits.max_canonical_balls) {
                throw CapacityError("history space for n=" + std::to_string(n) + " exceeds the cap");
            }
            powers_.push_back(powers_.back() * a_);
        }
    }

    NilpotencyCheck solve() {
        levels_.resize(static_cast<std::size_t>(n_ + 1));
        HistoryLevel& outer = levels_[static_cast<std::size_t>(n_)];
        outer.by_parent.resize(1);
        for (std::uint64_t s = 0; s < a_; ++s) {
            outer.by_parent[0].push_back(static_cast<int>(outer.entries.size()));
            outer.entries.push_back({0, s, {}});
        }
        for (int i = n_ - 1; i >= 1; --i) build_level(i);
        return solve_center();
    }

private:
    Symbol symbol_at(std::uint64_t history, int time) const {
        return static_cast<Symbol>((history / powers_[static_cast<std::size_t>(time)]) % a_);
    }

    Symbol apply(Symbol center, std::uint64_t* neighbor_symbols, std::size_t count) const {
        return rule_.output(rule_.space().ball_rank(center, std::span(neighbor_symbols, count)));
    }

    // Calls fn(indices) for every multiset of `size` elements of pool.
    template <typename F>
    static void for_each_multiset(const std::vector<int>& pool, std::size_t size, F&& fn) {
        if (pool.empty()) return;
        std::vector<std::size_t> pick(size, 0);
        while (true) {
            fn(pick);
            std::size_t pos = size;
            while (pos > 0 && pick[pos - 1] + 1 == pool.size()) --pos;
            if (pos == 0) return;
            const std::size_t v = pick[pos - 1] + 1;
            for (std::size_t j = pos - 1; j < size; ++j) pick[j] = v;
        }
    }

    // Vertices at distance i keep histories of length n-i+1 and need their
    // parent's values at times 0..n-i-1.
    void build_level(int i) {
        const int length = n_ - i + 1;
        const HistoryLevel& below = levels_[static_cast<std::size_t>(i + 1)];
        HistoryLevel& level = levels_[static_cast<std::size_t>(i)];
        const std::uint64_t parent_codes = powers_[static_cast<std::size_t>(length - 1)];
        level.by_parent.resize(static_cast<std::size_t>(parent_codes));
        const auto arity = static_cast<std::size_t>(rule_.params().k - 1);
        std::unordered_set<std::uint64_t> seen;
        std::uint64_t ranks[16];

        for (std::uint64_t h = 0; h < powers_[static_cast<std::size_t>(length)]; ++h) {
            const std::uint64_t child_facing = h % powers_[static_cast<std::size_t>(length - 2)];
            const auto& pool = below.by_parent[static_cast<std::size_t>(child_facing)];
            for_each_multiset(pool, arity, [&](const std::vector<std::size_t>& pick) {
                for (std::uint64_t p = 0; p < parent_codes; ++p) {
                    if (seen.contains(p * powers_[static_cast<std::size_t>(length)] + h)) continue;
                    bool consistent = true;
                    for (int t = 0; t + 1 < length && consistent; ++t) {
                        std::size_t count = 0;
                        ranks[count++] = symbol_at(p, t);
                        for (std::size_t c : pick) {
                            ranks[count++] = symbol_at(below.entries[static_cast<std::size_t>(pool[c])].history, t);
                        }
                        consistent = apply(symbol_at(h, t), ranks, count) == symbol_at(h, t + 1);
                    }
                    if (!consistent) continue;
                    seen.insert(p * powers_[static_cast<std::size_t>(length)] + h);
                    HistoryEntry entry{p, h, {}};
                    for (std::size_t c : pick) entry.children.push_back(pool[c]);
                    level.by_parent[static_cast<std::size_t>(p)].push_back(static_cast<int>(level.entries.size()));
                    level.entries.push_back(std::move(entry));
                }
            });
        }
    }

    NilpotencyCheck solve_center() {
        const int length = n_ + 1;
        const HistoryLevel& below = levels_[1];
        const auto arity = static_cast<std::size_t>(rule_.params().k);
        std::uint64_t ranks[16];
        for (std::uint64_t h = 0; h < powers_[static_cast<std::size_t>(length)]; ++h) {
            if (symbol_at(h, n_) == 0) continue;
            const std::uint64_t child_facing = h % powers_[static_cast<std::size_t>(length - 2)];
            const auto& pool = below.by_parent[static_cast<std::size_t>(child_facing)];
            std::optional<std::vector<int>> found;
            for_each_multiset(pool, arity, [&](const std::vector<std::size_t>& pick) {
                if (found) return;
                for (int t = 0; t < n_; ++t) {
                    std::size_t count = 0;
                    for (std::size_t c : pick) {
                        ranks[count++] = symbol_at(below.entries[static_cast<std::size_t>(pool[c])].history, t);
                    }
                    if (apply(symbol_at(h, t), ranks, count) != symbol_at(h, t + 1)) return;
                }
                std::vector<int> chosen;
                for (std::size_t c : pick) chosen.push_back(pool[c]);
                found = std::move(chosen);
            });
            if (found) return {false, witness(h, *found)};
        }
        return {true, std::nullopt};
    }

    Labeling witness(std::uint64_t center_history, const std::vector<int>& children) const {
        Labeling labels;
        labels.emplace(Vertex{}, symbol_at(center_history, 0));
        const auto first = neighbors(rule_.params(), Vertex{});
        for (std::size_t j = 0; j < first.size(); ++j) place(first[j], Vertex{}, 1, children[j], labels);
        return labels;
    }

    void place(const Vertex& v, const Vertex& from, int depth, int entry_id, Labeling& labels) const {
        const auto& entry = levels_[static_cast<std::size_t>(depth)].entries[static_cast<std::size_t>(entry_id)];
        labels.emplace(v, symbol_at(entry.history, 0));
        if (depth == n_) return;
        const auto next = neighbors_except(rule_.params(), v, from);
        for (std::size_t j = 0; j < next.size(); ++j) place(next[j], v, depth + 1, entry.children[j], labels);
    }

    const Rule& rule_;
    int n_;
    std::uint64_t a_;
    std::vector<std::uint64_t> powers_;
    std::vector<HistoryLevel> levels_;
};

}  // namespace

NilpotencyCheck history_nilpotency(const Rule& rule, int n, const Limits& limits) {
    if (rule.radius() != 1) throw PreconditionError("history nilpotency check needs a radius-1 rule");
    if (n < 1) throw PreconditionError("nilpotency horizon must be at least 1");
    return HistorySolver(rule, n, limits).solve();
}

}  // namespace treeca
