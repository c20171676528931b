#include "treeca/quotient.hpp"

#include "treeca/errors.hpp"

namespace treeca {

OneDimConfig::OneDimConfig(Alphabet alphabet) : alphabet_(alphabet) { alphabet_.validate(); }

OneDimConfig::OneDimConfig(Alphabet alphabet, const std::map<std::int64_t, Symbol>& cells) : OneDimConfig(alphabet) {
    for (const auto& [i, s] : cells) set(i, s);
}

Symbol OneDimConfig::at(std::int64_t level) const {
    auto it = cells_.find(level);
    return it == cells_.end() ? Symbol{0} : it->second;
}

void OneDimConfig::set(std::int64_t level, Symbol s) {
    if (!alphabet_.contains(s)) throw PreconditionError("symbol " + std::to_string(s) + " outside the alphabet");
    if (s == 0) {
        cells_.erase(level);
    } else {
        cells_[level] = s;
    }
}

OneDimConfig shift(const OneDimConfig& x, std::int64_t by) {
    OneDimConfig out(x.alphabet());
    for (const auto& [i, s] : x.cells()) out.set(i - by, s);
    return out;
}

OneDimRule::OneDimRule(Alphabet alphabet, int radius, std::vector<Symbol> table)
    : alphabet_(alphabet), radius_(radius), table_(std::move(table)) {
    alphabet_.validate();
    if (radius_ < 0) throw PreconditionError("1D rule radius must be non-negative");
    std::uint64_t expected = 1;
    for (int i = 0; i < window_length(); ++i) {
        expected *= static_cast<std::uint64_t>(alphabet_.size);
        if (expected > (std::uint64_t{1} << 32)) throw CapacityError("1D window space too large");
    }
    if (table_.size() != expected) {
        throw PreconditionError("1D rule table has " + std::to_string(table_.size()) + " entries, expected " +
                                std::to_string(expected));
    }
    for (Symbol s : table_) {
        if (!alphabet_.contains(s)) throw PreconditionError("1D rule output outside the alphabet");
    }
}

std::uint64_t OneDimRule::window_index(std::span<const Symbol> window) const {
    std::uint64_t index = 0;
    for (Symbol s : window) index = index * static_cast<std::uint64_t>(alphabet_.size) + s;
    return index;
}

Symbol OneDimRule::output(std::span<const Symbol> window) const {
    return table_[static_cast<std::size_t>(window_index(window))];
}

std::vector<Symbol> OneDimRule::window_at(std::uint64_t index) const {
    std::vector<Symbol> w(static_cast<std::size_t>(window_length()));
    for (std::size_t i = w.size(); i-- > 0;) {
        w[i] = static_cast<Symbol>(index % static_cast<std::uint64_t>(alphabet_.size));
        index /= static_cast<std::uint64_t>(alphabet_.size);
    }
    return w;
}

Labeling phi_expand(const OneDimConfig& x, const VertexSet& region) {
    Labeling out;
    for (const auto& t : region) out.emplace(t, x.at(busemann_level(t)));
    return out;
}

OneDimRule quotient_rule(const Rule& rule) {
    const int r = rule.radius();
    const VertexSet region = ball(rule.params(), Vertex{}, r);
    std::uint64_t windows = 1;
    for (int i = 0; i < 2 * r + 1; ++i) windows *= static_cast<std::uint64_t>(rule.alphabet().size);
    std::vector<Symbol> table;
    table.reserve(static_cast<std::size_t>(windows));
    for (std::uint64_t w = 0; w < windows; ++w) {
        // Digits of w, leftmost = level -r.
        std::vector<Symbol> window(static_cast<std::size_t>(2 * r + 1));
        std::uint64_t rest = w;
        for (std::size_t i = window.size(); i-- > 0;) {
            window[i] = static_cast<Symbol>(rest % static_cast<std::uint64_t>(rule.alphabet().size));
            rest /= static_cast<std::uint64_t>(rule.alphabet().size);
        }
        Labeling labels;
        for (const auto& t : region) labels.emplace(t, window[static_cast<std::size_t>(busemann_level(t) + r)]);
        table.push_back(evaluate(rule, labels));
    }
    return OneDimRule(rule.alphabet(), r, std::move(table));
}

OneDimConfig oned_step(const OneDimRule& rule, const OneDimConfig& x) {
    if (!rule.quiescent()) throw NonQuiescentError("1D rule maps the all-zero window to a nonzero symbol");
    if (!(rule.alphabet() == x.alphabet())) throw PreconditionError("1D rule and configuration disagree on the alphabet");
    OneDimConfig out(x.alphabet());
    if (x.empty()) return out;
    const std::int64_t r = rule.radius();
    const std::int64_t lo = x.cells().begin()->first - r;
    const std::int64_t hi = x.cells().rbegin()->first + r;
    std::vector<Symbol> window(static_cast<std::size_t>(2 * r + 1));
    for (std::int64_t i = lo; i <= hi; ++i) {
        for (std::int64_t j = -r; j <= r; ++j) window[static_cast<std::size_t>(j + r)] = x.at(i + j);
        out.set(i, rule.output(window));
    }
    return out;
}

bool oned_nilpotent_at(const OneDimRule& rule, int n, const Limits& limits) {
    if (n < 1) throw PreconditionError("nilpotency horizon must be at least 1");
    const auto length = static_cast<std::size_t>(2 * n * rule.radius() + 1);
    const auto a = static_cast<std::uint64_t>(rule.alphabet().size);
    std::uint64_t words = 1;
    for (std::size_t i = 0; i < length; ++i) {
        words *= a;
        if (words > limits.max_windows) {
            throw CapacityError("1D nilpotency check at n=" + std::to_string(n) + " needs more than " +
                                std::to_string(limits.max_windows) + " words");
        }
    }
    const auto w = static_cast<std::size_t>(rule.window_length());
    std::vector<Symbol> word(length);
    for (std::uint64_t code = 0; code < words; ++code) {
        std::uint64_t rest = code;
        for (std::size_t i = length; i-- > 0;) {
            word[i] = static_cast<Symbol>(rest % a);
            rest /= a;
        }
        std::vector<Symbol> current = word;
        while (current.size() > 1) {
            std::vector<Symbol> next(current.size() - w + 1);
            for (std::size_t i = 0; i < next.size(); ++i) next[i] = rule.output(std::span(current).subspan(i, w));
            current = std::move(next);
        }
        if (rule.radius() == 0) {
            for (int s = 0; s < n; ++s) current[0] = rule.output(current);
        }
        if (current[0] != 0) return false;
    }
    return true;
}

bool composed_nilpotent_at(const Rule& rule, int n, const Limits& limits) {
    if (n < 1) throw PreconditionError("nilpotency horizon must be at least 1");
    Rule power = rule;
    for (int i = 1; i < n; ++i) power = compose(rule, power, limits);
    for (Symbol s : power.table()) {
        if (s != 0) return false;
    }
    return true;
}

bool tree_nilpotent_at(const Rule& rule, int n, const Limits& limits) {
    if (rule.radius() == 1) return history_nilpotency(rule, n, limits).nilpotent;
    return composed_nilpotent_at(rule, n, limits);
}

std::optional<int> tree_nilpotency_horizon(const Rule& rule, int n_max, const Limits& limits) {
    if (!rule.quiescent()) return std::nullopt;
    for (int n = 1; n <= n_max; ++n) {
        if (tree_nilpotent_at(rule, n, limits)) return n;
    }
    return std::nullopt;
}

std::optional<int> oned_nilpotency_horizon(const OneDimRule& rule, int n_max, const Limits& limits) {
    if (!rule.quiescent()) return std::nullopt;
    for (int n = 1; n <= n_max; ++n) {
        if (oned_nilpotent_at(rule, n, limits)) return n;
    }
    return std::nullopt;
}

}  // namespace treeca
