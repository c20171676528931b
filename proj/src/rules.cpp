#include "treeca/rules.hpp"

#include <algorithm>
#include <unordered_map>

#include "treeca/errors.hpp"

namespace treeca {

namespace {

using u128 = unsigned __int128;

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exponent) {
    u128 result = 1;
    for (std::uint64_t i = 0; i < exponent; ++i) {
        result *= base;
        if (result > static_cast<u128>(~std::uint64_t{0})) return std::nullopt;
        if (base <= 1) break;
    }
    return static_cast<std::uint64_t>(result);
}

std::uint64_t local_descriptor(const BallSpace& space, const TruncatedBall& tb, std::span<const Symbol> labels, int v,
                               int from, int height) {
    if (height == 0) return labels[static_cast<std::size_t>(v)];
    std::uint64_t ranks[16];
    std::size_t n = 0;
    for (int w : tb.adjacency[static_cast<std::size_t>(v)]) {
        if (w != from) ranks[n++] = local_descriptor(space, tb, labels, w, v, height - 1);
    }
    return space.descriptor_rank(height, labels[static_cast<std::size_t>(v)], std::span(ranks, n));
}

// Canonical rank of the ball of radius space.radius() around vertex v of the
// truncated ball; the ball must lie inside the truncation.
std::uint64_t local_ball_rank(const BallSpace& space, const TruncatedBall& tb, std::span<const Symbol> labels, int v) {
    if (space.radius() == 0) return labels[static_cast<std::size_t>(v)];
    std::uint64_t ranks[16];
    std::size_t n = 0;
    for (int w : tb.adjacency[static_cast<std::size_t>(v)]) {
        ranks[n++] = local_descriptor(space, tb, labels, w, v, space.radius() - 1);
    }
    return space.ball_rank(labels[static_cast<std::size_t>(v)], std::span(ranks, n));
}

void realize(const Shape& node, const TruncatedBall& tb, int v, int from, std::vector<Symbol>& labels) {
    labels[static_cast<std::size_t>(v)] = node.symbol;
    std::size_t next = 0;
    for (int w : tb.adjacency[static_cast<std::size_t>(v)]) {
        if (w == from) continue;
        if (next < node.children.size()) realize(node.children[next], tb, w, v, labels);
        ++next;
    }
}

Shape truncate(const Shape& node, int height) {
    Shape out{node.symbol, {}};
    if (height > 0) {
        for (const auto& c : node.children) out.children.push_back(truncate(c, height - 1));
    }
    return out;
}

// Extends a shape of height `have` with zero labels down to height `want`.
Shape pad(const Shape& node, int have, int want, int k, bool center) {
    Shape out{node.symbol, {}};
    if (want == 0) return out;
    const int arity = center ? k : k - 1;
    if (have > 0) {
        for (const auto& c : node.children) out.children.push_back(pad(c, have - 1, want - 1, k, false));
    } else {
        for (int i = 0; i < arity; ++i) out.children.push_back(pad(Shape{}, 0, want - 1, k, false));
    }
    return out;
}

// AHU string key with the labels at one set of depths blanked out. Children
// keys are sorted as strings, independent of the rank order.
std::string blanked_key(const Shape& node, int depth, const std::function<bool(int)>& blank) {
    std::string key = blank(depth) ? std::string("*") : std::to_string(node.symbol);
    if (node.children.empty()) return key;
    std::vector<std::string> parts;
    parts.reserve(node.children.size());
    for (const auto& c : node.children) parts.push_back(blanked_key(c, depth + 1, blank));
    std::sort(parts.begin(), parts.end());
    key += '(';
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) key += ',';
        key += parts[i];
    }
    key += ')';
    return key;
}

bool factors_through(const Rule& rule, const std::vector<Shape>& shapes, const std::function<bool(int)>& blank) {
    std::unordered_map<std::string, Symbol> seen;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        auto [it, inserted] = seen.emplace(blanked_key(shapes[i], 0, blank), rule.table()[i]);
        if (!inserted && it->second != rule.table()[i]) return false;
    }
    return true;
}

}  // namespace

Rule::Rule(TreeParams params, Alphabet alphabet, int radius, std::vector<Symbol> table, const Limits& limits)
    : space_(params, alphabet, radius, limits), table_(std::move(table)) {
    if (table_.size() != space_.size()) {
        throw PreconditionError("rule table has " + std::to_string(table_.size()) + " entries, expected " +
                                std::to_string(space_.size()));
    }
    for (Symbol s : table_) {
        if (!alphabet.contains(s)) throw PreconditionError("rule output " + std::to_string(s) + " outside the alphabet");
    }
}

Rule Rule::from_index(TreeParams params, Alphabet alphabet, int radius, std::uint64_t index, const Limits& limits) {
    BallSpace space(params, alphabet, radius, limits);
    const auto family = checked_pow(static_cast<std::uint64_t>(alphabet.size), space.size());
    if (family && index >= *family) {
        throw PreconditionError("rule index " + std::to_string(index) + " out of range for a family of " +
                                std::to_string(*family) + " rules");
    }
    std::vector<Symbol> table(static_cast<std::size_t>(space.size()), 0);
    const auto base = static_cast<std::uint64_t>(alphabet.size);
    for (auto& entry : table) {
        if (index == 0 || base == 1) break;
        entry = static_cast<Symbol>(index % base);
        index /= base;
    }
    return Rule(params, alphabet, radius, std::move(table), limits);
}

Rule Rule::from_function(TreeParams params, Alphabet alphabet, int radius,
                         const std::function<Symbol(const Shape&)>& fn, const Limits& limits) {
    BallSpace space(params, alphabet, radius, limits);
    std::vector<Symbol> table;
    table.reserve(static_cast<std::size_t>(space.size()));
    for (std::uint64_t i = 0; i < space.size(); ++i) table.push_back(fn(space.unrank(i)));
    return Rule(params, alphabet, radius, std::move(table), limits);
}

std::optional<std::uint64_t> Rule::index() const {
    const auto base = static_cast<u128>(alphabet().size);
    u128 value = 0;
    for (std::size_t i = table_.size(); i-- > 0;) {
        value = value * base + table_[i];
        if (value > static_cast<u128>(~std::uint64_t{0})) return std::nullopt;
    }
    return static_cast<std::uint64_t>(value);
}

std::string Rule::index_string() const {
    // Little-endian base-10^9 limbs.
    std::vector<std::uint32_t> limbs{0};
    const auto base = static_cast<std::uint64_t>(alphabet().size);
    for (std::size_t i = table_.size(); i-- > 0;) {
        std::uint64_t carry = table_[i];
        for (auto& limb : limbs) {
            const std::uint64_t v = limb * base + carry;
            limb = static_cast<std::uint32_t>(v % 1'000'000'000);
            carry = v / 1'000'000'000;
        }
        if (carry) limbs.push_back(static_cast<std::uint32_t>(carry));
    }
    std::string out = std::to_string(limbs.back());
    for (std::size_t i = limbs.size() - 1; i-- > 0;) {
        const std::string part = std::to_string(limbs[i]);
        out += std::string(9 - part.size(), '0') + part;
    }
    return out;
}

std::string Rule::id() const {
    return "k" + std::to_string(params().k) + "-a" + std::to_string(alphabet().size) + "-r" + std::to_string(radius()) +
           "-#" + index_string();
}

Rule constant_rule(TreeParams params, Alphabet alphabet, int radius, Symbol value) {
    BallSpace space(params, alphabet, radius);
    return Rule(params, alphabet, radius, std::vector<Symbol>(static_cast<std::size_t>(space.size()), value));
}

Rule identity_rule(TreeParams params, Alphabet alphabet, int radius) {
    return Rule::from_function(params, alphabet, radius, [](const Shape& s) { return s.symbol; });
}

Rule or_rule(TreeParams params, Alphabet alphabet, int radius) {
    std::function<bool(const Shape&)> any = [&any](const Shape& s) {
        return s.symbol != 0 || std::any_of(s.children.begin(), s.children.end(), any);
    };
    return Rule::from_function(params, alphabet, radius, [&any](const Shape& s) { return any(s) ? Symbol{1} : Symbol{0}; });
}

Symbol evaluate(const Rule& rule, const Labeling& labels, const Vertex& center) {
    return rule.output(canonicalize(rule.space(), labels, center).index);
}

Rule compose(const Rule& f, const Rule& g, const Limits& limits) {
    if (!(f.params() == g.params()) || !(f.alphabet() == g.alphabet())) {
        throw PreconditionError("compose needs rules over the same tree and alphabet");
    }
    const int radius = f.radius() + g.radius();
    const BallSpace space(f.params(), f.alphabet(), radius, limits);
    const TruncatedBall tb(f.params(), radius);
    const std::size_t inner = tb.prefix_size(f.radius());

    std::vector<Symbol> table;
    table.reserve(static_cast<std::size_t>(space.size()));
    std::vector<Symbol> labels(tb.size(), 0);
    std::vector<Symbol> middle(tb.size(), 0);
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        realize(space.unrank(i), tb, 0, -1, labels);
        for (std::size_t v = 0; v < inner; ++v) {
            middle[v] = g.output(local_ball_rank(g.space(), tb, labels, static_cast<int>(v)));
        }
        table.push_back(f.output(local_ball_rank(f.space(), tb, middle, 0)));
    }
    return Rule(f.params(), f.alphabet(), radius, std::move(table), limits);
}

Rule lift_radius(const Rule& rule, int radius, const Limits& limits) {
    if (radius < rule.radius()) throw PreconditionError("lift_radius cannot shrink a rule");
    const BallSpace space(rule.params(), rule.alphabet(), radius, limits);
    std::vector<Symbol> table;
    table.reserve(static_cast<std::size_t>(space.size()));
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        table.push_back(rule.output(rule.space().rank(truncate(space.unrank(i), rule.radius()))));
    }
    return Rule(rule.params(), rule.alphabet(), radius, std::move(table), limits);
}

Rule restrict_radius(const Rule& rule, int radius, const Limits& limits) {
    if (radius > rule.radius()) throw PreconditionError("restrict_radius cannot grow a rule");
    const BallSpace space(rule.params(), rule.alphabet(), radius, limits);
    std::vector<Symbol> table;
    table.reserve(static_cast<std::size_t>(space.size()));
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        const Shape padded = pad(space.unrank(i), radius, rule.radius(), rule.params().k, true);
        table.push_back(rule.output(rule.space().rank(padded)));
    }
    Rule reduced(rule.params(), rule.alphabet(), radius, std::move(table), limits);
    for (std::uint64_t i = 0; i < rule.space().size(); ++i) {
        const auto small = space.rank(truncate(rule.space().unrank(i), radius));
        if (reduced.output(small) != rule.output(i)) {
            throw PreconditionError("rule depends on labels beyond radius " + std::to_string(radius));
        }
    }
    return reduced;
}

NeighborhoodReport minimal_neighborhood(const Rule& rule) {
    std::vector<Shape> shapes;
    shapes.reserve(static_cast<std::size_t>(rule.space().size()));
    for (std::uint64_t i = 0; i < rule.space().size(); ++i) shapes.push_back(rule.space().unrank(i));

    NeighborhoodReport report;
    for (int s = 0; s <= rule.radius(); ++s) {
        report.shell_dependent.push_back(!factors_through(rule, shapes, [s](int d) { return d == s; }));
    }
    report.effective_radius = rule.radius();
    for (int r = 0; r < rule.radius(); ++r) {
        if (factors_through(rule, shapes, [r](int d) { return d > r; })) {
            report.effective_radius = r;
            break;
        }
    }
    return report;
}

RuleEnumeration::RuleEnumeration(TreeParams params, Alphabet alphabet, int radius, const Limits& limits,
                                 std::optional<std::pair<std::uint64_t, std::uint64_t>> range)
    : space_(params, alphabet, radius, limits), limits_(limits) {
    family_size_ = checked_pow(static_cast<std::uint64_t>(alphabet.size), space_.size());
    if (range) {
        begin_ = range->first;
        end_ = range->second;
        if (begin_ > end_) throw PreconditionError("rule index range is reversed");
        if (family_size_ && end_ > *family_size_) {
            throw PreconditionError("rule index range ends past the family size " + std::to_string(*family_size_));
        }
    } else {
        if (!family_size_ || *family_size_ > limits.max_rules) {
            throw CapacityError("rule family for k=" + std::to_string(params.k) + ", |A|=" +
                                std::to_string(alphabet.size) + ", r=" + std::to_string(radius) +
                                " exceeds the cap of " + std::to_string(limits.max_rules) +
                                " rules; pass an index range to shard it");
        }
        end_ = *family_size_;
    }
}

Rule RuleEnumeration::at(std::uint64_t index) const {
    return Rule::from_index(space_.params(), space_.alphabet(), space_.radius(), index, limits_);
}

}  // namespace treeca
