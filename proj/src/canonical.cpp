#include <algorithm>
#include <charconv>

#include "treeca/errors.hpp"
#include "treeca/rules.hpp"

namespace treeca {

namespace {

using u128 = unsigned __int128;

constexpr u128 kU64Max = static_cast<u128>(~std::uint64_t{0});

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    const u128 p = static_cast<u128>(a) * b;
    if (p > kU64Max) throw CapacityError("canonical ball count overflows 64 bits");
    return static_cast<std::uint64_t>(p);
}

// Rank of a non-decreasing tuple among all such tuples of the same length over
// 0..n-1, in lexicographic order. Values v in [prev, c) at a position with j
// slots remaining contribute sum_v multichoose(n - v, j), which telescopes to
// C(n - prev + j, j + 1) - C(n - c + j, j + 1).
std::uint64_t multiset_rank(std::span<const std::uint64_t> sorted, std::uint64_t n) {
    const std::uint64_t m = sorted.size();
    std::uint64_t rank = 0;
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
        const std::uint64_t c = sorted[i];
        if (c > prev) {
            const std::uint64_t j = m - 1 - i;
            rank += binomial(n - prev + j, j + 1) - binomial(n - c + j, j + 1);
        }
        prev = c;
    }
    return rank;
}

std::vector<std::uint64_t> multiset_unrank(std::uint64_t rank, std::uint64_t n, std::uint64_t m) {
    std::vector<std::uint64_t> out;
    out.reserve(m);
    std::uint64_t v = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
        const std::uint64_t j = m - 1 - i;
        for (;; ++v) {
            const std::uint64_t count = multichoose(n - v, j);
            if (rank < count) break;
            rank -= count;
        }
        out.push_back(v);
    }
    return out;
}

class ShapeParser {
public:
    explicit ShapeParser(std::string_view text) : text_(text) {}

    Shape parse() {
        Shape s = node();
        if (pos_ != text_.size()) fail("trailing characters");
        return s;
    }

private:
    Shape node() {
        Shape s;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, s.symbol);
        if (ec != std::errc{} || ptr == begin) fail("expected a symbol");
        pos_ += static_cast<std::size_t>(ptr - begin);
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ++pos_;
            s.children.push_back(node());
            while (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                s.children.push_back(node());
            }
            if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
            ++pos_;
        }
        return s;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("canonical ball '" + std::string(text_) + "': " + what + " at offset " + std::to_string(pos_));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void append_shape(std::string& out, const Shape& s) {
    out += std::to_string(s.symbol);
    if (s.children.empty()) return;
    out += '(';
    for (std::size_t i = 0; i < s.children.size(); ++i) {
        if (i) out += ',';
        append_shape(out, s.children[i]);
    }
    out += ')';
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t j) {
    if (j > n) return 0;
    j = std::min(j, n - j);
    u128 result = 1;
    for (std::uint64_t i = 0; i < j; ++i) {
        result = result * (n - i) / (i + 1);
        if (result > kU64Max) throw CapacityError("binomial coefficient overflows 64 bits");
    }
    return static_cast<std::uint64_t>(result);
}

std::uint64_t multichoose(std::uint64_t n, std::uint64_t m) {
    if (m == 0) return 1;
    if (n == 0) return 0;
    return binomial(n + m - 1, m);
}

void Alphabet::validate() const {
    if (size < 1) throw PreconditionError("alphabet size must be at least 1");
}

BallSpace::BallSpace(TreeParams params, Alphabet alphabet, int radius, const Limits& limits)
    : params_(params), alphabet_(alphabet), radius_(radius) {
    params_.validate();
    alphabet_.validate();
    if (radius_ < 0) throw PreconditionError("ball radius must be non-negative");
    const auto a = static_cast<std::uint64_t>(alphabet_.size);
    const auto branching = static_cast<std::uint64_t>(params_.k - 1);
    descriptor_counts_.push_back(a);
    for (int h = 1; h < radius_; ++h) {
        descriptor_counts_.push_back(checked_mul(a, multichoose(descriptor_counts_.back(), branching)));
    }
    size_ = radius_ == 0 ? a
                         : checked_mul(a, multichoose(descriptor_counts_.back(), static_cast<std::uint64_t>(params_.k)));
    if (size_ > limits.max_canonical_balls) {
        throw CapacityError("canonical ball space for k=" + std::to_string(params_.k) + ", |A|=" +
                            std::to_string(alphabet_.size) + ", r=" + std::to_string(radius_) + " has " +
                            std::to_string(size_) + " elements, above the cap of " +
                            std::to_string(limits.max_canonical_balls));
    }
}

std::uint64_t BallSpace::descriptor_rank_impl(int height, Symbol symbol, std::span<std::uint64_t> child_ranks) const {
    if (height == 0) return symbol;
    std::sort(child_ranks.begin(), child_ranks.end());
    const std::uint64_t n = descriptor_counts_[static_cast<std::size_t>(height - 1)];
    return symbol * multichoose(n, child_ranks.size()) + multiset_rank(child_ranks, n);
}

std::uint64_t BallSpace::descriptor_rank(int height, Symbol symbol, std::span<std::uint64_t> child_ranks) const {
    return descriptor_rank_impl(height, symbol, child_ranks);
}

std::uint64_t BallSpace::ball_rank(Symbol center, std::span<std::uint64_t> child_ranks) const {
    // The center is a descriptor of height `radius` with k children instead of k-1.
    return descriptor_rank_impl(radius_, center, child_ranks);
}

void BallSpace::check_shape(const Shape& node, int height, bool center) const {
    if (!alphabet_.contains(node.symbol)) {
        throw ParseError("symbol " + std::to_string(node.symbol) + " outside alphabet of size " +
                         std::to_string(alphabet_.size));
    }
    const std::size_t expected = height == 0 ? 0 : static_cast<std::size_t>(center ? params_.k : params_.k - 1);
    if (node.children.size() != expected) {
        throw ParseError("ball shape mismatch: expected " + std::to_string(expected) + " children, found " +
                         std::to_string(node.children.size()));
    }
    for (const auto& c : node.children) check_shape(c, height - 1, false);
}

std::uint64_t BallSpace::rank_descriptor(const Shape& node, int height) const {
    std::vector<std::uint64_t> ranks;
    ranks.reserve(node.children.size());
    for (const auto& c : node.children) ranks.push_back(rank_descriptor(c, height - 1));
    return descriptor_rank_impl(height, node.symbol, ranks);
}

std::uint64_t BallSpace::rank(const Shape& ball) const {
    check_shape(ball, radius_, true);
    return rank_descriptor(ball, radius_);
}

Shape BallSpace::unrank_descriptor(std::uint64_t index, int height) const {
    Shape s;
    if (height == 0) {
        s.symbol = static_cast<Symbol>(index);
        return s;
    }
    const std::uint64_t n = descriptor_counts_[static_cast<std::size_t>(height - 1)];
    const std::uint64_t m = (height == radius_) ? static_cast<std::uint64_t>(params_.k)
                                                : static_cast<std::uint64_t>(params_.k - 1);
    const std::uint64_t block = multichoose(n, m);
    s.symbol = static_cast<Symbol>(index / block);
    for (std::uint64_t c : multiset_unrank(index % block, n, m)) s.children.push_back(unrank_descriptor(c, height - 1));
    return s;
}

Shape BallSpace::unrank(std::uint64_t index) const {
    if (index >= size_) throw PreconditionError("canonical ball index out of range");
    return unrank_descriptor(index, radius_);
}

std::string BallSpace::to_string(std::uint64_t index) const {
    std::string out;
    append_shape(out, unrank(index));
    return out;
}

std::uint64_t BallSpace::parse(std::string_view text) const { return rank(ShapeParser(text).parse()); }

namespace {

std::uint64_t labeled_descriptor(const BallSpace& space, const Labeling& labels, const Vertex& v, const Vertex& from,
                                 int height) {
    auto it = labels.find(v);
    if (it == labels.end()) throw PreconditionError("labeling is not total: missing vertex '" + v.text() + "'");
    if (!space.alphabet().contains(it->second)) {
        throw PreconditionError("symbol " + std::to_string(it->second) + " outside the alphabet");
    }
    if (height == 0) return it->second;
    std::vector<std::uint64_t> ranks;
    for (const auto& w : neighbors_except(space.params(), v, from)) {
        ranks.push_back(labeled_descriptor(space, labels, w, v, height - 1));
    }
    return space.descriptor_rank(height, it->second, ranks);
}

}  // namespace

CanonicalBall canonicalize(const BallSpace& space, const Labeling& labels, const Vertex& center) {
    check_address(space.params(), center);
    auto it = labels.find(center);
    if (it == labels.end()) throw PreconditionError("labeling is not total: missing the center");
    if (!space.alphabet().contains(it->second)) {
        throw PreconditionError("symbol " + std::to_string(it->second) + " outside the alphabet");
    }
    if (space.radius() == 0) return {0, it->second};
    std::vector<std::uint64_t> ranks;
    for (const auto& w : neighbors(space.params(), center)) {
        ranks.push_back(labeled_descriptor(space, labels, w, center, space.radius() - 1));
    }
    return {space.radius(), space.ball_rank(it->second, ranks)};
}

CanonicalBall canonicalize(const TreeParams& params, const Alphabet& alphabet, int radius, const Labeling& labels,
                           const Vertex& center) {
    return canonicalize(BallSpace(params, alphabet, radius), labels, center);
}

std::vector<CanonicalBall> enumerate_canonical_balls(const TreeParams& params, const Alphabet& alphabet, int radius,
                                                     const Limits& limits) {
    const BallSpace space(params, alphabet, radius, limits);
    std::vector<CanonicalBall> out;
    out.reserve(static_cast<std::size_t>(space.size()));
    for (std::uint64_t i = 0; i < space.size(); ++i) out.push_back({radius, i});
    return out;
}

}  // namespace treeca
