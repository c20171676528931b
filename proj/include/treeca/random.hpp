#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace treeca {

// Uniform integer in [0, n) by rejection sampling. The standard
// distributions are implementation-defined; census output must not depend on
// the library vendor.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % n;
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[static_cast<std::size_t>(uniform_below(rng, i))]);
    }
}

}  // namespace treeca
