#pragma once

#include <initializer_list>
#include <random>
#include <string>

#include "treeca/topology.hpp"

namespace testing {

inline treeca::Vertex V(const std::string& text) { return treeca::Vertex::parse(text); }

inline treeca::VertexSet Vs(std::initializer_list<const char*> words) {
    treeca::VertexSet out;
    for (const char* w : words) out.insert(treeca::Vertex::parse(w));
    return out;
}

// Uniform random valid address of length <= max_depth.
inline treeca::Vertex random_vertex(int k, int max_depth, std::mt19937_64& rng) {
    const int len = static_cast<int>(rng() % static_cast<unsigned>(max_depth + 1));
    std::string w;
    for (int i = 0; i < len; ++i) {
        const int digits = i == 0 ? k : k - 1;
        w += static_cast<char>('0' + static_cast<int>(rng() % static_cast<unsigned>(digits)));
    }
    return treeca::Vertex(w);
}

}  // namespace testing
