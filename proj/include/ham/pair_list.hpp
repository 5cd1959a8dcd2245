#pragma once

#include <utility>
#include <vector>

#include "ham/vertex_set.hpp"

namespace ham {

// Flexible pairs {x,y}; x == y encodes a single-vertex pair. Consumers
// require vertex-disjointness across pairs.
using PairList = std::vector<std::pair<int, int>>;

inline VertexSet pair_vertices(int n, const PairList& m) {
    VertexSet s(n);
    for (auto [x, y] : m) {
        s.insert(x);
        s.insert(y);
    }
    return s;
}

inline bool pairs_disjoint(const PairList& m) {
    std::vector<int> vs;
    for (auto [x, y] : m) {
        vs.push_back(x);
        if (y != x) vs.push_back(y);
    }
    std::sort(vs.begin(), vs.end());
    return std::adjacent_find(vs.begin(), vs.end()) == vs.end();
}

}  // namespace ham
