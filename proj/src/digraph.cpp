#include "ham/digraph.hpp"

#include <algorithm>

namespace ham {

void Digraph::sort_adjacency() {
    for (auto& l : out) std::sort(l.begin(), l.end());
    for (auto& l : in) std::sort(l.begin(), l.end());
}

bool Digraph::has_arc(int u, int v) const {
    const auto& l = out[u];
    return std::binary_search(l.begin(), l.end(), v);
}

}  // namespace ham
