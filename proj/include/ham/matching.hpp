#pragma once

#include <cstdint>
#include <vector>

namespace ham {

struct MatchingResult {
    std::vector<int> match_left;   // left index -> right index or -1
    std::vector<int> match_right;  // right index -> left index or -1
    int size = 0;
    // When the matching misses part of the left side: a Hall violator,
    // i.e. S ⊆ left with |N(S)| < |S|.
    std::vector<int> hall_violator;
};

// Hopcroft-Karp. adj[l] lists right-side neighbors of left vertex l.
// shuffle_seed != 0 randomizes the scan order (useful to diversify the
// produced matching across retries).
MatchingResult max_bipartite_matching(const std::vector<std::vector<int>>& adj,
                                      int n_right, uint64_t shuffle_seed = 0);

}  // namespace ham
