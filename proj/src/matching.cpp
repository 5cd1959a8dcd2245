#include "ham/matching.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <random>

namespace ham {

MatchingResult max_bipartite_matching(const std::vector<std::vector<int>>& adj_in,
                                      int n_right, uint64_t shuffle_seed) {
    int nl = int(adj_in.size());
    std::vector<std::vector<int>> adj = adj_in;
    if (shuffle_seed) {
        std::mt19937_64 rng(shuffle_seed);
        for (auto& l : adj) std::shuffle(l.begin(), l.end(), rng);
    }
    const int INF = std::numeric_limits<int>::max();
    MatchingResult res;
    res.match_left.assign(nl, -1);
    res.match_right.assign(n_right, -1);
    std::vector<int> dist(nl);

    auto bfs = [&]() {
        std::queue<int> q;
        bool found = false;
        for (int l = 0; l < nl; ++l) {
            if (res.match_left[l] < 0) {
                dist[l] = 0;
                q.push(l);
            } else {
                dist[l] = INF;
            }
        }
        while (!q.empty()) {
            int l = q.front();
            q.pop();
            for (int r : adj[l]) {
                int l2 = res.match_right[r];
                if (l2 < 0) {
                    found = true;
                } else if (dist[l2] == INF) {
                    dist[l2] = dist[l] + 1;
                    q.push(l2);
                }
            }
        }
        return found;
    };

    std::function<bool(int)> dfs = [&](int l) {
        for (int r : adj[l]) {
            int l2 = res.match_right[r];
            if (l2 < 0 || (dist[l2] == dist[l] + 1 && dfs(l2))) {
                res.match_left[l] = r;
                res.match_right[r] = l;
                return true;
            }
        }
        dist[l] = INF;
        return false;
    };

    while (bfs())
        for (int l = 0; l < nl; ++l)
            if (res.match_left[l] < 0 && dfs(l)) ++res.size;

    if (res.size < nl) {
        // Alternating reachability from any unmatched left vertex yields a
        // Hall violator: S = reachable left side, N(S) = reachable right side
        // (all matched back into S), so |N(S)| = |S| - #unmatched_in_S < |S|.
        std::vector<char> seen_l(nl, 0), seen_r(n_right, 0);
        std::queue<int> q;
        for (int l = 0; l < nl; ++l)
            if (res.match_left[l] < 0) {
                seen_l[l] = 1;
                q.push(l);
            }
        while (!q.empty()) {
            int l = q.front();
            q.pop();
            for (int r : adj[l]) {
                if (seen_r[r]) continue;
                seen_r[r] = 1;
                int l2 = res.match_right[r];
                if (l2 >= 0 && !seen_l[l2]) {
                    seen_l[l2] = 1;
                    q.push(l2);
                }
            }
        }
        for (int l = 0; l < nl; ++l)
            if (seen_l[l]) res.hall_violator.push_back(l);
    }
    return res;
}

}  // namespace ham
