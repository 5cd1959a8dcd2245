#pragma once

#include <vector>

namespace ham {

struct Digraph {
    int n = 0;
    std::vector<std::vector<int>> out, in;

    Digraph() = default;
    explicit Digraph(int n_) : n(n_), out(n_), in(n_) {}

    void add_arc(int u, int v) {
        out[u].push_back(v);
        in[v].push_back(u);
    }

    long long arc_count() const {
        long long m = 0;
        for (auto& l : out) m += (long long)l.size();
        return m;
    }

    void sort_adjacency();
    bool has_arc(int u, int v) const;  // requires sorted adjacency
};

}  // namespace ham
