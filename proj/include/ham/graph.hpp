#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ham/vertex_set.hpp"

namespace ham {

// Immutable simple undirected graph. Neighbor lists are sorted, which makes
// edge queries O(log d) and set intersections linear.
class Graph {
public:
    Graph() = default;

    // Edges may contain duplicates or (u,v)/(v,u) twins; they are collapsed.
    // Self-loops are rejected.
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    long long m() const { return m_; }
    int degree(int v) const { return int(offsets_[v + 1] - offsets_[v]); }
    std::optional<int> regular_degree() const { return regular_degree_; }

    std::span<const int> neighbors(int v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }

    bool has_edge(int u, int v) const;

    std::vector<std::pair<int, int>> edge_list() const;

    int degree_into(int v, const VertexSet& s) const;

    VertexSet neighborhood(const VertexSet& s) const;          // Γ(S)
    VertexSet external_neighborhood(const VertexSet& s) const; // N(S) = Γ(S)\S

    bool connected() const;

    // Induced subgraph on `s`; `map_out` receives new-index -> old vertex.
    Graph induced(const VertexSet& s, std::vector<int>* map_out = nullptr) const;

    // Ordered-pair edge count: every (a,b) with a in A, b in B, ab an edge.
    // Edges inside A∩B are hit once per orientation. With single_count, each
    // unordered edge meeting both sides counts once.
    long long edges_between(const VertexSet& a, const VertexSet& b,
                            bool single_count = false) const;

    long long edges_inside(const VertexSet& a) const;  // e(A), unordered

    // "n m" header followed by one "u v" line per edge, 0-based.
    static Graph read_edge_list(std::istream& in);
    void write_edge_list(std::ostream& out) const;
    static Graph load_file(const std::string& path);  // .json or edge list
    void save_file(const std::string& path) const;

    std::string to_json() const;
    static Graph from_json(const std::string& text);

private:
    int n_ = 0;
    long long m_ = 0;
    std::vector<int> adj_;
    std::vector<size_t> offsets_;
    std::optional<int> regular_degree_;
};

}  // namespace ham
