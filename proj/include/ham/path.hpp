#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ham/graph.hpp"
#include "ham/vertex_set.hpp"

namespace ham {

// Ordered sequence of distinct vertices. The current order is a list of
// directed segments over a fixed base array, so a rotation reverses a suffix
// by index arithmetic instead of moving vertices; normalize() rebuilds the
// base array. Host adjacency is not stored here: validity against a graph
// (and any declared virtual edges) is checked by is_valid_path.
class PathState {
public:
    PathState() = default;
    PathState(int host_n, std::vector<int> order);

    int length() const { return int(order_.size()); }
    int host_n() const { return int(pos_.size()); }
    bool contains(int v) const { return v >= 0 && v < host_n() && pos_[v] >= 0; }

    int vertex_at(int i) const;
    int index_of(int v) const;  // -1 if absent
    int front() const { return vertex_at(0); }
    int back() const { return vertex_at(length() - 1); }

    // Path-neighbors of v, position-agnostic; -1 slots for endpoints.
    std::pair<int, int> path_neighbors(int v) const;

    // P = (v_0..v_i, v_{l-1}, ..., v_{i+1}); the endpoint at index 0 stays.
    // pivot_index must satisfy 0 < pivot_index < length()-1.
    void rotate_prefix_fixed(int pivot_index);

    void reverse();
    void normalize();
    int seg_count() const { return int(segs_.size()); }
    std::vector<int> to_vector() const;

    void push_back(int v);
    void push_front(int v);
    void pop_back();
    void pop_front();

    VertexSet vertex_set() const;

    bool operator==(const PathState& o) const {
        return to_vector() == o.to_vector() || [&] {
            auto a = to_vector(), b = o.to_vector();
            std::reverse(b.begin(), b.end());
            return a == b;
        }();
    }

private:
    struct Seg {
        int lo, hi;  // inclusive base-index range
        bool rev;
        int cum;     // path index of the segment's first vertex
    };
    void recompute_cum();
    int seg_containing_path_index(int i) const;

    std::vector<int> order_;  // base sequence
    std::vector<int> pos_;    // host vertex -> base index, -1 absent
    std::vector<Seg> segs_;
};

struct Cycle {
    std::vector<int> order;
    int length() const { return int(order.size()); }
};

// Pairs usable as path edges even when absent from the host graph (the
// absorber builds paths in G ∪ F).
class VirtualEdges {
public:
    void add(int u, int v) {
        if (u > v) std::swap(u, v);
        s_.insert({u, v});
    }
    bool has(int u, int v) const {
        if (u > v) std::swap(u, v);
        return s_.count({u, v}) > 0;
    }
    size_t size() const { return s_.size(); }

private:
    std::set<std::pair<int, int>> s_;
};

// {u : N_P(u) != N_Q(u)} where N is the path-neighborhood. Throws on
// vertex-set mismatch.
VertexSet dif(const PathState& p, const PathState& q);

// {v_i in X : i interior, v_{i-1} and v_{i+1} in X}
VertexSet interior(const PathState& p, const VertexSet& x);

// Number of components of P[A].
int components_on(const PathState& p, const VertexSet& a);

bool is_valid_path(const Graph& g, const PathState& p,
                   const VirtualEdges* virt = nullptr);

enum class CycleVerdict { ok, empty, duplicate_vertex, not_spanning, non_edge };

CycleVerdict check_hamilton_cycle(const Graph& g, const Cycle& c);
inline bool verify_hamilton_cycle(const Graph& g, const Cycle& c) {
    return check_hamilton_cycle(g, c) == CycleVerdict::ok;
}
std::string to_string(CycleVerdict v);

}  // namespace ham
