#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ham/config.hpp"
#include "ham/digraph.hpp"
#include "ham/graph.hpp"
#include "ham/vertex_set.hpp"

namespace ham::forest {

using Rng = std::mt19937_64;

struct LinearForest {
    std::vector<std::vector<int>> paths;

    int path_count() const { return int(paths.size()); }
    VertexSet cover(int n) const {
        VertexSet s(n);
        for (auto& p : paths)
            for (int v : p) s.insert(v);
        return s;
    }
    std::string to_json() const;
};

bool validate_linear_forest(const Graph& g, const LinearForest& f,
                            std::string* why = nullptr);

struct CoverResult {
    bool ok = false;
    LinearForest forest;
    std::string note;
    std::vector<int> hall_witness;  // x-vertices of a failed matching side
};

// Covers X by vertex-disjoint paths with endpoints in Y\X and all inner
// vertices in X: ordering, doubled bipartite matching, binary-tree assembly,
// root-path peeling.
CoverResult cover_bad_set(const Graph& g, const VertexSet& x, const VertexSet& y,
                          double delta);

struct ContractedDigraph {
    Digraph h;
    int n_z = 0;                           // z nodes occupy aux [0, n_z)
    std::vector<std::vector<int>> z_path;  // oriented: front = entry, back = exit
    std::vector<int> gvert;                // aux -> G vertex (-1 for z nodes)
    std::vector<int> aux_of;               // G vertex -> aux or -1 (inner X: -1)
    uint64_t seed = 0;
};

// Contracts each covering path to a z node with a random head/tail choice and
// orients the rest uniformly.
ContractedDigraph contract_and_orient(const Graph& g, const VertexSet& y,
                                      const LinearForest& cover, Rng& rng);

struct RegularResult {
    bool ok = false;
    Digraph r;
    std::vector<std::vector<int>> factors;  // per round: out-vertex -> in-vertex
    int failed_round = -1;
    std::vector<int> hall_witness;
    std::string note;
};

// r rounds of perfect bipartite matching (out copies vs in copies) produce an
// r-regular spanning subdigraph with no repeated arc.
RegularResult regular_subdigraph(const Digraph& h, int r, uint64_t seed);

// One spanning linear forest with few paths: open each cycle of the first
// 1-factor, then stitch path ends with arcs of the remaining factors.
std::vector<std::vector<int>> few_path_forest(const Digraph& r_regular,
                                              const Params& cfg, uint64_t seed);

struct ForestResult {
    bool ok = false;
    LinearForest forest;
    std::string stage;
    std::string note;
    int singleton_fallbacks = 0;
};

// Full pipeline: cover X, contract, extract a regular subdigraph, decompose,
// stitch, and expand the contractions back.
ForestResult spanning_forest_good_endpoints(const Graph& g, const VertexSet& x,
                                            const VertexSet& y, double delta,
                                            const Params& cfg, Rng& rng);

}  // namespace ham::forest
