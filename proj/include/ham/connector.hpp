#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ham/config.hpp"
#include "ham/digraph.hpp"
#include "ham/graph.hpp"
#include "ham/pair_list.hpp"
#include "ham/vertex_set.hpp"

namespace ham::connector {

using Rng = std::mt19937_64;

// Random auxiliary digraph over a pair collection: one node per pair (standing
// on its red vertex) plus the in-scope plain vertices. Arcs enter pair nodes
// only: u -> i when u's G-vertex is adjacent to the blue vertex of pair i.
struct AuxDigraph {
    Digraph h;
    PairList pairs;
    std::vector<int> red, blue;    // per pair
    std::vector<int> gvert;        // aux index -> G-vertex it stands on
    std::vector<int> pair_of;      // aux index -> pair index or -1
    std::vector<int> aux_of;       // G-vertex -> aux index or -1
    uint64_t seed = 0;
    int n_pairs = 0;

    int n_aux() const { return h.n; }
};

AuxDigraph build_aux(const Graph& g, const PairList& m,
                     const VertexSet* scope, Rng& rng);

// DFS-based long directed path: the returned vertex sequence is always a
// valid directed path; under the (k,k)-edge hypothesis its length is at
// least n_H - 2k + 1 vertices.
std::vector<int> dfs_long_path(const Digraph& h, int k);

struct AltPath {
    std::vector<int> vertices;                      // G-vertices in order
    std::vector<int> pairs_used;                    // pair indices in order
    std::vector<std::pair<int, int>> virtual_edges; // pair edges absent from G
};

// Lifts a directed path of pair nodes through the observation that arcs
// encode red->blue adjacencies.
AltPath lift_pair_path(const AuxDigraph& aux, const std::vector<int>& aux_path);

// Checks the alternating form: consecutive vertices joined by a G-edge or by
// a consumed pair, no pair used twice, no vertex reused, and no two
// consecutive non-pair edges straddling a pair vertex boundary violation.
bool validate_alt_path(const Graph& g, const PairList& m, const AltPath& p,
                       std::string* why = nullptr);

// M-alternating path through nearly all pairs (DFS on the pair nodes).
AltPath alt_path_spanning(const Graph& g, const PairList& m, int k, Rng& rng);

// Partial forest embedding with the expansion invariant that admits both leaf
// extension and leaf removal. Vertices of F are identified with their images.
struct GoodEmbedding {
    const Digraph* h = nullptr;
    int s = 0;      // subset-size bound in the invariant
    int d_cap = 3;  // degree budget D
    std::vector<char> used;
    std::vector<int> parent;  // -1 root, -2 not embedded
    std::vector<int> deg_f;
    std::vector<std::vector<int>> children;
    int size = 0;

    void init(const Digraph& hh, int s_, int d_);
    void add_root(int v);
};

// Eq-style goodness: sum over X of the demands versus |Γ+(X) \ image|.
// Exhaustive below cfg.exhaustive_good_limit aux vertices, else singleton +
// sampled subsets (a debug-grade full check at small scale is what the tests
// rely on).
bool goodness_check(const GoodEmbedding& emb, const Params& cfg, Rng& rng,
                    bool force_exhaustive = false);

// Adds one out-leaf under parent_aux choosing the smallest-index image that
// keeps the embedding good. Returns the new aux vertex or -1.
int fp_extend(GoodEmbedding& emb, int parent_aux, const Params& cfg, Rng& rng);

// Removes a leaf of in-degree 1 / out-degree 0; throws on non-leaves.
void fp_rollback(GoodEmbedding& emb, int leaf_aux);

struct ConnectResult {
    bool ok = false;
    std::vector<AltPath> paths;
    int failed_pair = -1;
    std::string note;
    uint64_t coloring_seed = 0;
    int max_live_forest = 0;
};

// Vertex-disjoint alternating connections for every terminal pair, grown as
// binary out-trees in the aux digraph and rolled back to the used routes.
// Terminal vertices may repeat across pairs (cyclic weaving needs that); the
// trees then share a root.
ConnectResult connect_pairs(const Graph& g, const PairList& m,
                            const std::vector<std::pair<int, int>>& terminals,
                            const Params& cfg, Rng& rng);

}  // namespace ham::connector
