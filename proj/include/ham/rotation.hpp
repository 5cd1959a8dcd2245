#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ham/config.hpp"
#include "ham/graph.hpp"
#include "ham/path.hpp"
#include "ham/spectral.hpp"
#include "ham/vertex_set.hpp"

namespace ham::rotation {

using Rng = std::mt19937_64;
using spectral::SpectralCertificate;

// One rotation step with the fixed endpoint at path index 0: pivot's edge to
// the far endpoint is used; (pivot, broken_succ) is the broken path edge and
// broken_succ becomes the new far endpoint.
struct RotationStep {
    int pivot;
    int broken_succ;
};
using RotationScript = std::vector<RotationStep>;

struct RotationOutcome {
    VertexSet endpoints;                    // reachable far endpoints (Z set)
    std::map<int, RotationScript> witness;  // endpoint -> steps from the start path
    int depth = 0;
    bool stalled = false;
    int target = 0;
    std::vector<int> level_sizes;           // |Z_i| per rotation depth
    std::string note;                       // hypothesis-check diagnostics
};

// Definition-level single rotation; the input path is not modified.
PathState rotate(const Graph& g, const PathState& p, int fixed, int pivot);

// Applies a witness script to a path oriented with `fixed` first. Verifies
// each step (pivot adjacent to current far endpoint; broken edge present);
// returns nullopt when the script does not fit the path.
std::optional<PathState> replay(const Graph& g, const PathState& p, int fixed,
                                const RotationScript& script);

struct ExpansionOptions {
    const VertexSet* restrict_to = nullptr;   // X: pivots in int_base(X), base-path edges broken
    const VertexSet* avoid = nullptr;         // never create these endpoints
    const VertexSet* damage_budget = nullptr; // Y of Lemma conclusion |dif ∩ Y| <= 3 log|Y|
    const PathState* hypothesis_base = nullptr;  // P when expanding P' (robust mode)
    double delta_hint = 0;                    // cleanliness of X, for the hypothesis check
    int target = 0;                           // 0 = auto
    int depth_cap = 0;                        // 0 = cfg default
    bool stop_in = false;                     // stop at first endpoint in stop_set
    const VertexSet* stop_set = nullptr;
};

// BFS over the endpoint space: Z_1 ⊆ Z_2 ⊆ ... by single rotations, pivots
// restricted when requested. Stalls are reported, not thrown.
RotationOutcome endpoint_expansion(const Graph& g, const PathState& p, int fixed,
                                   const ExpansionOptions& opt, const Params& cfg);

struct RotateIntoSet {
    bool ok = false;
    PathState path;
    int endpoint = -1;
    int rotations = 0;
    std::string note;
};

// Lands the moving endpoint in R with at most depth-cap rotations while
// damaging int(R) by at most 3 vertices.
RotateIntoSet rotate_into_set(const Graph& g, const PathState& p, int fixed,
                              const VertexSet& r, const Params& cfg);

struct CleanCollection {
    std::vector<std::pair<int, int>> intervals;  // surviving [lo,hi] path-index ranges
    VertexSet s;
    double delta = 0, gamma = 0;
    int k = 0, r = 0;
    int achieved = 0;
    bool ok = false;
};

// The three-rule deletion process over an oversampled interval partition.
CleanCollection clean_partition(const Graph& g, const PathState& p, int k,
                                double delta, double gamma, const Params& cfg);

// Re-assertion of the collection properties (also used as a structured
// failure detector inside the pipeline).
bool check_clean_collection(const Graph& g, const PathState& p,
                            const CleanCollection& c, std::string* why = nullptr);

struct ClosePathResult {
    bool ok = false;
    Cycle cycle;
    std::string stage;  // failing stage when !ok
};

// Lemma-style closing: rotate inside a_clean from the A-endpoint, pigeonhole
// endpoints into direction classes over the components of P[B], rotate inside
// b_clean, and splice through a crossing edge.
ClosePathResult close_path(const Graph& g, const PathState& p, const VertexSet& a,
                           const VertexSet& b, const VertexSet& a_clean,
                           const VertexSet& b_clean,
                           const SpectralCertificate& cert, const Params& cfg);

// Plain two-phase closure used as a fallback and at small scale: unrestricted
// expansion from both sides until a chord closes the vertex set of P.
ClosePathResult close_path_simple(const Graph& g, const PathState& p,
                                  const SpectralCertificate& cert,
                                  const Params& cfg, Rng& rng);

// Greedy single-step extension; see maximal_path for the fixpoint loop.
std::optional<PathState> extend_path(const Graph& g, const PathState& p);
PathState maximal_path(const Graph& g, PathState p);
PathState random_maximal_path(const Graph& g, Rng& rng);

struct StageTiming {
    std::string name;
    double ms = 0;
};

struct HamiltonResult {
    bool success = false;
    Cycle cycle;
    int longest = 0;       // best cycle length seen
    Cycle longest_cycle;
    std::vector<StageTiming> stages;
    std::string failure;
    int retries_used = 0;
};

HamiltonResult hamilton_rotation(const Graph& g, const SpectralCertificate& cert,
                                 const Params& cfg);

}  // namespace ham::rotation
