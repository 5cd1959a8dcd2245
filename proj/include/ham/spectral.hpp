#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ham/config.hpp"
#include "ham/graph.hpp"
#include "ham/pair_list.hpp"
#include "ham/vertex_set.hpp"

namespace ham::spectral {

struct SpectralCertificate {
    int n = 0;
    int d = 0;
    double lambda = 0.0;  // max |mu| over non-principal eigenvalues
    double tolerance = 0.0;
    std::string method = "exact-dense";  // or "iterative-deflated"
    bool converged = true;

    double lam_n_over_d() const { return d > 0 ? lambda * n / d : double(n); }
    std::string to_json() const;
    static SpectralCertificate from_json(const std::string& text);
};

// Throws on non-regular input. Dense eigensolve when n <= cfg.exact_threshold,
// else Lanczos on the adjacency operator restricted to the complement of the
// all-ones vector (valid deflation for regular graphs). force_method:
// "" auto, "exact-dense", "iterative-deflated".
SpectralCertificate estimate_lambda(const Graph& g, double tol,
                                    const Params& cfg = {},
                                    const std::string& force_method = "");

struct MixingReport {
    int trials = 0;
    int checked[4] = {0, 0, 0, 0};
    int violations[4] = {0, 0, 0, 0};
    std::vector<std::string> notes;
    bool pass() const {
        return violations[0] + violations[1] + violations[2] + violations[3] == 0;
    }
    std::string to_json() const;
};

// Samples set pairs and checks the four mixing consequences of the
// certificate. A violation falsifies the certificate, not the bound.
MixingReport mixing_audit(const Graph& g, const SpectralCertificate& cert,
                          int trials, uint64_t seed, double extra_tol = 1e-9);

struct CleanResult {
    VertexSet kept;
    int deletions = 0;
    bool ok = true;
    std::string note;
};

// Iteratively deletes vertices with degree < d|S|/4n inside the current set
// (lowest index first). |S| in the threshold is the original size.
CleanResult clean_subset(const Graph& g, const VertexSet& s,
                         const SpectralCertificate& cert, const Params& cfg = {});

struct PairCleanResult {
    PairList kept;
    int removed = 0;
    bool ok = true;
    std::string note;
};

// Same process over whole pairs: a pair goes when either endpoint drops below
// the threshold inside the current union.
PairCleanResult pair_clean(const Graph& g, const PairList& pairs,
                           const SpectralCertificate& cert, const Params& cfg = {});

struct ExpansionCheck {
    bool precond_ok = true;
    std::string precond_msg;
    bool pass = false;
    long long observed = 0;
    double required = 0;
};

// |N(A) ∩ B| >= min(delta^2 |A| / 8 lambda^2, delta n / 10 d), under the
// stated preconditions. Failure with valid preconditions falsifies the
// certificate.
ExpansionCheck expansion_check(const Graph& g, const VertexSet& a,
                               const VertexSet& b, double delta,
                               const SpectralCertificate& cert);

}  // namespace ham::spectral
