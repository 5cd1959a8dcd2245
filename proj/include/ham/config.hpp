#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace ham {

inline double log2d(double x) { return std::log2(std::max(x, 2.0)); }

// All tunable constants in one place. Comments give the values used in the
// source analysis; those are asymptotic and unusable verbatim at desk scale
// (n <= 1e4), so the effective thresholds below are capped against the actual
// instance. "log" is base 2 throughout.
struct Params {
    // --- rotation ---
    double delta_frac = 0.01;        // clean-collection degree target: d/100
    double k_log_mult = 30.0;        // interval count: 30 log n
    int k_override = 0;              // explicit k when nonzero
    double gamma = 0.0;              // 0 = auto (C/(log n)^{1/3}, desk-capped)
    int depth_cap = 0;               // 0 = ceil(log2 n)
    double unrestricted_target_frac = 0.01;  // endpoint target n/100
    int rotation_retries = 12;
    int dif_check_limit = 32;        // verify rotation damage hypothesis up to this |dif|
    int tiny_exact_n = 12;           // exact closure below this order
    double clean_oversample = 1.06;  // interval oversampling (1.01 at scale)
    double interval_fill = 0.99;     // |S ∩ Q_i| >= fill * |Q_i|

    // --- spectral ---
    int exact_threshold = 600;       // dense eigensolve below this n
    int lanczos_max_window = 220;
    int lanczos_max_restarts = 24;
    double cleaning_slack = 2.0;     // allowed deletions: slack * λn/d

    // --- connector ---
    double tree_frac = 0.02;         // binary-tree growth target: |V(H)|/50
    int tree_floor = 12;             // desk floor for the target above
    double good_frac = 0.10;         // goodness set-size bound: |V(H)|/10
    int good_degree = 3;             // D in (s,D)-goodness; binary trees have Δ<=3
    int exhaustive_good_limit = 18;  // full Eq.-check below this |V(H)|
    int good_samples = 64;           // sampled X-sets per incremental check
    int coloring_retries = 20;       // fresh aux colorings before giving up

    // --- forest ---
    int regular_r = 4;               // subdigraph regularity (δ/1e10 at scale)
    double forest_count_c0 = 4.0;    // reported target: c0 * n / r^{1/5}
    int stitch_passes = 8;

    // --- absorber ---
    double flex_clean_mult = 500.0;  // flexible-set cleanliness: 500λ
    double cycle_supply_mult = 20000.0;  // cycle demand: 20000 λn/d
    double keep_prob = 0.8;          // sparsification keep probability (4/5)
    double outside_deg_frac = 0.1;   // post-sparsify degree floor: d/10
    int sparsify_retries = 10;
    int absorb_retries = 10;

    // --- harness ---
    uint64_t seed = 1;
    int retries = 20;

    // Effective thresholds. Each caps the scale value so that desk instances
    // are feasible; the cap choices are recorded where they bite.
    static int depth_for(int n, int cap) {
        return cap > 0 ? cap : std::max(2, (int)std::ceil(log2d(n)));
    }
    int depth(int n) const { return depth_for(n, depth_cap); }

    int k_for(int n) const {
        if (k_override > 0) return k_override;
        int k = (int)std::llround(k_log_mult * log2d(n));
        return std::clamp(k, 4, std::max(4, n / 64));
    }

    double gamma_for(int n, int d, double lambda) const {
        if (gamma > 0) return gamma;
        double byratio = (d / std::max(lambda, 1.0)) * (d / std::max(lambda, 1.0)) *
                         1e-2 / log2d(n);
        return std::clamp(byratio, 0.05, 0.5);
    }

    // δ for clean collections; d/100 at scale, at desk at least 2.
    double delta_for(int d) const { return std::max(2.0, delta_frac * d); }

    // 500λ-style cleanliness demands, capped below the degree they must live in.
    double scaled_clean(double lambda, int d, double mult) const {
        return std::min(mult * lambda, d / 8.0);
    }
};

}  // namespace ham
