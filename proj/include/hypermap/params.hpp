#pragma once

#include <cstdint>
#include <vector>

#include "hypermap/graph.hpp"

namespace hypermap {

struct FiniteSizeSolution {
    double n_model = 0.0;   // N
    double k_bar = 0.0;     // average degree including zero-degree nodes
    double kappa0 = 0.0;
    double kappa_c = 0.0;   // expected-degree cut-off
    double alpha_fs = 0.0;  // finite-size factor in (0,1]
    double p_zero = 0.0;    // P(0)
    int iterations = 0;
};

// Discrete power-law MLE over degrees >= k_min_fit, reported to two decimals.
double estimate_gamma(const std::vector<int>& degrees, int k_min_fit = 5);

// Upper incomplete gamma for real s (possibly negative non-integer), x > 0.
// Negative s handled by the recurrence Gamma(s,x) = (Gamma(s+1,x) - x^s e^-x)/s.
double incomplete_gamma_upper(double s, double x);

// Solves the six-equation finite-size system by damped fixed-point iteration.
FiniteSizeSolution solve_finite_size(double n_obs, double k_bar_obs, double k_max_obs,
                                     double gamma);

struct BetaDiagnostic {
    double beta = 0.0;
    double synthetic_clustering = 0.0;
    bool survived_stage1 = false;
    double success_ratio = -1.0;  // -1 when stage 2 was not run
};

struct BetaEstimate {
    double beta = 0.0;
    std::vector<BetaDiagnostic> table;
};

struct BetaEstimateBudget {
    std::size_t generation_n = 2000;   // synthetic size for stage-1 clustering
    int seeds_per_beta = 3;
    int critical_k = 20;               // raised critical layer for stage-2 embeds
    std::size_t route_pairs = 5000;    // routing sample per stage-2 candidate
    double clustering_band = 0.15;     // stage-1 acceptance band around observed
};

// Two-stage beta selection: clustering match first, then greedy success
// ratio on trial embeddings of g.
BetaEstimate estimate_beta(const Topology& g, const std::vector<double>& beta_grid,
                           const BetaEstimateBudget& budget, std::uint64_t seed);

} // namespace hypermap
