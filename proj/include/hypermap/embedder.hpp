#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hypermap/geometry.hpp"
#include "hypermap/graph.hpp"

namespace hypermap {

enum class Provenance : std::uint8_t { KernelInferred, InitialGuess, NeighborCopied };

// Per-node inferred coordinates for a specific topology. Vectors are aligned
// with the topology's node indices; `ids` carries the stable identifiers for
// serialization and cross-topology transfer.
struct EmbeddedMap {
    ModelParams params;
    std::vector<int> ids;
    std::vector<double> kappa;
    std::vector<double> theta;
    std::vector<double> r;
    std::vector<Provenance> provenance;

    std::size_t size() const { return ids.size(); }
};

struct LayerSchedule {
    std::vector<int> thresholds;  // strictly decreasing, last >= 3
    int critical_threshold = 0;   // deepest layer on which the kernel still runs

    void validate() const;
};

// Default schedule: k1 ~ sqrt(N), geometric descent to 10, then unit steps
// down to 3; critical threshold 20 (clamped into the schedule).
LayerSchedule default_schedule(const Topology& g, int critical = 20);

enum class KernelKind { LMH, SMH };

struct EmbedOptions {
    KernelKind kernel = KernelKind::LMH;
    double alpha_fs = 1.0;      // finite-size factor for the kappa MLE
    int lmh_rounds = 0;         // 0 = ceil(k_bar_obs)
    std::size_t grid_size = 0;  // 0 = |active| candidate angles
    double smh_move_factor = 1.0;  // moves per layer = factor * |active|^2
    bool log_progress = false;
};

// kappa* = max((gamma-2)/(gamma-1) k_bar, (k - gamma/beta)/alpha_fs).
double mle_kappa(int degree, double gamma, double beta, double k_bar, double alpha_fs);

// Log-likelihood contribution of node i placed at theta_candidate against
// the reference set, using the working graph's adjacency.
double local_log_likelihood(int node, double theta_candidate, const EmbeddedMap& map,
                            const Topology& g, const std::vector<int>& reference);

// Sum over all node pairs; equals half the sum of local terms.
double global_log_likelihood(const EmbeddedMap& map, const Topology& g);

// Metropolis-Hastings over uniform angle proposals for the active set.
void smh_kernel(const std::vector<int>& active, EmbeddedMap& map, const Topology& g,
                std::mt19937_64& rng, std::size_t moves);

// Round-based visits moving each node to the argmax of its local
// log-likelihood over a uniform candidate grid (current angle always
// included, so the global log-likelihood never decreases).
void lmh_kernel(const std::vector<int>& active, EmbeddedMap& map, const Topology& g,
                int rounds, std::size_t grid_size);

EmbeddedMap embed_wrapper1(const Topology& g, const ModelParams& params,
                           const LayerSchedule& schedule, std::mt19937_64& rng,
                           const EmbedOptions& options = {});

EmbeddedMap embed_wrapper2(const Topology& g, const ModelParams& params,
                           const LayerSchedule& schedule, std::mt19937_64& rng,
                           const EmbedOptions& options = {});

// Copies the angular coordinate of the highest-degree placed neighbor onto
// every still-unplaced node (ties by lower node id).
void place_low_degree(const Topology& g, EmbeddedMap& map, std::vector<char>& placed,
                      double alpha_fs = 1.0);

// Places new_nodes (ids) of g_new against the frozen coordinates of
// `existing`; old coordinates are copied bit-identically.
EmbeddedMap incremental_embed(const EmbeddedMap& existing, const Topology& g_new,
                              const std::vector<int>& new_node_ids,
                              const EmbedOptions& options = {});

struct ConnectionCurveBin {
    double x_low = 0.0;
    double x_high = 0.0;
    double probability = 0.0;
    std::size_t pairs = 0;
};

std::vector<ConnectionCurveBin> empirical_connection_curve(const EmbeddedMap& map,
                                                           const Topology& g,
                                                           std::size_t bin_count);

// Everything needed to re-run an embedding from scratch inside experiments.
struct EmbedRecipe {
    ModelParams params;
    LayerSchedule schedule;
    EmbedOptions options;
    bool use_wrapper2 = true;
};

EmbeddedMap embed_with_recipe(const Topology& g, const EmbedRecipe& recipe,
                              std::uint64_t seed);

namespace detail {
// Argmax of the local log-likelihood over explicit candidate angles;
// the parallel variant sweeps candidates with OpenMP and must agree with
// the serial one exactly (ties resolved by lowest candidate index).
double best_angle_serial(int node, const std::vector<double>& candidates,
                         const EmbeddedMap& map, const Topology& g,
                         const std::vector<int>& reference);
double best_angle_parallel(int node, const std::vector<double>& candidates,
                           const EmbeddedMap& map, const Topology& g,
                           const std::vector<int>& reference);
} // namespace detail

} // namespace hypermap
