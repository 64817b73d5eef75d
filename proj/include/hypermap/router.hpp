#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hypermap/embedder.hpp"
#include "hypermap/geometry.hpp"
#include "hypermap/graph.hpp"

namespace hypermap {

enum class RouteStatus { Delivered, LoopDetected, CapExceeded };

struct GreedyResult {
    RouteStatus status = RouteStatus::LoopDetected;
    std::vector<int> path;  // node indices, starting at src
};

struct RoutingReport {
    double success_ratio = 0.0;
    double mean_stretch = 0.0;        // over delivered pairs, >= 1
    double mean_shortest_hops = 0.0;  // over delivered pairs
    double mean_greedy_hops = 0.0;    // over delivered pairs
    std::size_t pairs_evaluated = 0;
    std::size_t pairs_delivered = 0;
    std::size_t pairs_skipped_unreachable = 0;
};

struct PairSpec {
    bool all_pairs = false;
    std::size_t sample_size = 10000;
};

// Upper bound on any shortest path, from a double BFS inside the giant
// component; greedy paths longer than twice this count as failures.
int default_hop_cap(const Topology& g);

GreedyResult greedy_route(const Topology& g, const EmbeddedMap& map, int src_index,
                          int dst_index, int hop_cap);

RoutingReport evaluate_routing(const Topology& g, const EmbeddedMap& map,
                               const PairSpec& pairs, std::uint64_t seed,
                               int hop_cap = 0, bool parallel = true);

enum class PerturbationKind { RandomLinks, RandomNodes, TopHubs, RankedLinks };

struct SweepPoint {
    double level = 0.0;
    RoutingReport report;
    double giant_fraction = 0.0;
};

// Perturbs fresh copies of g and re-routes with the ORIGINAL map held fixed.
// For TopHubs the level is the hub count.
std::vector<SweepPoint> robustness_sweep(const Topology& g, const EmbeddedMap& map,
                                         PerturbationKind kind,
                                         const std::vector<double>& levels,
                                         const PairSpec& pairs, std::uint64_t seed);

struct MissingLinksPoint {
    double fraction = 0.0;
    std::size_t removed_links = 0;
    RoutingReport scenario1;  // reduced graph, reduced-graph map
    RoutingReport scenario2;  // full graph, same map
};

// Re-embeds the reduced graph embed_budget times on distinct seed substreams
// and keeps the most likely map before evaluating both scenarios.
std::vector<MissingLinksPoint> missing_links_experiment(
    const Topology& g, const std::vector<double>& fractions, int k_min,
    const EmbedRecipe& recipe, const PairSpec& pairs, std::uint64_t seed,
    int embed_budget = 1);

struct GrowthStep {
    std::size_t node_count = 0;
    std::size_t new_nodes = 0;
    RoutingReport report;
};

struct GrowthResult {
    std::vector<GrowthStep> steps;
    EmbeddedMap final_map;
};

// Replays cumulative snapshots: full embed of the first, incremental
// placement (old coordinates frozen) for each later one.
GrowthResult growth_replay(const std::vector<std::vector<int>>& snapshots,
                           const Topology& g_final, const EmbedRecipe& recipe,
                           const PairSpec& pairs, std::uint64_t seed);

enum class GeoMode { Spherical, Hyperbolized };

RoutingReport geographic_route_eval(const Topology& g,
                                    const std::unordered_map<int, GeoCoordinate>& geo,
                                    GeoMode mode, const PairSpec& pairs,
                                    std::uint64_t seed);

enum class BetweennessMode { Shortest, Greedy };
enum class BetweennessWeighting { Uniform, RouterWeighted };

struct BetweennessTable {
    BetweennessMode mode = BetweennessMode::Shortest;
    BetweennessWeighting weighting = BetweennessWeighting::Uniform;
    std::vector<double> value;  // per node index, fraction of paths (endpoints excluded)
    std::size_t paths_counted = 0;
};

BetweennessTable betweenness(const Topology& g, const EmbeddedMap& map,
                             BetweennessMode mode, BetweennessWeighting weighting,
                             const PairSpec& pairs,
                             const std::unordered_map<int, int>* router_counts,
                             std::uint64_t seed);

} // namespace hypermap
