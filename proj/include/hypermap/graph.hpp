#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hypermap {

// Immutable undirected simple graph. Node identifiers are arbitrary
// nonnegative integers; internally nodes are indexed 0..n-1 in increasing
// id order and adjacency lists hold indices, sorted.
class Topology {
public:
    Topology() = default;

    struct BuildInfo {
        std::size_t duplicate_edges = 0;
        std::size_t self_loops = 0;
    };

    // Dedupes repeated edges and drops self-loops, counting both.
    static Topology from_edges(const std::vector<std::pair<int, int>>& edges,
                               BuildInfo* info = nullptr);

    // Same, with an explicit node set so zero-degree nodes are retained.
    static Topology from_edges_and_nodes(const std::vector<int>& node_ids,
                                         const std::vector<std::pair<int, int>>& edges,
                                         BuildInfo* info = nullptr);

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    bool empty() const { return ids_.empty(); }

    int id_of(int index) const { return ids_[static_cast<std::size_t>(index)]; }
    const std::vector<int>& ids() const { return ids_; }
    bool has_node(int id) const { return index_.count(id) != 0; }
    int index_of(int id) const;

    const std::vector<int>& neighbors(int index) const {
        return adj_[static_cast<std::size_t>(index)];
    }
    int degree(int index) const {
        return static_cast<int>(adj_[static_cast<std::size_t>(index)].size());
    }
    bool has_edge(int index_a, int index_b) const;

    // Edges as index pairs (a < b), in lexicographic order.
    std::vector<std::pair<int, int>> edge_list() const;

    // Audit used by property tests: symmetry + simplicity.
    bool check_invariants() const;

private:
    std::vector<int> ids_;
    std::unordered_map<int, int> index_;
    std::vector<std::vector<int>> adj_;
    std::size_t edge_count_ = 0;

    friend Topology induced_by_indices(const Topology& g, const std::vector<char>& keep);
};

struct GraphStats {
    std::size_t n_obs = 0;
    double k_bar_obs = 0.0;
    int k_max_obs = 0;
    double mean_clustering = 0.0;  // averaged over nodes of degree > 1
    std::size_t edge_count = 0;
};

GraphStats compute_stats(const Topology& g);

// Nodes with full-graph degree >= k_threshold plus all edges among them.
Topology threshold_subgraph(const Topology& g, int k_threshold);

// Hop counts from source index; -1 marks unreachable.
std::vector<int> bfs_distances(const Topology& g, int source_index);

struct GiantComponent {
    std::vector<int> member_indices;  // sorted
    double fraction = 0.0;
};

GiantComponent giant_component(const Topology& g);

Topology remove_random_links(const Topology& g, double fraction, std::mt19937_64& rng);
Topology remove_random_nodes(const Topology& g, double fraction, std::mt19937_64& rng);
Topology remove_top_hubs(const Topology& g, int count);
// Edges ranked by degree product descending (ties lexicographic by id pair);
// top `fraction` removed.
Topology remove_ranked_links(const Topology& g, double fraction);

struct LinkRemoval {
    Topology reduced;
    std::vector<std::pair<int, int>> removed_edges;  // id pairs
};

// Uniformly removes `fraction` of the edges whose both endpoints have
// degree > k_min in g; removed edges are returned for re-insertion.
LinkRemoval remove_links_above_threshold(const Topology& g, double fraction, int k_min,
                                         std::mt19937_64& rng);

// Induced subgraph on the given node ids (all must exist in g).
Topology induced_subgraph(const Topology& g, const std::vector<int>& node_ids);

} // namespace hypermap
