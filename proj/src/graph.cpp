#include "hypermap/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hypermap {

namespace {

void check_fraction(double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("fraction must lie in [0,1]");
}

} // namespace

Topology Topology::from_edges(const std::vector<std::pair<int, int>>& edges, BuildInfo* info) {
    BuildInfo bi;
    std::set<std::pair<int, int>> unique_edges;
    std::set<int> node_ids;
    for (auto [u, v] : edges) {
        node_ids.insert(u);
        node_ids.insert(v);
        if (u == v) {
            ++bi.self_loops;
            continue;
        }
        auto e = std::minmax(u, v);
        if (!unique_edges.insert({e.first, e.second}).second) ++bi.duplicate_edges;
    }
    Topology g;
    g.ids_.assign(node_ids.begin(), node_ids.end());
    g.index_.reserve(g.ids_.size());
    for (std::size_t i = 0; i < g.ids_.size(); ++i)
        g.index_[g.ids_[i]] = static_cast<int>(i);
    g.adj_.resize(g.ids_.size());
    for (auto& [u, v] : unique_edges) {
        int a = g.index_[u], b = g.index_[v];
        g.adj_[static_cast<std::size_t>(a)].push_back(b);
        g.adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
    g.edge_count_ = unique_edges.size();
    if (info) *info = bi;
    return g;
}

int Topology::index_of(int id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw std::out_of_range("Topology: unknown node id " + std::to_string(id));
    return it->second;
}

bool Topology::has_edge(int a, int b) const {
    const auto& nb = adj_[static_cast<std::size_t>(a)];
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<std::pair<int, int>> Topology::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int a = 0; a < static_cast<int>(ids_.size()); ++a)
        for (int b : adj_[static_cast<std::size_t>(a)])
            if (a < b) out.emplace_back(a, b);
    return out;
}

bool Topology::check_invariants() const {
    std::size_t half_degree_sum = 0;
    for (int a = 0; a < static_cast<int>(ids_.size()); ++a) {
        const auto& nb = adj_[static_cast<std::size_t>(a)];
        for (std::size_t i = 0; i < nb.size(); ++i) {
            if (nb[i] == a) return false;
            if (i > 0 && nb[i] <= nb[i - 1]) return false;
            if (!has_edge(nb[i], a)) return false;
        }
        half_degree_sum += nb.size();
    }
    return half_degree_sum == 2 * edge_count_;
}

Topology Topology::from_edges_and_nodes(const std::vector<int>& node_ids,
                                        const std::vector<std::pair<int, int>>& edges,
                                        BuildInfo* info) {
    // A self-loop registers its endpoint id in from_edges and is then
    // dropped, so appending one per node keeps isolates alive.
    std::vector<std::pair<int, int>> aug = edges;
    aug.reserve(aug.size() + node_ids.size());
    for (int id : node_ids) aug.emplace_back(id, id);
    BuildInfo bi;
    Topology g = from_edges(aug, &bi);
    bi.self_loops -= node_ids.size();
    if (info) *info = bi;
    return g;
}

static Topology build_with_nodes(const std::vector<int>& node_ids,
                                 std::vector<std::pair<int, int>> id_edges) {
    return Topology::from_edges_and_nodes(node_ids, id_edges);
}

Topology induced_by_indices(const Topology& g, const std::vector<char>& keep) {
    std::vector<int> ids;
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < static_cast<int>(g.node_count()); ++a) {
        if (!keep[static_cast<std::size_t>(a)]) continue;
        ids.push_back(g.id_of(a));
        for (int b : g.neighbors(a))
            if (a < b && keep[static_cast<std::size_t>(b)])
                edges.emplace_back(g.id_of(a), g.id_of(b));
    }
    return build_with_nodes(ids, std::move(edges));
}

GraphStats compute_stats(const Topology& g) {
    if (g.empty()) throw std::invalid_argument("compute_stats: empty graph");
    GraphStats s;
    s.n_obs = g.node_count();
    s.edge_count = g.edge_count();
    s.k_bar_obs = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(s.n_obs);

    double cl_sum = 0.0;
    std::size_t cl_nodes = 0;
    for (int i = 0; i < static_cast<int>(s.n_obs); ++i) {
        int d = g.degree(i);
        s.k_max_obs = std::max(s.k_max_obs, d);
        if (d <= 1) continue;
        ++cl_nodes;
        const auto& nb = g.neighbors(i);
        std::size_t triangles = 0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                if (g.has_edge(nb[a], nb[b])) ++triangles;
        cl_sum += 2.0 * static_cast<double>(triangles) / (static_cast<double>(d) * (d - 1));
    }
    s.mean_clustering = cl_nodes ? cl_sum / static_cast<double>(cl_nodes) : 0.0;
    return s;
}

Topology threshold_subgraph(const Topology& g, int k_threshold) {
    // Degrees measured in the full graph. Passing nodes with no internal
    // edges are kept as isolates.
    std::vector<char> keep(g.node_count());
    for (int i = 0; i < static_cast<int>(g.node_count()); ++i)
        keep[static_cast<std::size_t>(i)] = g.degree(i) >= k_threshold;
    return induced_by_indices(g, keep);
}

std::vector<int> bfs_distances(const Topology& g, int source_index) {
    if (source_index < 0 || source_index >= static_cast<int>(g.node_count()))
        throw std::out_of_range("bfs_distances: source out of range");
    std::vector<int> dist(g.node_count(), -1);
    std::deque<int> queue{source_index};
    dist[static_cast<std::size_t>(source_index)] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

GiantComponent giant_component(const Topology& g) {
    GiantComponent gc;
    if (g.empty()) return gc;
    std::vector<char> seen(g.node_count(), 0);
    std::vector<std::vector<int>> components;
    for (int s = 0; s < static_cast<int>(g.node_count()); ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        components.emplace_back();
        std::deque<int> queue{s};
        seen[static_cast<std::size_t>(s)] = 1;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            components.back().push_back(u);
            for (int v : g.neighbors(u)) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    queue.push_back(v);
                }
            }
        }
        std::sort(components.back().begin(), components.back().end());
    }
    // Largest component; ties broken by smallest contained node id, i.e.
    // smallest leading index since indices follow id order.
    std::size_t best = 0;
    for (std::size_t c = 1; c < components.size(); ++c) {
        if (components[c].size() > components[best].size() ||
            (components[c].size() == components[best].size() &&
             components[c].front() < components[best].front()))
            best = c;
    }
    gc.member_indices = std::move(components[best]);
    gc.fraction = static_cast<double>(gc.member_indices.size()) /
                  static_cast<double>(g.node_count());
    return gc;
}

Topology remove_random_links(const Topology& g, double fraction, std::mt19937_64& rng) {
    check_fraction(fraction);
    auto edges = g.edge_list();
    std::size_t n_remove =
        static_cast<std::size_t>(fraction * static_cast<double>(edges.size()) + 0.5);
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> drop(edges.size(), 0);
    for (std::size_t i = 0; i < n_remove; ++i) drop[order[i]] = 1;
    std::vector<std::pair<int, int>> kept;
    kept.reserve(edges.size() - n_remove);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (!drop[i]) kept.emplace_back(g.id_of(edges[i].first), g.id_of(edges[i].second));
    return build_with_nodes(g.ids(), std::move(kept));
}

Topology remove_random_nodes(const Topology& g, double fraction, std::mt19937_64& rng) {
    check_fraction(fraction);
    std::size_t n_remove =
        static_cast<std::size_t>(fraction * static_cast<double>(g.node_count()) + 0.5);
    std::vector<int> order(g.node_count());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> keep(g.node_count(), 1);
    for (std::size_t i = 0; i < n_remove; ++i)
        keep[static_cast<std::size_t>(order[i])] = 0;
    return induced_by_indices(g, keep);
}

Topology remove_top_hubs(const Topology& g, int count) {
    std::vector<int> order(g.node_count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return g.id_of(a) < g.id_of(b);
    });
    std::vector<char> keep(g.node_count(), 1);
    for (int i = 0; i < count && i < static_cast<int>(order.size()); ++i)
        keep[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 0;
    return induced_by_indices(g, keep);
}

Topology remove_ranked_links(const Topology& g, double fraction) {
    check_fraction(fraction);
    auto edges = g.edge_list();
    std::sort(edges.begin(), edges.end(), [&](auto& e1, auto& e2) {
        long p1 = static_cast<long>(g.degree(e1.first)) * g.degree(e1.second);
        long p2 = static_cast<long>(g.degree(e2.first)) * g.degree(e2.second);
        if (p1 != p2) return p1 > p2;
        return std::make_pair(g.id_of(e1.first), g.id_of(e1.second)) <
               std::make_pair(g.id_of(e2.first), g.id_of(e2.second));
    });
    std::size_t n_remove =
        static_cast<std::size_t>(fraction * static_cast<double>(edges.size()) + 0.5);
    std::vector<std::pair<int, int>> kept;
    for (std::size_t i = n_remove; i < edges.size(); ++i)
        kept.emplace_back(g.id_of(edges[i].first), g.id_of(edges[i].second));
    return build_with_nodes(g.ids(), std::move(kept));
}

LinkRemoval remove_links_above_threshold(const Topology& g, double fraction, int k_min,
                                         std::mt19937_64& rng) {
    check_fraction(fraction);
    auto edges = g.edge_list();
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (g.degree(edges[i].first) > k_min && g.degree(edges[i].second) > k_min)
            eligible.push_back(i);
    std::shuffle(eligible.begin(), eligible.end(), rng);
    std::size_t n_remove =
        static_cast<std::size_t>(fraction * static_cast<double>(eligible.size()) + 0.5);
    std::vector<char> drop(edges.size(), 0);
    LinkRemoval out;
    for (std::size_t i = 0; i < n_remove; ++i) {
        drop[eligible[i]] = 1;
        out.removed_edges.emplace_back(g.id_of(edges[eligible[i]].first),
                                       g.id_of(edges[eligible[i]].second));
    }
    std::vector<std::pair<int, int>> kept;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (!drop[i]) kept.emplace_back(g.id_of(edges[i].first), g.id_of(edges[i].second));
    out.reduced = build_with_nodes(g.ids(), std::move(kept));
    return out;
}

Topology induced_subgraph(const Topology& g, const std::vector<int>& node_ids) {
    std::vector<char> keep(g.node_count(), 0);
    for (int id : node_ids)
        keep[static_cast<std::size_t>(g.index_of(id))] = 1;
    return induced_by_indices(g, keep);
}

} // namespace hypermap
