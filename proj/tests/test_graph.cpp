#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "hypermap/graph.hpp"

using namespace hypermap;

namespace {

using Edge = std::pair<int, int>;

Topology random_graph(int n, double p, std::uint64_t seed, std::vector<Edge>* out = nullptr) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < p) edges.push_back({i, j});
    if (out) *out = edges;
    return Topology::from_edges(edges);
}

// Reference BFS written independently of the library's adjacency walk.
std::vector<int> bfs_oracle(const std::vector<Edge>& edges, int n, int src) {
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    for (auto& e : edges) {
        adj[static_cast<std::size_t>(e.first)].insert(e.second);
        adj[static_cast<std::size_t>(e.second)].insert(e.first);
    }
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::queue<int> q;
    dist[static_cast<std::size_t>(src)] = 0;
    q.push(src);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[static_cast<std::size_t>(v)])
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                q.push(w);
            }
    }
    return dist;
}

} // namespace

TEST_CASE("from_edges dedupes and drops self loops") {
    Topology::BuildInfo info;
    auto g = Topology::from_edges({{1, 2}, {2, 1}, {1, 2}, {3, 3}, {2, 5}}, &info);
    CHECK(g.node_count() == 4);  // 1 2 3 5
    CHECK(g.edge_count() == 2);
    CHECK(info.duplicate_edges == 2);
    CHECK(info.self_loops == 1);
    CHECK(g.has_node(3));
    CHECK(g.degree(g.index_of(3)) == 0);
    CHECK(g.has_edge(g.index_of(1), g.index_of(2)));
    CHECK(!g.has_edge(g.index_of(1), g.index_of(5)));
    CHECK(g.check_invariants());
}

TEST_CASE("ids are sorted and indexable") {
    auto g = Topology::from_edges({{10, 7}, {7, 3}});
    CHECK(g.ids() == std::vector<int>{3, 7, 10});
    CHECK(g.id_of(g.index_of(7)) == 7);
    CHECK_THROWS(g.index_of(99));
}

TEST_CASE("from_edges_and_nodes keeps isolated nodes") {
    auto g = Topology::from_edges_and_nodes({0, 1, 2, 9}, {{0, 1}});
    CHECK(g.node_count() == 4);
    CHECK(g.degree(g.index_of(9)) == 0);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("edge_list is sorted index pairs") {
    auto g = Topology::from_edges({{5, 2}, {2, 0}, {5, 0}});
    auto el = g.edge_list();
    REQUIRE(el.size() == 3);
    CHECK(std::is_sorted(el.begin(), el.end()));
    for (auto& e : el) CHECK(e.first < e.second);
}

TEST_CASE("bfs matches an independent oracle") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        std::vector<Edge> edges;
        auto g = random_graph(60, 0.05, seed, &edges);
        // random_graph node ids are 0..59 but isolated ones are absent from g
        for (int s = 0; s < static_cast<int>(g.node_count()); s += 7) {
            auto got = bfs_distances(g, s);
            auto want = bfs_oracle(edges, 60, g.id_of(s));
            for (int i = 0; i < static_cast<int>(g.node_count()); ++i)
                CHECK(got[static_cast<std::size_t>(i)] ==
                      want[static_cast<std::size_t>(g.id_of(i))]);
        }
    }
}

TEST_CASE("giant component finds the largest piece") {
    auto g = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}, {10, 11}, {20, 21}, {21, 22}});
    auto gc = giant_component(g);
    REQUIRE(gc.member_indices.size() == 4);
    CHECK(std::is_sorted(gc.member_indices.begin(), gc.member_indices.end()));
    for (int idx : gc.member_indices) CHECK(g.id_of(idx) <= 3);
    CHECK(gc.fraction == doctest::Approx(4.0 / 9.0));
}

TEST_CASE("threshold subgraph uses full-graph degrees") {
    // star: center degree 4, leaves degree 1; plus a triangle of degree-2 nodes
    auto g = Topology::from_edges(
        {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {5, 6}, {6, 7}, {7, 5}});
    auto t2 = threshold_subgraph(g, 2);
    CHECK(t2.node_count() == 4);  // node 0 and the triangle
    CHECK(t2.edge_count() == 3);  // only the triangle edges survive
    CHECK(t2.has_node(0));
    CHECK(t2.degree(t2.index_of(0)) == 0);
    auto t4 = threshold_subgraph(g, 4);
    CHECK(t4.node_count() == 1);
    CHECK(t4.edge_count() == 0);
}

TEST_CASE("induced subgraph") {
    auto g = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto s = induced_subgraph(g, {0, 1, 3});
    CHECK(s.node_count() == 3);
    CHECK(s.edge_count() == 2);
    CHECK(s.has_edge(s.index_of(0), s.index_of(1)));
    CHECK(s.has_edge(s.index_of(0), s.index_of(3)));
    CHECK(!s.has_edge(s.index_of(1), s.index_of(3)));
    CHECK_THROWS(induced_subgraph(g, {0, 42}));
}

TEST_CASE("remove_random_links keeps nodes and removes the right count") {
    auto g = random_graph(80, 0.1, 11);
    std::mt19937_64 rng(3);
    auto r = remove_random_links(g, 0.25, rng);
    CHECK(r.node_count() == g.node_count());
    auto removed = g.edge_count() - r.edge_count();
    CHECK(std::llabs(static_cast<long long>(removed) -
                     std::llround(0.25 * static_cast<double>(g.edge_count()))) <= 1);
    CHECK(r.check_invariants());
    // removed edges were edges of g
    for (auto& e : r.edge_list())
        CHECK(g.has_edge(g.index_of(r.id_of(e.first)), g.index_of(r.id_of(e.second))));
}

TEST_CASE("remove_random_nodes") {
    auto g = random_graph(80, 0.1, 12);
    std::mt19937_64 rng(4);
    auto r = remove_random_nodes(g, 0.5, rng);
    CHECK(r.node_count() == g.node_count() - static_cast<std::size_t>(0.5 * g.node_count()));
    for (int i = 0; i < static_cast<int>(r.node_count()); ++i) CHECK(g.has_node(r.id_of(i)));
    CHECK(r.check_invariants());
}

TEST_CASE("remove_top_hubs drops the highest-degree nodes") {
    auto g = Topology::from_edges({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {3, 4}});
    auto r = remove_top_hubs(g, 1);
    CHECK(!r.has_node(0));
    CHECK(r.node_count() == 4);
    CHECK(r.edge_count() == 2);
}

TEST_CASE("remove_ranked_links removes highest degree-product edges first") {
    // hub-hub edge (0,1) has product 9, all others lower
    auto g = Topology::from_edges({{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}});
    auto r = remove_ranked_links(g, 0.2);  // one edge
    CHECK(r.edge_count() == 4);
    CHECK(!r.has_edge(r.index_of(0), r.index_of(1)));
}

TEST_CASE("remove_links_above_threshold only touches core edges") {
    auto g = random_graph(120, 0.08, 13);
    std::mt19937_64 rng(5);
    const int k_min = 8;
    std::vector<Edge> eligible;
    for (auto& e : g.edge_list())
        if (g.degree(e.first) > k_min && g.degree(e.second) > k_min) eligible.push_back(e);
    auto removal = remove_links_above_threshold(g, 0.5, k_min, rng);
    CHECK(std::llabs(static_cast<long long>(removal.removed_edges.size()) -
                     std::llround(0.5 * static_cast<double>(eligible.size()))) <= 1);
    CHECK(removal.reduced.edge_count() == g.edge_count() - removal.removed_edges.size());
    CHECK(removal.reduced.node_count() == g.node_count());
    for (auto& e : removal.removed_edges) {
        int a = g.index_of(e.first), b = g.index_of(e.second);
        CHECK(g.has_edge(a, b));
        CHECK(g.degree(a) > k_min);
        CHECK(g.degree(b) > k_min);
        CHECK(!removal.reduced.has_edge(removal.reduced.index_of(e.first),
                                        removal.reduced.index_of(e.second)));
    }
}

TEST_CASE("compute_stats on a known graph") {
    // triangle plus a pendant: degrees 3,2,2,1
    auto g = Topology::from_edges({{0, 1}, {1, 2}, {2, 0}, {0, 3}});
    auto s = compute_stats(g);
    CHECK(s.n_obs == 4);
    CHECK(s.edge_count == 4);
    CHECK(s.k_bar_obs == doctest::Approx(2.0));
    CHECK(s.k_max_obs == 3);
    // clustering: node0 1/3, node1 1, node2 1; degree-1 node excluded
    CHECK(s.mean_clustering == doctest::Approx((1.0 / 3.0 + 1.0 + 1.0) / 3.0));
}

TEST_CASE("invariants hold on random graphs") {
    for (std::uint64_t seed = 20; seed < 25; ++seed) {
        auto g = random_graph(100, 0.05, seed);
        CHECK(g.check_invariants());
        std::size_t degsum = 0;
        for (int i = 0; i < static_cast<int>(g.node_count()); ++i) {
            degsum += static_cast<std::size_t>(g.degree(i));
            auto nb = g.neighbors(i);
            CHECK(std::is_sorted(nb.begin(), nb.end()));
            for (int w : nb) CHECK(g.has_edge(w, i));
        }
        CHECK(degsum == 2 * g.edge_count());
    }
}
