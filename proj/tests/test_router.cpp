#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <unordered_map>
#include <vector>

#include "hypermap/embedder.hpp"
#include "hypermap/generator.hpp"
#include "hypermap/graph.hpp"
#include "hypermap/router.hpp"
#include "hypermap/rng.hpp"

using namespace hypermap;

namespace {

// Map with all nodes on the theta = 0 ray so hyperbolic distances reduce to
// |r_i - r_j| and greedy choices can be verified by hand.
EmbeddedMap ray_map(const Topology& g, const std::vector<double>& radii) {
    EmbeddedMap map;
    map.params = ModelParams::make(100.0, 5.0, 2.5, 2.0);
    map.ids = g.ids();
    map.theta.assign(g.node_count(), 0.0);
    map.r = radii;
    map.kappa.assign(g.node_count(), map.params.kappa0);
    map.provenance.assign(g.node_count(), Provenance::KernelInferred);
    return map;
}

EmbeddedMap truth_map(const GroundTruthNetwork& net) {
    EmbeddedMap map;
    map.params = net.params;
    map.ids = net.topology.ids();
    map.kappa = net.kappa;
    map.theta = net.theta;
    map.r.resize(net.topology.node_count());
    for (std::size_t i = 0; i < map.r.size(); ++i)
        map.r[i] = kappa_to_radius(map.kappa[i], map.params);
    map.provenance.assign(net.topology.node_count(), Provenance::KernelInferred);
    return map;
}

bool reports_equal(const RoutingReport& a, const RoutingReport& b) {
    return a.success_ratio == b.success_ratio && a.mean_stretch == b.mean_stretch &&
           a.mean_shortest_hops == b.mean_shortest_hops &&
           a.mean_greedy_hops == b.mean_greedy_hops &&
           a.pairs_evaluated == b.pairs_evaluated &&
           a.pairs_delivered == b.pairs_delivered &&
           a.pairs_skipped_unreachable == b.pairs_skipped_unreachable;
}

} // namespace

TEST_CASE("greedy walk follows the hand-checked path") {
    // chain plus a chord from 0 to 3: from node 0 the neighbor closest to
    // node 5 is 3 (distance 2), so the path must be 0 3 4 5
    auto g = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 3}});
    auto map = ray_map(g, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    auto res = greedy_route(g, map, 0, 5, 50);
    CHECK(res.status == RouteStatus::Delivered);
    CHECK(res.path == std::vector<int>{0, 3, 4, 5});

    // without the chord the walk traverses the whole chain
    auto g2 = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    auto map2 = ray_map(g2, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    auto res2 = greedy_route(g2, map2, 0, 5, 50);
    CHECK(res2.status == RouteStatus::Delivered);
    CHECK(res2.path == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("destination adjacency wins every distance tie") {
    // twin sits at exactly the destination's coordinates and has a lower id,
    // but the walk must hand off to the adjacent destination directly
    auto g = Topology::from_edges({{2, 0}, {2, 3}, {0, 3}});
    // ids sorted: 0(twin) 2(src) 3(dst); twin and dst share r = 1.0
    auto map = ray_map(g, {1.0, 4.0, 1.0});
    auto res = greedy_route(g, map, g.index_of(2), g.index_of(3), 10);
    CHECK(res.status == RouteStatus::Delivered);
    CHECK(res.path == std::vector<int>{g.index_of(2), g.index_of(3)});
}

TEST_CASE("greedy walk detects ping-pong loops") {
    // s(r=5) - a(r=6) - b(r=9) - d(r=0): from a the best neighbor toward d
    // is s (already visited), so the walk reports a loop
    auto g = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}});
    auto map = ray_map(g, {5.0, 6.0, 9.0, 0.0});
    auto res = greedy_route(g, map, 0, 3, 50);
    CHECK(res.status == RouteStatus::LoopDetected);
    CHECK(res.path == std::vector<int>{0, 1, 0});
}

TEST_CASE("hop cap cuts off long walks") {
    auto g = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    auto map = ray_map(g, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    auto res = greedy_route(g, map, 0, 5, 2);
    CHECK(res.status == RouteStatus::CapExceeded);
    CHECK(res.path.size() == 3);
    CHECK_THROWS(greedy_route(g, map, 2, 2, 10));
}

TEST_CASE("complete graph routes every pair in one hop") {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) edges.push_back({i, j});
    auto g = Topology::from_edges(edges);
    auto map = ray_map(g, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
    PairSpec spec;
    spec.all_pairs = true;
    auto rep = evaluate_routing(g, map, spec, 1);
    CHECK(rep.pairs_evaluated == 15);
    CHECK(rep.pairs_delivered == 15);
    CHECK(rep.success_ratio == 1.0);
    CHECK(rep.mean_stretch == 1.0);
    CHECK(rep.mean_greedy_hops == 1.0);
    CHECK(rep.mean_shortest_hops == 1.0);
}

TEST_CASE("stretch never drops below one on a synthetic embedding") {
    auto net = generate_s1(800, 6.0, 2.5, 2.5, 3);
    auto map = truth_map(net);
    const auto& g = net.topology;
    auto gc = giant_component(g);
    int hop_cap = default_hop_cap(g);
    int checked = 0;
    for (std::size_t a = 0; a < gc.member_indices.size() && checked < 400; a += 7) {
        int src = gc.member_indices[a];
        auto hops = bfs_distances(g, src);
        for (std::size_t b = a + 3; b < gc.member_indices.size() && checked < 400; b += 97) {
            int dst = gc.member_indices[b];
            if (src == dst || hops[(std::size_t)dst] < 0) continue;
            auto res = greedy_route(g, map, src, dst, hop_cap);
            if (res.status == RouteStatus::Delivered) {
                CHECK((int)res.path.size() - 1 >= hops[(std::size_t)dst]);
                CHECK(res.path.front() == src);
                CHECK(res.path.back() == dst);
            }
            ++checked;
        }
    }
    CHECK(checked > 100);
    PairSpec spec;
    spec.sample_size = 3000;
    auto rep = evaluate_routing(g, map, spec, 3);
    CHECK(rep.mean_stretch >= 1.0);
    CHECK(rep.pairs_delivered <= rep.pairs_evaluated);
    CHECK(rep.success_ratio > 0.5);
}

TEST_CASE("routing evaluation is deterministic and parallel-safe") {
    auto net = generate_s1(600, 6.0, 2.5, 2.0, 5);
    auto map = truth_map(net);
    PairSpec spec;
    spec.sample_size = 2000;
    auto serial = evaluate_routing(net.topology, map, spec, 5, 0, false);
    auto parallel = evaluate_routing(net.topology, map, spec, 5, 0, true);
    CHECK(reports_equal(serial, parallel));
    auto again = evaluate_routing(net.topology, map, spec, 5, 0, true);
    CHECK(reports_equal(parallel, again));
}

TEST_CASE("pair sampling rejects oversized requests") {
    auto g = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto map = ray_map(g, {1.0, 2.0, 3.0, 4.0});
    PairSpec spec;
    spec.sample_size = 100;  // only 6 pairs exist
    CHECK_THROWS(evaluate_routing(g, map, spec, 1));
}

TEST_CASE("robustness sweep reproduces the baseline at level zero") {
    auto net = generate_s1(600, 6.0, 2.5, 2.0, 7);
    auto map = truth_map(net);
    PairSpec spec;
    spec.sample_size = 1500;
    auto baseline = evaluate_routing(net.topology, map, spec, 7);
    for (auto kind : {PerturbationKind::RandomLinks, PerturbationKind::RandomNodes,
                      PerturbationKind::RankedLinks}) {
        auto sweep = robustness_sweep(net.topology, map, kind, {0.0, 0.15}, spec, 7);
        REQUIRE(sweep.size() == 2);
        CHECK(reports_equal(sweep[0].report, baseline));
        CHECK(sweep[0].giant_fraction == doctest::Approx(giant_component(net.topology).fraction));
        CHECK(sweep[1].giant_fraction <= sweep[0].giant_fraction + 1e-12);
        CHECK(sweep[1].report.pairs_evaluated > 0);
    }
    auto hubs = robustness_sweep(net.topology, map, PerturbationKind::TopHubs, {0.0, 5.0},
                                 spec, 7);
    CHECK(reports_equal(hubs[0].report, baseline));
    CHECK(hubs[1].giant_fraction < 1.0);
}

TEST_CASE("missing links experiment validates fractions") {
    auto net = generate_s1(300, 6.0, 2.5, 2.0, 9);
    auto map = truth_map(net);
    EmbedRecipe recipe;
    recipe.params = net.params;
    recipe.schedule = default_schedule(net.topology, 20);
    PairSpec spec;
    spec.sample_size = 200;
    CHECK_THROWS(missing_links_experiment(net.topology, {0.5}, 5, recipe, spec, 9));
}

TEST_CASE("single-snapshot growth replay reduces to embed plus evaluate") {
    auto net = generate_s1(500, 6.0, 2.5, 2.0, 13);
    auto gc = giant_component(net.topology);
    std::vector<int> ids;
    for (int idx : gc.member_indices) ids.push_back(net.topology.id_of(idx));
    auto g = induced_subgraph(net.topology, ids);
    EmbedRecipe recipe;
    recipe.params = net.params;
    recipe.schedule = default_schedule(g, 20);
    PairSpec spec;
    spec.sample_size = 1000;
    auto growth = growth_replay({ids}, g, recipe, spec, 13);
    REQUIRE(growth.steps.size() == 1);
    auto direct_map = embed_with_recipe(g, recipe, substream_seed(13, 0x656d626564));
    auto direct = evaluate_routing(g, direct_map, spec, 13);
    CHECK(reports_equal(growth.steps[0].report, direct));
    CHECK(growth.final_map.theta == direct_map.theta);
    CHECK_THROWS(growth_replay({{999999}}, g, recipe, spec, 13));
}

TEST_CASE("shortest-path betweenness on star and path graphs") {
    // star with 4 leaves: 6 of the 10 pairs are leaf-leaf through the center
    auto star = Topology::from_edges({{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    EmbeddedMap empty;
    PairSpec spec;
    spec.all_pairs = true;
    auto t = betweenness(star, empty, BetweennessMode::Shortest,
                         BetweennessWeighting::Uniform, spec, nullptr, 1);
    CHECK(t.paths_counted == 10);
    CHECK(t.value[(std::size_t)star.index_of(0)] == doctest::Approx(0.6));
    for (int leaf : {1, 2, 3, 4})
        CHECK(t.value[(std::size_t)star.index_of(leaf)] == 0.0);

    // path 0-1-2-3: node 1 interior for (0,2) and (0,3); node 2 for (0,3), (1,3)
    auto path = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}});
    auto tp = betweenness(path, empty, BetweennessMode::Shortest,
                          BetweennessWeighting::Uniform, spec, nullptr, 1);
    CHECK(tp.paths_counted == 6);
    CHECK(tp.value[1] == doctest::Approx(2.0 / 6.0));
    CHECK(tp.value[2] == doctest::Approx(2.0 / 6.0));
    CHECK(tp.value[0] == 0.0);
    CHECK(tp.value[3] == 0.0);
}

TEST_CASE("greedy betweenness uses the map and matches greedy paths") {
    auto g = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 3}});
    auto map = ray_map(g, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    PairSpec spec;
    spec.all_pairs = true;
    auto t = betweenness(g, map, BetweennessMode::Greedy, BetweennessWeighting::Uniform,
                         spec, nullptr, 1);
    CHECK(t.paths_counted > 0);
    // 0 -> 5 goes through 3 and 4 via the chord, never through 1 or 2
    CHECK(t.value[3] > 0.0);
    EmbeddedMap empty;
    CHECK_THROWS(betweenness(g, empty, BetweennessMode::Greedy,
                             BetweennessWeighting::Uniform, spec, nullptr, 1));
}

TEST_CASE("router-weighted betweenness divides by the router count") {
    auto star = Topology::from_edges({{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    EmbeddedMap empty;
    PairSpec spec;
    spec.all_pairs = true;
    std::unordered_map<int, int> counts{{0, 2}, {1, 1}, {2, 1}, {3, 1}, {4, 1}};
    auto t = betweenness(star, empty, BetweennessMode::Shortest,
                         BetweennessWeighting::RouterWeighted, spec, &counts, 1);
    CHECK(t.value[(std::size_t)star.index_of(0)] == doctest::Approx(0.3));
    CHECK_THROWS(betweenness(star, empty, BetweennessMode::Shortest,
                             BetweennessWeighting::RouterWeighted, spec, nullptr, 1));
    std::unordered_map<int, int> incomplete{{0, 2}};
    CHECK_THROWS(betweenness(star, empty, BetweennessMode::Shortest,
                             BetweennessWeighting::RouterWeighted, spec, &incomplete, 1));
}

TEST_CASE("geographic routing modes") {
    auto g = Topology::from_edges({{0, 1}, {1, 2}});
    std::unordered_map<int, GeoCoordinate> geo{
        {0, {0.0, 0.0}}, {1, {0.0, 50.0}}, {2, {0.0, 100.0}}};
    PairSpec spec;
    spec.all_pairs = true;
    auto spherical = geographic_route_eval(g, geo, GeoMode::Spherical, spec, 1);
    CHECK(spherical.success_ratio == 1.0);
    auto hyper = geographic_route_eval(g, geo, GeoMode::Hyperbolized, spec, 1);
    CHECK(hyper.pairs_evaluated == 3);
    std::unordered_map<int, GeoCoordinate> partial{{0, {0.0, 0.0}}, {1, {0.0, 50.0}}};
    try {
        geographic_route_eval(g, partial, GeoMode::Spherical, spec, 1);
        CHECK(false);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("default hop cap covers the diameter twice") {
    auto g = Topology::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6},
                                   {6, 7}, {7, 8}});
    CHECK(default_hop_cap(g) == std::max(2 * 8, 10));
    auto tiny = Topology::from_edges({{0, 1}});
    CHECK(default_hop_cap(tiny) == 10);
}
