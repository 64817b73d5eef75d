#include "hypermap/router.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "hypermap/rng.hpp"

namespace hypermap {

namespace {

constexpr std::uint64_t kPairStream = 0x7061697273;     // "pairs"
constexpr std::uint64_t kPerturbStream = 0x70657274;    // "pert"
constexpr std::uint64_t kEmbedStream = 0x656d626564;    // "embed"

// Greedy walk with a pluggable distance-to-destination function.
template <class DistToDst>
GreedyResult greedy_walk(const Topology& g, int src, int dst, int hop_cap,
                         DistToDst&& dist) {
    if (src == dst) throw std::invalid_argument("greedy_route: src == dst");
    GreedyResult res;
    std::vector<char> visited(g.node_count(), 0);
    int current = src;
    visited[static_cast<std::size_t>(current)] = 1;
    res.path.push_back(current);
    while (true) {
        int next = -1;
        double best = 0.0;
        for (int nb : g.neighbors(current)) {
            if (nb == dst) {  // adjacency wins every tie: d(dst,dst)=0
                next = nb;
                break;
            }
            double d = dist(nb, dst);
            // Ties prefer the higher-degree neighbor (more onward options);
            // remaining ties the lower id, for determinism.
            if (next < 0 || d < best ||
                (d == best && (g.degree(nb) > g.degree(next) ||
                               (g.degree(nb) == g.degree(next) &&
                                g.id_of(nb) < g.id_of(next))))) {
                next = nb;
                best = d;
            }
        }
        if (next < 0) {  // isolated current node, cannot move
            res.status = RouteStatus::LoopDetected;
            return res;
        }
        res.path.push_back(next);
        if (next == dst) {
            res.status = RouteStatus::Delivered;
            return res;
        }
        if (visited[static_cast<std::size_t>(next)]) {
            res.status = RouteStatus::LoopDetected;
            return res;
        }
        visited[static_cast<std::size_t>(next)] = 1;
        if (static_cast<int>(res.path.size()) - 1 >= hop_cap) {
            res.status = RouteStatus::CapExceeded;
            return res;
        }
        current = next;
    }
}

std::vector<std::pair<int, int>> build_pairs(const std::vector<int>& members,
                                             const PairSpec& spec, std::mt19937_64& rng) {
    const std::size_t m = members.size();
    if (m < 2) throw std::invalid_argument("routing: giant component has fewer than 2 nodes");
    std::vector<std::pair<int, int>> out;
    if (spec.all_pairs) {
        out.reserve(m * (m - 1) / 2);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b)
                out.emplace_back(members[a], members[b]);
        return out;
    }
    std::size_t available = m * (m - 1) / 2;
    if (spec.sample_size > available)
        throw std::invalid_argument("routing: requested more pairs than available");
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::set<std::pair<int, int>> seen;
    while (out.size() < spec.sample_size) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        int i = members[std::min(a, b)], j = members[std::max(a, b)];
        if (!seen.insert({i, j}).second) continue;
        out.emplace_back(i, j);
    }
    return out;
}

struct PairOutcome {
    char delivered = 0;
    char unreachable = 0;
    int shortest = 0;
    int greedy = 0;
};

template <class DistToDst>
RoutingReport evaluate_core(const Topology& g, DistToDst&& dist, const PairSpec& spec,
                            std::uint64_t seed, int hop_cap, bool parallel) {
    if (hop_cap <= 0) hop_cap = default_hop_cap(g);
    auto gc = giant_component(g);
    auto rng = make_engine(seed, kPairStream);
    auto pairs = build_pairs(gc.member_indices, spec, rng);

    // Group by source so one BFS serves all pairs from that source.
    std::stable_sort(pairs.begin(), pairs.end());
    std::vector<std::size_t> group_start;
    for (std::size_t p = 0; p < pairs.size(); ++p)
        if (p == 0 || pairs[p].first != pairs[p - 1].first) group_start.push_back(p);
    group_start.push_back(pairs.size());

    std::vector<PairOutcome> outcome(pairs.size());
    const long long n_groups = static_cast<long long>(group_start.size()) - 1;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long gi = 0; gi < n_groups; ++gi) {
        std::size_t lo = group_start[static_cast<std::size_t>(gi)];
        std::size_t hi = group_start[static_cast<std::size_t>(gi) + 1];
        auto hops = bfs_distances(g, pairs[lo].first);
        for (std::size_t p = lo; p < hi; ++p) {
            int dst = pairs[p].second;
            if (hops[static_cast<std::size_t>(dst)] < 0) {
                outcome[p].unreachable = 1;
                continue;
            }
            auto res = greedy_walk(g, pairs[p].first, dst, hop_cap, dist);
            if (res.status == RouteStatus::Delivered) {
                outcome[p].delivered = 1;
                outcome[p].shortest = hops[static_cast<std::size_t>(dst)];
                outcome[p].greedy = static_cast<int>(res.path.size()) - 1;
            }
        }
    }

    RoutingReport report;
    double stretch_sum = 0.0, shortest_sum = 0.0, greedy_sum = 0.0;
    for (const auto& o : outcome) {
        if (o.unreachable) {
            ++report.pairs_skipped_unreachable;
            continue;
        }
        ++report.pairs_evaluated;
        if (o.delivered) {
            ++report.pairs_delivered;
            stretch_sum += static_cast<double>(o.greedy) / static_cast<double>(o.shortest);
            shortest_sum += o.shortest;
            greedy_sum += o.greedy;
        }
    }
    if (report.pairs_evaluated)
        report.success_ratio = static_cast<double>(report.pairs_delivered) /
                               static_cast<double>(report.pairs_evaluated);
    if (report.pairs_delivered) {
        report.mean_stretch = stretch_sum / static_cast<double>(report.pairs_delivered);
        report.mean_shortest_hops = shortest_sum / static_cast<double>(report.pairs_delivered);
        report.mean_greedy_hops = greedy_sum / static_cast<double>(report.pairs_delivered);
    }
    return report;
}

// Transfers coordinates onto a (possibly reduced) topology by node id.
EmbeddedMap remap(const EmbeddedMap& map, const Topology& g) {
    std::unordered_map<int, std::size_t> pos;
    pos.reserve(map.ids.size());
    for (std::size_t k = 0; k < map.ids.size(); ++k) pos[map.ids[k]] = k;
    EmbeddedMap out;
    out.params = map.params;
    out.ids = g.ids();
    const std::size_t n = g.node_count();
    out.kappa.resize(n);
    out.theta.resize(n);
    out.r.resize(n);
    out.provenance.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = pos.find(out.ids[i]);
        if (it == pos.end())
            throw std::invalid_argument("routing: node " + std::to_string(out.ids[i]) +
                                        " has no coordinates in the map");
        out.kappa[i] = map.kappa[it->second];
        out.theta[i] = map.theta[it->second];
        out.r[i] = map.r[it->second];
        out.provenance[i] = map.provenance[it->second];
    }
    return out;
}

} // namespace

int default_hop_cap(const Topology& g) {
    auto gc = giant_component(g);
    if (gc.member_indices.empty()) return 10;
    auto d0 = bfs_distances(g, gc.member_indices.front());
    int far = gc.member_indices.front(), ecc = 0;
    for (std::size_t i = 0; i < d0.size(); ++i)
        if (d0[i] > ecc) { ecc = d0[i]; far = static_cast<int>(i); }
    auto d1 = bfs_distances(g, far);
    int diameter = ecc;
    for (int d : d1) diameter = std::max(diameter, d);
    return std::max(2 * diameter, 10);
}

GreedyResult greedy_route(const Topology& g, const EmbeddedMap& map, int src_index,
                          int dst_index, int hop_cap) {
    const int n = static_cast<int>(g.node_count());
    if (src_index < 0 || src_index >= n || dst_index < 0 || dst_index >= n)
        throw std::invalid_argument("greedy_route: node index out of range");
    if (map.size() != g.node_count())
        throw std::invalid_argument("greedy_route: map does not cover the topology");
    auto dist = [&](int node, int dst) {
        if (node == dst) return 0.0;
        PolarCoordinate a{map.r[static_cast<std::size_t>(node)],
                          map.theta[static_cast<std::size_t>(node)]};
        PolarCoordinate b{map.r[static_cast<std::size_t>(dst)],
                          map.theta[static_cast<std::size_t>(dst)]};
        return hyperbolic_distance(a, b);
    };
    return greedy_walk(g, src_index, dst_index, hop_cap, dist);
}

RoutingReport evaluate_routing(const Topology& g, const EmbeddedMap& map,
                               const PairSpec& pairs, std::uint64_t seed, int hop_cap,
                               bool parallel) {
    if (map.size() != g.node_count())
        throw std::invalid_argument("evaluate_routing: map does not cover the topology");
    auto dist = [&](int node, int dst) {
        if (node == dst) return 0.0;
        PolarCoordinate a{map.r[static_cast<std::size_t>(node)],
                          map.theta[static_cast<std::size_t>(node)]};
        PolarCoordinate b{map.r[static_cast<std::size_t>(dst)],
                          map.theta[static_cast<std::size_t>(dst)]};
        return hyperbolic_distance(a, b);
    };
    return evaluate_core(g, dist, pairs, seed, hop_cap, parallel);
}

std::vector<SweepPoint> robustness_sweep(const Topology& g, const EmbeddedMap& map,
                                         PerturbationKind kind,
                                         const std::vector<double>& levels,
                                         const PairSpec& pairs, std::uint64_t seed) {
    std::vector<SweepPoint> out;
    const double n_full = static_cast<double>(g.node_count());
    for (std::size_t li = 0; li < levels.size(); ++li) {
        double level = levels[li];
        auto rng = make_engine(seed, kPerturbStream + li);
        Topology reduced;
        switch (kind) {
        case PerturbationKind::RandomLinks:
            reduced = remove_random_links(g, level, rng);
            break;
        case PerturbationKind::RandomNodes:
            reduced = remove_random_nodes(g, level, rng);
            break;
        case PerturbationKind::TopHubs:
            reduced = remove_top_hubs(g, static_cast<int>(std::lround(level)));
            break;
        case PerturbationKind::RankedLinks:
            reduced = remove_ranked_links(g, level);
            break;
        }
        SweepPoint point;
        point.level = level;
        point.giant_fraction =
            static_cast<double>(giant_component(reduced).member_indices.size()) / n_full;
        // Same pair seed at every level so level 0 reproduces the baseline.
        point.report = evaluate_routing(reduced, remap(map, reduced), pairs, seed);
        out.push_back(point);
    }
    return out;
}

std::vector<MissingLinksPoint> missing_links_experiment(
    const Topology& g, const std::vector<double>& fractions, int k_min,
    const EmbedRecipe& recipe, const PairSpec& pairs, std::uint64_t seed,
    int embed_budget) {
    if (embed_budget < 1)
        throw std::invalid_argument("missing_links_experiment: embed budget must be >= 1");
    std::vector<MissingLinksPoint> out;
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        double f = fractions[fi];
        if (f < 0.0 || f > 0.3)
            throw std::invalid_argument("missing_links_experiment: fraction outside [0, 0.3]");
        auto rng = make_engine(seed, kPerturbStream + 100 + fi);
        auto removal = remove_links_above_threshold(g, f, k_min, rng);

        // Embed the giant component of the reduced graph from scratch; with a
        // budget above one, keep the most likely of several attempts.
        auto gc = giant_component(removal.reduced);
        std::vector<int> gc_ids;
        gc_ids.reserve(gc.member_indices.size());
        for (int idx : gc.member_indices) gc_ids.push_back(removal.reduced.id_of(idx));
        Topology g1 = induced_subgraph(removal.reduced, gc_ids);
        EmbeddedMap map1;
        double best_ll = 0.0;
        for (int b = 0; b < embed_budget; ++b) {
            auto candidate = embed_with_recipe(
                g1, recipe, substream_seed(seed, kEmbedStream + 16 * fi + b));
            double ll = global_log_likelihood(candidate, g1);
            if (b == 0 || ll > best_ll) {
                best_ll = ll;
                map1 = std::move(candidate);
            }
        }

        MissingLinksPoint point;
        point.fraction = f;
        point.removed_links = removal.removed_edges.size();
        // Share the reduced graph's hop cap so both scenarios get the same
        // walk budget; the full graph's smaller diameter would otherwise cut
        // scenario-2 walks short.
        int hop_cap = default_hop_cap(g1);
        point.scenario1 = evaluate_routing(g1, map1, pairs, seed, hop_cap);
        // Scenario 2: put the removed links back, keep the same map.
        Topology g2 = induced_subgraph(g, gc_ids);
        point.scenario2 = evaluate_routing(g2, remap(map1, g2), pairs, seed, hop_cap);
        if (point.scenario2.success_ratio < point.scenario1.success_ratio)
            std::fprintf(stderr,
                         "missing_links: scenario 2 below scenario 1 at fraction %.3f "
                         "(%.4f < %.4f)\n",
                         f, point.scenario2.success_ratio, point.scenario1.success_ratio);
        out.push_back(point);
    }
    return out;
}

GrowthResult growth_replay(const std::vector<std::vector<int>>& snapshots,
                           const Topology& g_final, const EmbedRecipe& recipe,
                           const PairSpec& pairs, std::uint64_t seed) {
    if (snapshots.empty())
        throw std::invalid_argument("growth_replay: no snapshots");
    for (const auto& snap : snapshots)
        for (int id : snap)
            if (!g_final.has_node(id))
                throw std::invalid_argument("growth_replay: node " + std::to_string(id) +
                                            " not in the final topology");

    GrowthResult result;
    std::set<int> present(snapshots.front().begin(), snapshots.front().end());
    Topology g_t = induced_subgraph(g_final, snapshots.front());
    EmbeddedMap map = embed_with_recipe(g_t, recipe, substream_seed(seed, kEmbedStream));

    GrowthStep step0;
    step0.node_count = g_t.node_count();
    step0.new_nodes = g_t.node_count();
    step0.report = evaluate_routing(g_t, map, pairs, seed);
    result.steps.push_back(step0);

    for (std::size_t t = 1; t < snapshots.size(); ++t) {
        std::vector<int> new_ids;
        for (int id : snapshots[t])
            if (present.insert(id).second) new_ids.push_back(id);
        std::vector<int> all_ids(present.begin(), present.end());
        g_t = induced_subgraph(g_final, all_ids);
        map = incremental_embed(map, g_t, new_ids, recipe.options);
        GrowthStep step;
        step.node_count = g_t.node_count();
        step.new_nodes = new_ids.size();
        step.report = evaluate_routing(g_t, map, pairs, seed);
        result.steps.push_back(step);
    }
    result.final_map = map;
    return result;
}

RoutingReport geographic_route_eval(const Topology& g,
                                    const std::unordered_map<int, GeoCoordinate>& geo,
                                    GeoMode mode, const PairSpec& pairs,
                                    std::uint64_t seed) {
    const int n = static_cast<int>(g.node_count());
    std::string missing;
    std::vector<GeoCoordinate> coord(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto it = geo.find(g.id_of(i));
        if (it == geo.end()) {
            if (!missing.empty()) missing += ", ";
            missing += std::to_string(g.id_of(i));
        } else {
            coord[static_cast<std::size_t>(i)] = it->second;
        }
    }
    if (!missing.empty())
        throw std::invalid_argument("geographic_route_eval: no geo record for nodes " +
                                    missing);

    if (mode == GeoMode::Spherical) {
        auto dist = [&](int node, int dst) {
            if (node == dst) return 0.0;
            return great_circle_angle(coord[static_cast<std::size_t>(node)],
                                      coord[static_cast<std::size_t>(dst)]);
        };
        return evaluate_core(g, dist, pairs, seed, 0, true);
    }

    // Hyperbolized: degree-based radial depth, r = R_geo - 2 ln(k / k_min),
    // a heuristic mirroring the plane's kappa-to-radius rule.
    int k_min = g.degree(0);
    for (int i = 1; i < n; ++i) k_min = std::min(k_min, g.degree(i));
    if (k_min < 1) k_min = 1;
    double r_geo = 2.0 * std::log(static_cast<double>(n));
    std::vector<double> radius(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double k = std::max(g.degree(i), 1);
        radius[static_cast<std::size_t>(i)] =
            std::max(0.0, r_geo - 2.0 * std::log(k / static_cast<double>(k_min)));
    }
    auto dist = [&](int node, int dst) {
        if (node == dst) return 0.0;
        return hyperbolic_distance_3d(radius[static_cast<std::size_t>(node)],
                                      coord[static_cast<std::size_t>(node)],
                                      radius[static_cast<std::size_t>(dst)],
                                      coord[static_cast<std::size_t>(dst)]);
    };
    return evaluate_core(g, dist, pairs, seed, 0, true);
}

namespace {

// Deterministic single shortest path: walk back from dst picking the
// lowest-id predecessor at each level.
std::vector<int> min_id_shortest_path(const Topology& g, const std::vector<int>& hops,
                                      int src, int dst) {
    std::vector<int> rev{dst};
    int cur = dst;
    while (cur != src) {
        int want = hops[static_cast<std::size_t>(cur)] - 1;
        int best = -1;
        for (int nb : g.neighbors(cur))
            if (hops[static_cast<std::size_t>(nb)] == want &&
                (best < 0 || g.id_of(nb) < g.id_of(best)))
                best = nb;
        cur = best;
        rev.push_back(cur);
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

} // namespace

BetweennessTable betweenness(const Topology& g, const EmbeddedMap& map,
                             BetweennessMode mode, BetweennessWeighting weighting,
                             const PairSpec& pairs,
                             const std::unordered_map<int, int>* router_counts,
                             std::uint64_t seed) {
    if (weighting == BetweennessWeighting::RouterWeighted && !router_counts)
        throw std::invalid_argument("betweenness: router weighting needs router counts");
    if (mode == BetweennessMode::Greedy && map.size() != g.node_count())
        throw std::invalid_argument("betweenness: greedy mode needs a full map");

    const int n = static_cast<int>(g.node_count());
    std::vector<double> counts;
    if (weighting == BetweennessWeighting::RouterWeighted) {
        counts.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            auto it = router_counts->find(g.id_of(i));
            if (it == router_counts->end() || it->second < 1)
                throw std::invalid_argument("betweenness: missing or invalid router count "
                                            "for node " + std::to_string(g.id_of(i)));
            counts[static_cast<std::size_t>(i)] = static_cast<double>(it->second);
        }
    }

    auto gc = giant_component(g);
    auto rng = make_engine(seed, kPairStream);
    std::vector<std::pair<int, int>> pair_list;
    if (weighting == BetweennessWeighting::RouterWeighted && !pairs.all_pairs) {
        std::vector<double> w;
        w.reserve(gc.member_indices.size());
        for (int idx : gc.member_indices) w.push_back(counts[static_cast<std::size_t>(idx)]);
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        while (pair_list.size() < pairs.sample_size) {
            int a = gc.member_indices[pick(rng)];
            int b = gc.member_indices[pick(rng)];
            if (a != b) pair_list.emplace_back(std::min(a, b), std::max(a, b));
        }
    } else {
        pair_list = build_pairs(gc.member_indices, pairs, rng);
    }

    int hop_cap = default_hop_cap(g);
    BetweennessTable table;
    table.mode = mode;
    table.weighting = weighting;
    table.value.assign(static_cast<std::size_t>(n), 0.0);

    std::stable_sort(pair_list.begin(), pair_list.end());
    std::vector<int> hops;
    int bfs_src = -1;
    for (auto [src, dst] : pair_list) {
        std::vector<int> path;
        if (mode == BetweennessMode::Shortest) {
            if (src != bfs_src) {
                hops = bfs_distances(g, src);
                bfs_src = src;
            }
            if (hops[static_cast<std::size_t>(dst)] < 0) continue;
            path = min_id_shortest_path(g, hops, src, dst);
        } else {
            auto res = greedy_route(g, map, src, dst, hop_cap);
            if (res.status != RouteStatus::Delivered) continue;
            path = std::move(res.path);
        }
        ++table.paths_counted;
        for (std::size_t k = 1; k + 1 < path.size(); ++k)
            table.value[static_cast<std::size_t>(path[k])] += 1.0;
    }
    if (table.paths_counted)
        for (auto& v : table.value) v /= static_cast<double>(table.paths_counted);
    if (weighting == BetweennessWeighting::RouterWeighted)
        for (int i = 0; i < n; ++i)
            table.value[static_cast<std::size_t>(i)] /= counts[static_cast<std::size_t>(i)];
    return table;
}

} // namespace hypermap
