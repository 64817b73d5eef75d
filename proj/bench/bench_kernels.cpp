// Timing comparison of the OpenMP kernels against their serial references.
#include <chrono>
#include <cstdio>
#include <vector>

#include "hypermap/embedder.hpp"
#include "hypermap/generator.hpp"
#include "hypermap/rng.hpp"
#include "hypermap/router.hpp"

using namespace hypermap;
using clk = std::chrono::steady_clock;

static double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

int main() {
    const std::uint64_t seed = 42;
    auto net = generate_s1(3000, 6.0, 2.3, 2.0, seed);
    const auto& g = net.topology;
    std::printf("network: n=%zu edges=%zu\n", g.node_count(), g.edge_count());

    // edge sampling
    {
        auto prob = [&](int i, int j) {
            double sep = angular_separation(net.theta[static_cast<std::size_t>(i)],
                                            net.theta[static_cast<std::size_t>(j)]);
            double chi = effective_distance_s1(net.kappa[static_cast<std::size_t>(i)],
                                               net.kappa[static_cast<std::size_t>(j)], sep,
                                               net.params);
            return s1_connection_probability(chi, net.params.beta);
        };
        auto t0 = clk::now();
        auto serial = detail::sample_edges(g.node_count(), seed, prob, false);
        double ts = seconds_since(t0);
        t0 = clk::now();
        auto parallel = detail::sample_edges(g.node_count(), seed, prob, true);
        double tp = seconds_since(t0);
        std::printf("sample_edges: serial %.3fs  openmp %.3fs  speedup %.2fx  match=%s\n",
                    ts, tp, ts / tp, serial == parallel ? "yes" : "NO");
    }

    // candidate-angle sweep
    {
        EmbeddedMap map;
        map.params = net.params;
        map.ids = g.ids();
        map.kappa = net.kappa;
        map.theta = net.theta;
        map.r.resize(g.node_count());
        for (std::size_t i = 0; i < g.node_count(); ++i)
            map.r[i] = kappa_to_radius(map.kappa[i], map.params);
        map.provenance.assign(g.node_count(), Provenance::KernelInferred);

        std::vector<int> reference;
        for (int i = 0; i < static_cast<int>(g.node_count()); ++i) reference.push_back(i);
        std::vector<double> candidates(4096);
        for (std::size_t c = 0; c < candidates.size(); ++c)
            candidates[c] = kTwoPi * static_cast<double>(c) /
                            static_cast<double>(candidates.size());

        auto t0 = clk::now();
        double a1 = detail::best_angle_serial(0, candidates, map, g, reference);
        double ts = seconds_since(t0);
        t0 = clk::now();
        double a2 = detail::best_angle_parallel(0, candidates, map, g, reference);
        double tp = seconds_since(t0);
        std::printf("best_angle:   serial %.3fs  openmp %.3fs  speedup %.2fx  match=%s\n",
                    ts, tp, ts / tp, a1 == a2 ? "yes" : "NO");

        // routing-pair evaluation
        PairSpec pairs;
        pairs.sample_size = 20000;
        t0 = clk::now();
        auto r1 = evaluate_routing(g, map, pairs, seed, 0, false);
        ts = seconds_since(t0);
        t0 = clk::now();
        auto r2 = evaluate_routing(g, map, pairs, seed, 0, true);
        tp = seconds_since(t0);
        bool same = r1.success_ratio == r2.success_ratio &&
                    r1.pairs_delivered == r2.pairs_delivered &&
                    r1.mean_stretch == r2.mean_stretch;
        std::printf("routing:      serial %.3fs  openmp %.3fs  speedup %.2fx  match=%s\n",
                    ts, tp, ts / tp, same ? "yes" : "NO");
    }
    return 0;
}
