#include "hypermap/generator.hpp"

#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hypermap/rng.hpp"

namespace hypermap {

namespace {

constexpr std::uint64_t kCoordStream = 0x636f6f7264;  // "coord"
constexpr std::uint64_t kEdgeStream = 0x6564676573;   // "edges"

std::vector<int> iota_ids(std::size_t n) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
}

} // namespace

namespace detail {

std::vector<std::pair<int, int>> sample_edges(std::size_t n, std::uint64_t edge_seed,
                                              const PairProbability& prob, bool parallel) {
    std::vector<std::pair<int, int>> edges;
    if (!parallel) {
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (pair_uniform(edge_seed, i, j) < prob(static_cast<int>(i), static_cast<int>(j)))
                    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        return edges;
    }
#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::vector<std::vector<std::pair<int, int>>> local(static_cast<std::size_t>(threads));
#pragma omp parallel for schedule(dynamic, 64)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
#ifdef _OPENMP
        auto& out = local[static_cast<std::size_t>(omp_get_thread_num())];
#else
        auto& out = local[0];
#endif
        for (std::size_t j = i + 1; j < n; ++j)
            if (pair_uniform(edge_seed, i, j) < prob(static_cast<int>(i), static_cast<int>(j)))
                out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
    for (auto& l : local) edges.insert(edges.end(), l.begin(), l.end());
    return edges;
}

} // namespace detail

GroundTruthNetwork generate_h2(std::size_t n, double k_bar, double gamma,
                               double temperature, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_h2: need at least 2 nodes");
    if (!(gamma > 2.0)) throw std::invalid_argument("generate_h2: gamma must exceed 2");
    if (!(temperature > 0.0 && temperature < 1.0))
        throw std::invalid_argument("generate_h2: temperature must lie in (0,1)");

    GroundTruthNetwork net;
    net.kind = ModelKind::H2;
    net.temperature = temperature;
    net.seed = seed;
    net.params = ModelParams::make(static_cast<double>(n), k_bar, gamma, 1.0 / temperature);
    const double big_r = net.params.disc_radius;
    const double alpha = 0.5 * (gamma - 1.0);

    auto coord_rng = make_engine(seed, kCoordStream);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    net.theta.resize(n);
    net.radius.resize(n);
    const double emar = std::exp(-alpha * big_r);
    for (std::size_t i = 0; i < n; ++i) {
        net.theta[i] = unif(coord_rng) * kTwoPi;
        double u = unif(coord_rng);
        net.radius[i] = big_r + std::log(u + (1.0 - u) * emar) / alpha;
    }

    auto prob = [&](int i, int j) {
        PolarCoordinate a{net.radius[static_cast<std::size_t>(i)], net.theta[static_cast<std::size_t>(i)]};
        PolarCoordinate b{net.radius[static_cast<std::size_t>(j)], net.theta[static_cast<std::size_t>(j)]};
        return fermi_connection_probability(hyperbolic_distance(a, b), big_r, temperature);
    };
    auto edges = detail::sample_edges(n, substream_seed(seed, kEdgeStream), prob, true);
    net.topology = Topology::from_edges_and_nodes(iota_ids(n), edges);
    return net;
}

GroundTruthNetwork generate_s1(std::size_t n, double k_bar, double gamma,
                               double beta, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_s1: need at least 2 nodes");
    if (!(gamma > 2.0)) throw std::invalid_argument("generate_s1: gamma must exceed 2");
    if (!(beta > 1.0)) throw std::invalid_argument("generate_s1: beta must exceed 1");

    GroundTruthNetwork net;
    net.kind = ModelKind::S1;
    net.seed = seed;
    net.params = ModelParams::make(static_cast<double>(n), k_bar, gamma, beta);

    auto coord_rng = make_engine(seed, kCoordStream);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    net.theta.resize(n);
    net.kappa.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        net.theta[i] = unif(coord_rng) * kTwoPi;
        // Unbounded Pareto: kappa = kappa0 (1-u)^{-1/(gamma-1)}.
        double u = unif(coord_rng);
        net.kappa[i] = net.params.kappa0 * std::pow(1.0 - u, -1.0 / (gamma - 1.0));
    }

    const ModelParams& p = net.params;
    auto prob = [&](int i, int j) {
        double dtheta = angular_separation(net.theta[static_cast<std::size_t>(i)],
                                           net.theta[static_cast<std::size_t>(j)]);
        double chi = effective_distance_s1(net.kappa[static_cast<std::size_t>(i)],
                                           net.kappa[static_cast<std::size_t>(j)], dtheta, p);
        return s1_connection_probability(chi, beta);
    };
    auto edges = detail::sample_edges(n, substream_seed(seed, kEdgeStream), prob, true);
    net.topology = Topology::from_edges_and_nodes(iota_ids(n), edges);
    return net;
}

GroundTruthNetwork s1_to_h2(const GroundTruthNetwork& net) {
    if (net.kind != ModelKind::S1)
        throw std::invalid_argument("s1_to_h2: input is not an S1 ground truth");
    GroundTruthNetwork out = net;
    out.kind = ModelKind::H2;
    out.temperature = 1.0 / net.params.beta;
    out.radius.resize(net.kappa.size());
    for (std::size_t i = 0; i < net.kappa.size(); ++i)
        out.radius[i] = kappa_to_radius(net.kappa[i], net.params);
    return out;
}

} // namespace hypermap
