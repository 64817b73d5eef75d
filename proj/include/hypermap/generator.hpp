#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hypermap/geometry.hpp"
#include "hypermap/graph.hpp"

namespace hypermap {

enum class ModelKind { S1, H2 };

// Synthetic network with known coordinates. Node ids are 0..n-1 and align
// with the coordinate vectors.
struct GroundTruthNetwork {
    Topology topology;
    ModelParams params;
    ModelKind kind = ModelKind::S1;
    double temperature = 0.0;        // H2 generation temperature T
    std::vector<double> theta;       // radians, per node
    std::vector<double> kappa;       // S1 hidden expected degrees
    std::vector<double> radius;      // H2 radial coordinates
    std::uint64_t seed = 0;
};

// Einsteinian H2 model: quasi-uniform node placement in a disc of radius R,
// links drawn independently with the Fermi-Dirac probability.
GroundTruthNetwork generate_h2(std::size_t n, double k_bar, double gamma,
                               double temperature, std::uint64_t seed);

// Newtonian S1 model: uniform angles, Pareto hidden degrees, links with
// p(chi) = 1/(1+chi^beta).
GroundTruthNetwork generate_s1(std::size_t n, double k_bar, double gamma,
                               double beta, std::uint64_t seed);

// Maps an S1 ground truth onto the hyperbolic disc: theta unchanged,
// r = R - 2 ln(kappa/kappa0); topology identical.
GroundTruthNetwork s1_to_h2(const GroundTruthNetwork& net);

namespace detail {
// Edge sampling shared by both models; exposed for the serial/OpenMP
// equivalence test and the benchmark. Draws are counter-based per pair,
// so serial and parallel runs produce the same edge set.
using PairProbability = std::function<double(int, int)>;
std::vector<std::pair<int, int>> sample_edges(std::size_t n, std::uint64_t edge_seed,
                                              const PairProbability& prob, bool parallel);
} // namespace detail

} // namespace hypermap
