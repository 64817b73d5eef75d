#include "hypermap/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "hypermap/rng.hpp"

namespace hypermap {

void LayerSchedule::validate() const {
    if (thresholds.empty())
        throw std::invalid_argument("LayerSchedule: empty threshold list");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (thresholds[i] >= thresholds[i - 1])
            throw std::invalid_argument("LayerSchedule: thresholds must strictly decrease");
    if (thresholds.back() < 3)
        throw std::invalid_argument("LayerSchedule: last threshold must be >= 3");
}

LayerSchedule default_schedule(const Topology& g, int critical) {
    LayerSchedule s;
    int k1 = std::max(10, static_cast<int>(std::lround(std::sqrt(
                              static_cast<double>(g.node_count())))));
    int k = k1;
    while (k > 10) {
        s.thresholds.push_back(k);
        k = std::max(10, static_cast<int>(std::lround(k * 0.7)));
    }
    for (int t = 10; t >= 3; --t) s.thresholds.push_back(t);
    s.validate();
    // Clamp the critical threshold onto an existing layer.
    s.critical_threshold = s.thresholds.back();
    for (int t : s.thresholds)
        if (t >= critical) s.critical_threshold = t;
    if (s.critical_threshold > critical) {
        // prefer the deepest layer at or above `critical`
        for (int t : s.thresholds)
            if (t >= critical && t < s.critical_threshold) s.critical_threshold = t;
    }
    return s;
}

double mle_kappa(int degree, double gamma, double beta, double k_bar, double alpha_fs) {
    double floor_kappa = (gamma - 2.0) / (gamma - 1.0) * k_bar;
    double mle = (static_cast<double>(degree) - gamma / beta) / alpha_fs;
    return std::max(floor_kappa, mle);
}

namespace {

constexpr double kChiFloor = 1e-15;

struct LikelihoodScale {
    double chi_prefactor;  // N k_bar / (beta sin(pi/beta))
    double beta;

    explicit LikelihoodScale(const ModelParams& p)
        : chi_prefactor(p.n_model * p.k_bar / (p.beta * std::sin(M_PI / p.beta))),
          beta(p.beta) {}
};

// Angles are kept normalized in [0, 2*pi); branchless-ish separation.
inline double fast_separation(double a, double b) {
    double d = std::fabs(a - b);
    return d > M_PI ? kTwoPi - d : d;
}

// ln p(chi) for connected pairs, ln(1-p(chi)) for disconnected ones.
inline double pair_log_term(const LikelihoodScale& s, double theta_i, double theta_j,
                            double inv_kappa_i, double inv_kappa_j, bool connected) {
    double chi = s.chi_prefactor * fast_separation(theta_i, theta_j) * inv_kappa_i * inv_kappa_j;
    if (chi < kChiFloor) chi = kChiFloor;
    double blc = s.beta * std::log(chi);
    if (connected) {
        if (blc > 36.0) return -blc;  // log1p(e^blc) ~ blc beyond double resolution
        return -std::log1p(std::exp(blc));
    }
    if (blc > 36.0) return -std::exp(-blc);
    return blc - std::log1p(std::exp(blc));
}

// Scratch arrays for one node's candidate sweep.
struct ReferenceView {
    std::vector<double> theta;
    std::vector<double> inv_kappa;
    std::vector<char> connected;

    void build(int node, const EmbeddedMap& map, const Topology& g,
               const std::vector<int>& reference) {
        theta.clear();
        inv_kappa.clear();
        connected.clear();
        theta.reserve(reference.size());
        inv_kappa.reserve(reference.size());
        connected.reserve(reference.size());
        for (int j : reference) {
            if (j == node) continue;
            theta.push_back(map.theta[static_cast<std::size_t>(j)]);
            inv_kappa.push_back(1.0 / map.kappa[static_cast<std::size_t>(j)]);
            connected.push_back(g.has_edge(node, j) ? 1 : 0);
        }
    }
};

double sweep_candidate(const LikelihoodScale& s, double theta_candidate,
                       double inv_kappa_node, const ReferenceView& ref) {
    double sum = 0.0;
    for (std::size_t k = 0; k < ref.theta.size(); ++k)
        sum += pair_log_term(s, theta_candidate, ref.theta[k], inv_kappa_node,
                             ref.inv_kappa[k], ref.connected[k] != 0);
    return sum;
}

double best_angle_impl(int node, const std::vector<double>& candidates,
                       const EmbeddedMap& map, const Topology& g,
                       const std::vector<int>& reference, bool parallel) {
    if (candidates.empty())
        throw std::invalid_argument("best_angle: no candidates");
    LikelihoodScale s(map.params);
    ReferenceView ref;
    ref.build(node, map, g, reference);
    double inv_kappa_node = 1.0 / map.kappa[static_cast<std::size_t>(node)];

    std::vector<double> score(candidates.size());
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long c = 0; c < static_cast<long long>(candidates.size()); ++c)
            score[static_cast<std::size_t>(c)] =
                sweep_candidate(s, normalize_angle(candidates[static_cast<std::size_t>(c)]),
                                inv_kappa_node, ref);
    } else {
        for (std::size_t c = 0; c < candidates.size(); ++c)
            score[c] = sweep_candidate(s, normalize_angle(candidates[c]), inv_kappa_node, ref);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < score.size(); ++c)
        if (score[c] > score[best]) best = c;
    return normalize_angle(candidates[best]);
}

std::vector<double> uniform_grid(std::size_t grid_size) {
    std::vector<double> grid(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k)
        grid[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(grid_size);
    return grid;
}

// Log-likelihood restricted to pairs inside the active set.
double active_log_likelihood(const std::vector<int>& active, const EmbeddedMap& map,
                             const Topology& g) {
    LikelihoodScale s(map.params);
    double sum = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
        int i = active[a];
        for (std::size_t b = a + 1; b < active.size(); ++b) {
            int j = active[b];
            sum += pair_log_term(s, map.theta[static_cast<std::size_t>(i)],
                                 map.theta[static_cast<std::size_t>(j)],
                                 1.0 / map.kappa[static_cast<std::size_t>(i)],
                                 1.0 / map.kappa[static_cast<std::size_t>(j)],
                                 g.has_edge(i, j));
        }
    }
    return sum;
}

} // namespace

namespace detail {

double best_angle_serial(int node, const std::vector<double>& candidates,
                         const EmbeddedMap& map, const Topology& g,
                         const std::vector<int>& reference) {
    return best_angle_impl(node, candidates, map, g, reference, false);
}

double best_angle_parallel(int node, const std::vector<double>& candidates,
                           const EmbeddedMap& map, const Topology& g,
                           const std::vector<int>& reference) {
    return best_angle_impl(node, candidates, map, g, reference, true);
}

} // namespace detail

double local_log_likelihood(int node, double theta_candidate, const EmbeddedMap& map,
                            const Topology& g, const std::vector<int>& reference) {
    LikelihoodScale s(map.params);
    double tc = normalize_angle(theta_candidate);
    double inv_kappa_node = 1.0 / map.kappa[static_cast<std::size_t>(node)];
    double sum = 0.0;
    for (int j : reference) {
        if (j == node) continue;
        sum += pair_log_term(s, tc, map.theta[static_cast<std::size_t>(j)], inv_kappa_node,
                             1.0 / map.kappa[static_cast<std::size_t>(j)], g.has_edge(node, j));
    }
    return sum;
}

double global_log_likelihood(const EmbeddedMap& map, const Topology& g) {
    LikelihoodScale s(map.params);
    double sum = 0.0;
    int n = static_cast<int>(g.node_count());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            sum += pair_log_term(s, map.theta[static_cast<std::size_t>(i)],
                                 map.theta[static_cast<std::size_t>(j)],
                                 1.0 / map.kappa[static_cast<std::size_t>(i)],
                                 1.0 / map.kappa[static_cast<std::size_t>(j)],
                                 g.has_edge(i, j));
    return sum;
}

void smh_kernel(const std::vector<int>& active, EmbeddedMap& map, const Topology& g,
                std::mt19937_64& rng, std::size_t moves) {
    if (active.empty()) return;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
    for (std::size_t m = 0; m < moves; ++m) {
        int node = active[pick(rng)];
        double theta_new = unif(rng) * kTwoPi;
        double ll_old = local_log_likelihood(node, map.theta[static_cast<std::size_t>(node)],
                                             map, g, active);
        double ll_new = local_log_likelihood(node, theta_new, map, g, active);
        double delta = ll_new - ll_old;
        if (delta > 0.0 || unif(rng) < std::exp(delta))
            map.theta[static_cast<std::size_t>(node)] = theta_new;
    }
}

void lmh_kernel(const std::vector<int>& active, EmbeddedMap& map, const Topology& g,
                int rounds, std::size_t grid_size) {
    if (active.size() < 2) return;
    if (grid_size == 0) grid_size = active.size();
    std::vector<double> grid = uniform_grid(grid_size);
    grid.push_back(0.0);  // slot for the node's current angle
    double ll_prev = active_log_likelihood(active, map, g);
    for (int round = 0; round < rounds; ++round) {
        for (int node : active) {
            grid.back() = map.theta[static_cast<std::size_t>(node)];
            map.theta[static_cast<std::size_t>(node)] =
                best_angle_impl(node, grid, map, g, active, true);
        }
        double ll = active_log_likelihood(active, map, g);
        if (std::fabs(ll - ll_prev) < 1e-4 * std::fabs(ll_prev)) break;
        ll_prev = ll;
    }
}

namespace {

// Shared implementation of both MLE wrappers; wrapper 1 is the special case
// where the kernel runs on every layer.
EmbeddedMap embed_core(const Topology& g, const ModelParams& params,
                       const LayerSchedule& schedule, int critical,
                       std::mt19937_64& rng, const EmbedOptions& opt) {
    schedule.validate();
    const int n = static_cast<int>(g.node_count());
    if (n == 0) throw std::invalid_argument("embed: empty graph");
    for (int i = 0; i < n; ++i)
        if (g.degree(i) == 0)
            throw std::invalid_argument("embed: node " + std::to_string(g.id_of(i)) +
                                        " has degree 0");

    EmbeddedMap map;
    map.params = params;
    map.ids = g.ids();
    map.kappa.resize(static_cast<std::size_t>(n));
    map.theta.assign(static_cast<std::size_t>(n), 0.0);
    map.r.resize(static_cast<std::size_t>(n));
    map.provenance.assign(static_cast<std::size_t>(n), Provenance::InitialGuess);
    for (int i = 0; i < n; ++i)
        map.kappa[static_cast<std::size_t>(i)] =
            mle_kappa(g.degree(i), params.gamma, params.beta, params.k_bar, opt.alpha_fs);

    const int k1 = schedule.thresholds.front();
    double sqrt_n = std::sqrt(static_cast<double>(n));
    if (static_cast<double>(k1) < 0.5 * sqrt_n)
        std::fprintf(stderr, "embed: warning: top threshold k1=%d below sqrt(N)/2=%.1f\n",
                     k1, 0.5 * sqrt_n);

    // Working graph: links among the top layer removed for the whole run.
    std::vector<std::pair<int, int>> kept;
    kept.reserve(g.edge_count());
    for (auto [a, b] : g.edge_list())
        if (!(g.degree(a) >= k1 && g.degree(b) >= k1))
            kept.emplace_back(g.id_of(a), g.id_of(b));
    Topology g_work = Topology::from_edges_and_nodes(g.ids(), kept);

    std::vector<char> active_flag(static_cast<std::size_t>(n), 0);
    std::vector<int> active;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        if (g.degree(i) >= k1) {
            active_flag[static_cast<std::size_t>(i)] = 1;
            active.push_back(i);
            map.theta[static_cast<std::size_t>(i)] = unif(rng) * kTwoPi;
        }
    }

    GraphStats stats = compute_stats(g);
    int lmh_rounds = opt.lmh_rounds > 0
                         ? opt.lmh_rounds
                         : static_cast<int>(std::ceil(stats.k_bar_obs));

    auto run_kernel = [&]() {
        if (opt.kernel == KernelKind::LMH) {
            lmh_kernel(active, map, g_work, lmh_rounds, opt.grid_size);
        } else {
            std::size_t moves = static_cast<std::size_t>(
                opt.smh_move_factor * static_cast<double>(active.size()) *
                static_cast<double>(active.size()));
            smh_kernel(active, map, g_work, rng, moves);
        }
        for (int i : active)
            map.provenance[static_cast<std::size_t>(i)] = Provenance::KernelInferred;
    };

    // Newcomers are visited in descending degree order so the better
    // constrained nodes extend the reference frame for the rest.
    std::vector<int> by_degree(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) by_degree[static_cast<std::size_t>(i)] = i;
    std::sort(by_degree.begin(), by_degree.end(), [&](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return g.id_of(a) < g.id_of(b);
    });

    for (std::size_t layer = 1; layer < schedule.thresholds.size(); ++layer) {
        int kt = schedule.thresholds[layer];
        for (int i : by_degree) {
            if (active_flag[static_cast<std::size_t>(i)] || g.degree(i) < kt) continue;
            int links = 0;
            for (int nb : g_work.neighbors(i))
                if (active_flag[static_cast<std::size_t>(nb)]) ++links;
            if (links < 2) continue;  // postponed; re-checked next layer
            std::size_t grid_size = opt.grid_size ? opt.grid_size : active.size();
            std::vector<double> grid = uniform_grid(std::max<std::size_t>(grid_size, 1));
            map.theta[static_cast<std::size_t>(i)] =
                best_angle_impl(i, grid, map, g_work, active, true);
            active_flag[static_cast<std::size_t>(i)] = 1;
            active.push_back(i);
        }
        if (kt >= critical) run_kernel();
        if (opt.log_progress)
            std::fprintf(stderr, "embed: layer k=%d active=%zu\n", kt, active.size());
    }

    std::vector<char> placed = active_flag;
    place_low_degree(g, map, placed, opt.alpha_fs);

    for (int i = 0; i < n; ++i)
        map.r[static_cast<std::size_t>(i)] =
            kappa_to_radius(map.kappa[static_cast<std::size_t>(i)], params);
    return map;
}

} // namespace

EmbeddedMap embed_wrapper1(const Topology& g, const ModelParams& params,
                           const LayerSchedule& schedule, std::mt19937_64& rng,
                           const EmbedOptions& options) {
    return embed_core(g, params, schedule, schedule.thresholds.back(), rng, options);
}

EmbeddedMap embed_wrapper2(const Topology& g, const ModelParams& params,
                           const LayerSchedule& schedule, std::mt19937_64& rng,
                           const EmbedOptions& options) {
    if (std::find(schedule.thresholds.begin(), schedule.thresholds.end(),
                  schedule.critical_threshold) == schedule.thresholds.end())
        throw std::invalid_argument("embed_wrapper2: critical threshold not in schedule");
    return embed_core(g, params, schedule, schedule.critical_threshold, rng, options);
}

void place_low_degree(const Topology& g, EmbeddedMap& map, std::vector<char>& placed,
                      double alpha_fs) {
    const int n = static_cast<int>(g.node_count());
    bool progress = true;
    std::size_t remaining = 0;
    for (int i = 0; i < n; ++i)
        if (!placed[static_cast<std::size_t>(i)]) ++remaining;
    while (remaining > 0 && progress) {
        progress = false;
        for (int i = 0; i < n; ++i) {
            if (placed[static_cast<std::size_t>(i)]) continue;
            int best = -1;
            for (int nb : g.neighbors(i)) {
                if (!placed[static_cast<std::size_t>(nb)]) continue;
                if (best < 0 || g.degree(nb) > g.degree(best) ||
                    (g.degree(nb) == g.degree(best) && g.id_of(nb) < g.id_of(best)))
                    best = nb;
            }
            if (best < 0) continue;
            // A deterministic sub-1e-4 radian offset keeps siblings copied
            // from the same neighbor geometrically distinguishable; exactly
            // coincident coordinates starve greedy forwarding of gradient.
            double offset = 1e-7 * static_cast<double>(1 + g.id_of(i) % 1024);
            map.theta[static_cast<std::size_t>(i)] =
                normalize_angle(map.theta[static_cast<std::size_t>(best)] + offset);
            map.kappa[static_cast<std::size_t>(i)] =
                mle_kappa(g.degree(i), map.params.gamma, map.params.beta, map.params.k_bar,
                          alpha_fs);
            map.r[static_cast<std::size_t>(i)] =
                kappa_to_radius(map.kappa[static_cast<std::size_t>(i)], map.params);
            map.provenance[static_cast<std::size_t>(i)] = Provenance::NeighborCopied;
            placed[static_cast<std::size_t>(i)] = 1;
            --remaining;
            progress = true;
        }
    }
    if (remaining > 0) {
        for (int i = 0; i < n; ++i)
            if (!placed[static_cast<std::size_t>(i)])
                throw std::runtime_error("place_low_degree: node " +
                                         std::to_string(g.id_of(i)) +
                                         " disconnected from the embedded core");
    }
}

EmbeddedMap incremental_embed(const EmbeddedMap& existing, const Topology& g_new,
                              const std::vector<int>& new_node_ids,
                              const EmbedOptions& options) {
    const int n = static_cast<int>(g_new.node_count());
    EmbeddedMap map;
    map.params = existing.params;
    map.ids = g_new.ids();
    map.kappa.assign(static_cast<std::size_t>(n), 0.0);
    map.theta.assign(static_cast<std::size_t>(n), 0.0);
    map.r.assign(static_cast<std::size_t>(n), 0.0);
    map.provenance.assign(static_cast<std::size_t>(n), Provenance::InitialGuess);

    std::vector<char> is_new(static_cast<std::size_t>(n), 0);
    for (int id : new_node_ids) {
        if (!g_new.has_node(id))
            throw std::invalid_argument("incremental_embed: new node " + std::to_string(id) +
                                        " missing from the topology");
        is_new[static_cast<std::size_t>(g_new.index_of(id))] = 1;
    }

    // Old coordinates transfer bit-identically by node id.
    std::unordered_map<int, std::size_t> old_pos;
    old_pos.reserve(existing.ids.size());
    for (std::size_t k = 0; k < existing.ids.size(); ++k) old_pos[existing.ids[k]] = k;
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    std::vector<int> placed_list;
    for (int i = 0; i < n; ++i) {
        if (is_new[static_cast<std::size_t>(i)]) continue;
        auto it = old_pos.find(g_new.id_of(i));
        if (it == old_pos.end())
            throw std::invalid_argument("incremental_embed: node " +
                                        std::to_string(g_new.id_of(i)) +
                                        " is neither new nor in the existing map");
        map.kappa[static_cast<std::size_t>(i)] = existing.kappa[it->second];
        map.theta[static_cast<std::size_t>(i)] = existing.theta[it->second];
        map.r[static_cast<std::size_t>(i)] = existing.r[it->second];
        map.provenance[static_cast<std::size_t>(i)] = existing.provenance[it->second];
        placed[static_cast<std::size_t>(i)] = 1;
        placed_list.push_back(i);
    }

    // New nodes in descending degree order so later ones can reference
    // earlier ones; ties by lower id.
    std::vector<int> order;
    for (int i = 0; i < n; ++i)
        if (is_new[static_cast<std::size_t>(i)]) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g_new.degree(a) != g_new.degree(b)) return g_new.degree(a) > g_new.degree(b);
        return g_new.id_of(a) < g_new.id_of(b);
    });

    std::vector<int> deferred;
    for (int i : order) {
        map.kappa[static_cast<std::size_t>(i)] =
            mle_kappa(g_new.degree(i), map.params.gamma, map.params.beta, map.params.k_bar,
                      options.alpha_fs);
        map.r[static_cast<std::size_t>(i)] =
            kappa_to_radius(map.kappa[static_cast<std::size_t>(i)], map.params);
        int links = 0;
        for (int nb : g_new.neighbors(i))
            if (placed[static_cast<std::size_t>(nb)]) ++links;
        if (links == 0) {
            deferred.push_back(i);
            continue;
        }
        std::size_t grid_size = options.grid_size ? options.grid_size : placed_list.size();
        std::vector<double> grid = uniform_grid(std::max<std::size_t>(grid_size, 1));
        map.theta[static_cast<std::size_t>(i)] =
            best_angle_impl(i, grid, map, g_new, placed_list, true);
        placed[static_cast<std::size_t>(i)] = 1;
        placed_list.push_back(i);
    }
    if (!deferred.empty()) place_low_degree(g_new, map, placed, options.alpha_fs);

    // One-shot angles sit on shared grid points; a deterministic
    // sub-1e-4 radian offset keeps newcomers geometrically
    // distinguishable for greedy forwarding.
    for (int i : order) {
        if (std::find(deferred.begin(), deferred.end(), i) != deferred.end()) continue;
        double offset = 1e-7 * static_cast<double>(1 + g_new.id_of(i) % 1024);
        map.theta[static_cast<std::size_t>(i)] =
            normalize_angle(map.theta[static_cast<std::size_t>(i)] + offset);
    }
    return map;
}

std::vector<ConnectionCurveBin> empirical_connection_curve(const EmbeddedMap& map,
                                                           const Topology& g,
                                                           std::size_t bin_count) {
    if (bin_count == 0) throw std::invalid_argument("empirical_connection_curve: zero bins");
    const int n = static_cast<int>(g.node_count());
    const double x_max = 2.0 * map.params.disc_radius;
    std::vector<std::size_t> pair_total(bin_count, 0), pair_conn(bin_count, 0);
    for (int i = 0; i < n; ++i) {
        PolarCoordinate a{map.r[static_cast<std::size_t>(i)], map.theta[static_cast<std::size_t>(i)]};
        for (int j = i + 1; j < n; ++j) {
            PolarCoordinate b{map.r[static_cast<std::size_t>(j)],
                              map.theta[static_cast<std::size_t>(j)]};
            double x = hyperbolic_distance(a, b);
            auto bin = static_cast<std::size_t>(x / x_max * static_cast<double>(bin_count));
            if (bin >= bin_count) bin = bin_count - 1;
            ++pair_total[bin];
            if (g.has_edge(i, j)) ++pair_conn[bin];
        }
    }
    std::vector<ConnectionCurveBin> out(bin_count);
    for (std::size_t b = 0; b < bin_count; ++b) {
        out[b].x_low = x_max * static_cast<double>(b) / static_cast<double>(bin_count);
        out[b].x_high = x_max * static_cast<double>(b + 1) / static_cast<double>(bin_count);
        out[b].pairs = pair_total[b];
        out[b].probability = pair_total[b]
                                 ? static_cast<double>(pair_conn[b]) /
                                       static_cast<double>(pair_total[b])
                                 : 0.0;
    }
    return out;
}

EmbeddedMap embed_with_recipe(const Topology& g, const EmbedRecipe& recipe,
                              std::uint64_t seed) {
    auto rng = make_engine(seed, 0x656d626564);  // "embed"
    if (recipe.use_wrapper2)
        return embed_wrapper2(g, recipe.params, recipe.schedule, rng, recipe.options);
    return embed_wrapper1(g, recipe.params, recipe.schedule, rng, recipe.options);
}

} // namespace hypermap
