#include "hypermap/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hypermap/embedder.hpp"
#include "hypermap/generator.hpp"
#include "hypermap/rng.hpp"
#include "hypermap/router.hpp"

namespace hypermap {

double estimate_gamma(const std::vector<int>& degrees, int k_min_fit) {
    double log_sum = 0.0;
    std::size_t n_tail = 0;
    for (int k : degrees) {
        if (k >= k_min_fit) {
            log_sum += std::log(static_cast<double>(k) / (k_min_fit - 0.5));
            ++n_tail;
        }
    }
    if (n_tail < 100)
        throw std::invalid_argument("estimate_gamma: fewer than 100 tail samples");
    if (log_sum <= 0.0)
        throw std::invalid_argument("estimate_gamma: degenerate tail (no spread above cutoff)");
    double gamma = 1.0 + static_cast<double>(n_tail) / log_sum;
    return std::round(gamma * 100.0) / 100.0;
}

namespace {

// Regularized lower incomplete gamma P(s,x) by series, s > 0, x < s+1.
double gamma_p_series(double s, double x) {
    double ap = s;
    double sum = 1.0 / s;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Regularized upper incomplete gamma Q(s,x) by continued fraction, x >= s+1.
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

double upper_gamma_positive(double s, double x) {
    if (x < s + 1.0)
        return std::tgamma(s) * (1.0 - gamma_p_series(s, x));
    return std::tgamma(s) * gamma_q_cf(s, x);
}

} // namespace

double incomplete_gamma_upper(double s, double x) {
    if (!(x > 0.0))
        throw std::domain_error("incomplete_gamma_upper: x must be positive");
    if (s > 0.0) return upper_gamma_positive(s, x);
    // Recurrence Gamma(s,x) = (Gamma(s+1,x) - x^s e^-x) / s until s+k > 0.
    int steps = static_cast<int>(std::floor(-s)) + 1;
    double shifted = upper_gamma_positive(s + steps, x);
    for (int k = steps - 1; k >= 0; --k) {
        double sk = s + k;
        shifted = (shifted - std::pow(x, sk) * std::exp(-x)) / sk;
    }
    return shifted;
}

FiniteSizeSolution solve_finite_size(double n_obs, double k_bar_obs, double k_max_obs,
                                     double gamma) {
    if (!(gamma > 2.0 && gamma < 3.0))
        throw std::invalid_argument("solve_finite_size: gamma must lie in (2,3)");
    if (!(k_max_obs > k_bar_obs && k_bar_obs > 1.0))
        throw std::invalid_argument("solve_finite_size: require k_max_obs > k_bar_obs > 1");

    FiniteSizeSolution s;
    double alpha = 1.0, p0 = 0.0;
    double k_bar = k_bar_obs, kappa0 = 0.0, kappa_c = k_max_obs;
    double prev_alpha_delta = 0.0;
    const int max_iter = 10000;
    int it = 0;
    for (; it < max_iter; ++it) {
        double k_bar_n = (1.0 - p0) * k_bar_obs / (alpha * alpha);
        double kappa0_n = k_bar_n * (gamma - 2.0) / (gamma - 1.0);
        double kappa_c_n = k_max_obs / alpha;
        double alpha_target = 1.0 - std::pow(kappa0_n / kappa_c_n, gamma - 2.0);
        double alpha_delta = alpha_target - alpha;
        double alpha_n = alpha_target;
        if (alpha_delta * prev_alpha_delta < 0.0)
            alpha_n = alpha + 0.5 * alpha_delta;  // damp on oscillation
        prev_alpha_delta = alpha_delta;
        if (!(alpha_n > 0.0 && alpha_n <= 1.0))
            throw std::runtime_error(
                "solve_finite_size: alpha left (0,1] at iteration " + std::to_string(it) +
                " (value " + std::to_string(alpha_n) + ")");
        double ak0 = alpha_n * kappa0_n;
        double p0_n = (gamma - 1.0) * std::pow(ak0, gamma - 1.0) *
                      incomplete_gamma_upper(1.0 - gamma, ak0);

        double max_rel = 0.0;
        auto rel = [](double a, double b) {
            return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
        };
        max_rel = std::max({rel(k_bar, k_bar_n), rel(kappa0, kappa0_n),
                            rel(kappa_c, kappa_c_n), rel(alpha, alpha_n), rel(p0, p0_n)});
        k_bar = k_bar_n;
        kappa0 = kappa0_n;
        kappa_c = kappa_c_n;
        alpha = alpha_n;
        p0 = p0_n;
        if (max_rel < 1e-8) break;
    }
    if (it == max_iter)
        throw std::runtime_error("solve_finite_size: no convergence after 10000 iterations");

    s.k_bar = k_bar;
    s.kappa0 = kappa0;
    s.kappa_c = kappa_c;
    s.alpha_fs = alpha;
    s.p_zero = p0;
    s.n_model = n_obs / (1.0 - p0);
    s.iterations = it + 1;
    return s;
}

BetaEstimate estimate_beta(const Topology& g, const std::vector<double>& beta_grid,
                           const BetaEstimateBudget& budget, std::uint64_t seed) {
    if (beta_grid.empty())
        throw std::invalid_argument("estimate_beta: empty grid");
    GraphStats obs = compute_stats(g);
    std::vector<int> degrees;
    degrees.reserve(g.node_count());
    for (int i = 0; i < static_cast<int>(g.node_count()); ++i)
        degrees.push_back(g.degree(i));
    double gamma;
    try {
        gamma = estimate_gamma(degrees);
    } catch (const std::invalid_argument&) {
        gamma = 2.5;  // toy graphs without a power-law tail
    }
    gamma = std::clamp(gamma, 2.05, 2.95);

    BetaEstimate out;
    std::size_t gen_n = std::min(budget.generation_n, g.node_count());
    for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
        BetaDiagnostic d;
        d.beta = beta_grid[bi];
        double cl_sum = 0.0;
        for (int s = 0; s < budget.seeds_per_beta; ++s) {
            auto net = generate_s1(gen_n, obs.k_bar_obs, gamma, d.beta,
                                   substream_seed(seed, 1000 + bi * 17 + static_cast<std::size_t>(s)));
            cl_sum += compute_stats(net.topology).mean_clustering;
        }
        d.synthetic_clustering = cl_sum / budget.seeds_per_beta;
        d.survived_stage1 = beta_grid.size() == 1 ||
                            std::fabs(d.synthetic_clustering - obs.mean_clustering) <=
                                budget.clustering_band;
        out.table.push_back(d);
    }
    bool any = false;
    for (auto& d : out.table) any = any || d.survived_stage1;
    if (!any) {
        std::string msg = "estimate_beta: no beta passed the clustering check; gaps:";
        for (auto& d : out.table)
            msg += " beta=" + std::to_string(d.beta) + " C=" +
                   std::to_string(d.synthetic_clustering);
        msg += " observed C=" + std::to_string(obs.mean_clustering);
        throw std::runtime_error(msg);
    }

    FiniteSizeSolution fs;
    bool have_fs = true;
    try {
        fs = solve_finite_size(static_cast<double>(obs.n_obs), obs.k_bar_obs,
                               obs.k_max_obs, gamma);
    } catch (const std::exception&) {
        have_fs = false;
    }

    double best_ps = -1.0;
    std::size_t best = 0;
    for (std::size_t bi = 0; bi < out.table.size(); ++bi) {
        auto& d = out.table[bi];
        if (!d.survived_stage1) continue;
        EmbedRecipe recipe;
        double n_model = have_fs ? fs.n_model : static_cast<double>(obs.n_obs);
        double k_bar = have_fs ? fs.k_bar : obs.k_bar_obs;
        recipe.params = ModelParams::make(n_model, k_bar, gamma, d.beta);
        recipe.schedule = default_schedule(g, budget.critical_k);
        recipe.options.alpha_fs = have_fs ? fs.alpha_fs : 1.0;
        auto map = embed_with_recipe(g, recipe, substream_seed(seed, 2000 + bi));
        PairSpec pairs;
        pairs.all_pairs = false;
        pairs.sample_size = budget.route_pairs;
        auto report = evaluate_routing(g, map, pairs, substream_seed(seed, 3000 + bi));
        d.success_ratio = report.success_ratio;
        if (report.success_ratio > best_ps) {
            best_ps = report.success_ratio;
            best = bi;
        }
    }
    out.beta = out.table[best].beta;
    return out;
}

} // namespace hypermap
