#include "hypermap/geometry.hpp"

#include <algorithm>

namespace hypermap {

ModelParams ModelParams::make(double n_model, double k_bar, double gamma, double beta) {
    if (!(n_model > 0) || !(k_bar > 0))
        throw std::domain_error("ModelParams: n_model and k_bar must be positive");
    if (!(gamma > 2.0))
        throw std::domain_error("ModelParams: gamma must exceed 2");
    if (!(beta > 1.0))
        throw std::domain_error("ModelParams: beta must exceed 1 for finite mu");
    ModelParams p;
    p.n_model = n_model;
    p.k_bar = k_bar;
    p.gamma = gamma;
    p.beta = beta;
    p.kappa0 = k_bar * (gamma - 2.0) / (gamma - 1.0);
    p.mu = beta * std::sin(M_PI / beta) / (kTwoPi * k_bar);
    p.disc_radius = 2.0 * std::log(n_model / (M_PI * p.mu * p.kappa0 * p.kappa0));
    return p;
}

double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t;
}

double angular_separation(double theta_i, double theta_j) {
    if (!std::isfinite(theta_i) || !std::isfinite(theta_j))
        throw std::domain_error("angular_separation: non-finite input");
    double a = normalize_angle(theta_i);
    double b = normalize_angle(theta_j);
    return M_PI - std::fabs(M_PI - std::fabs(a - b));
}

double hyperbolic_distance(const PolarCoordinate& a, const PolarCoordinate& b) {
    if (!std::isfinite(a.r) || !std::isfinite(b.r))
        throw std::domain_error("hyperbolic_distance: non-finite radius");
    double dtheta = angular_separation(a.theta, b.theta);
    double s = std::sin(0.5 * dtheta);
    double arg = std::cosh(a.r - b.r) + 2.0 * std::sinh(a.r) * std::sinh(b.r) * s * s;
    return std::acosh(std::max(arg, 1.0));
}

double fermi_connection_probability(double x, double disc_radius, double temperature) {
    if (!std::isfinite(x) || x < 0)
        throw std::domain_error("fermi_connection_probability: invalid distance");
    if (!(temperature > 0))
        throw std::domain_error("fermi_connection_probability: T must be positive; "
                                "use fermi_connection_probability_t0 for the T=0 limit");
    return 1.0 / (1.0 + std::exp((x - disc_radius) / (2.0 * temperature)));
}

double fermi_connection_probability_t0(double x, double disc_radius) {
    if (x < disc_radius) return 1.0;
    if (x > disc_radius) return 0.0;
    return 0.5;
}

double effective_distance_s1(double kappa_i, double kappa_j, double delta_theta,
                             const ModelParams& params) {
    if (!(kappa_i > 0) || !(kappa_j > 0))
        throw std::domain_error("effective_distance_s1: kappas must be positive");
    return params.n_model * params.k_bar * delta_theta /
           (params.beta * std::sin(M_PI / params.beta) * kappa_i * kappa_j);
}

double s1_connection_probability(double chi, double beta) {
    if (chi <= 0) return 1.0;
    return 1.0 / (1.0 + std::pow(chi, beta));
}

double kappa_to_radius(double kappa, const ModelParams& params, bool* clamped) {
    if (clamped) *clamped = false;
    if (kappa < params.kappa0) {
        if (clamped) *clamped = true;
        return params.disc_radius;
    }
    return params.disc_radius - 2.0 * std::log(kappa / params.kappa0);
}

double radius_to_kappa(double r, const ModelParams& params) {
    return params.kappa0 * std::exp(0.5 * (params.disc_radius - r));
}

double great_circle_angle(const GeoCoordinate& g1, const GeoCoordinate& g2) {
    double phi1 = g1.lat * M_PI / 180.0;
    double phi2 = g2.lat * M_PI / 180.0;
    double dl = (g2.lon - g1.lon) * M_PI / 180.0;
    double c = std::sin(phi1) * std::sin(phi2) + std::cos(phi1) * std::cos(phi2) * std::cos(dl);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double hyperbolic_distance_3d(double r1, const GeoCoordinate& g1,
                              double r2, const GeoCoordinate& g2) {
    double dsigma = great_circle_angle(g1, g2);
    double s = std::sin(0.5 * dsigma);
    double arg = std::cosh(r1 - r2) + 2.0 * std::sinh(r1) * std::sinh(r2) * s * s;
    return std::acosh(std::max(arg, 1.0));
}

} // namespace hypermap
