#pragma once

#include <cmath>
#include <stdexcept>

namespace hypermap {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct PolarCoordinate {
    double r = 0.0;       // hyperbolic radial coordinate, >= 0
    double theta = 0.0;   // radians in [0, 2*pi)
};

struct GeoCoordinate {
    double lat = 0.0;     // degrees in [-90, 90]
    double lon = 0.0;     // degrees in [-180, 180]
};

// Parameter bundle shared by generator, embedder, and router. The derived
// members (mu, kappa0, disc_radius) are fixed by (n_model, k_bar, gamma, beta).
struct ModelParams {
    double n_model = 0.0;
    double k_bar = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double mu = 0.0;
    double kappa0 = 0.0;
    double disc_radius = 0.0;

    static ModelParams make(double n_model, double k_bar, double gamma, double beta);
};

// theta_i, theta_j in radians (any finite value); result in [0, pi].
double angular_separation(double theta_i, double theta_j);

// Normalizes an angle into [0, 2*pi).
double normalize_angle(double theta);

// Hyperbolic law of cosines, evaluated in the cancellation-free form
// arccosh(cosh(r_a - r_b) + 2 sinh(r_a) sinh(r_b) sin^2(dtheta/2)).
double hyperbolic_distance(const PolarCoordinate& a, const PolarCoordinate& b);

// Fermi-Dirac connection probability, T > 0. For the T = 0 limit use
// fermi_connection_probability_t0.
double fermi_connection_probability(double x, double disc_radius, double temperature);

// Step-function limit at T = 0: 1 for x < R, 0.5 at x = R, 0 beyond.
double fermi_connection_probability_t0(double x, double disc_radius);

// Effective S1 distance chi = N k_bar dtheta / (beta sin(pi/beta) kappa_i kappa_j).
double effective_distance_s1(double kappa_i, double kappa_j, double delta_theta,
                             const ModelParams& params);

// p(chi) = 1 / (1 + chi^beta).
double s1_connection_probability(double chi, double beta);

// r = R - 2 ln(kappa / kappa0). Inputs below kappa0 clamp to R; *clamped is
// set when provided so file loaders can report the diagnostic.
double kappa_to_radius(double kappa, const ModelParams& params, bool* clamped = nullptr);

// Inverse of kappa_to_radius.
double radius_to_kappa(double r, const ModelParams& params);

// Central angle between two points on the sphere, radians in [0, pi].
double great_circle_angle(const GeoCoordinate& g1, const GeoCoordinate& g2);

// H3 analogue of hyperbolic_distance with the great-circle angle in place
// of the planar angular separation.
double hyperbolic_distance_3d(double r1, const GeoCoordinate& g1,
                              double r2, const GeoCoordinate& g2);

} // namespace hypermap
