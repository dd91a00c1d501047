#pragma once

#include "sysgeo/geometry.hpp"

#include <optional>

// Closed-form optimal conformal factors and their systole/area/systolic-area
// formulas, the Pu curve family, and the spherical chart that exhibits the
// phi0 metric as a band on the round sphere.

namespace sysgeo {

struct ThresholdConstants {
    double beta0;  // ln(1 + sqrt(2)), vertical-curve saturation width
    double beta1;  // ln(2 + sqrt(3)), onset of the thick regime
};

ThresholdConstants constants();

/// 2 e^y / (1 + e^{2y}) = sech(y): even, decreasing for y >= 0.
double phi0(double y);

/// Antiderivative of phi0 vanishing at 0 (the Gudermannian,
/// asin(tanh y) = 2 atan(e^y) - pi/2).
double gudermannian(double y);

Profile phi0_profile(double beta);

/// max(phi0(y), 1/2) on [0, beta].
Profile mobius_optimal(double beta);

/// Unique s in (0, beta) with int_0^s phi0 + (beta - s) phi0(s) = pi/4.
/// Requires pi/4 < beta < beta0. Solved by bisection on the strictly
/// decreasing left-hand side, using the analytic antiderivative.
double solve_s_beta(double beta);

/// The four-case optimal Klein profile; continuous on [0, beta], with
/// int_0^beta = pi/4 for beta <= beta0 and >= pi/4 beyond.
Profile klein_optimal(double beta);

enum class OptimalCase { Thin, RoundFlatThin, Round, RoundFlatThick, Thick };
const char* to_string(OptimalCase c);

struct OptimalSummary {
    double beta;
    SurfaceKind kind;
    OptimalCase case_tag;
    std::optional<double> s_beta;
    double sys;        // pi for every optimal metric
    double area;
    double alpha_sys;  // area / sys^2
};

/// Closed-form summary of the optimal metric in the conformal class of the
/// given surface. Boundary widths are assigned to the lower-numbered case;
/// both branch formulas agree there.
OptimalSummary optimal_summary(const SurfaceSpec& surface);

/// The Pu curve gamma_tau: for tau = 0 the straight lift (0,0)->(pi,0); for
/// tau > 0 the polyline sampling
///   x(t) = pi/2 + int_0^t phi0(tau)/sqrt(phi0(s)^2 - phi0(tau)^2) ds,
///   y(t) = -t,  t in [-tau, tau],
/// with deck word (1,0). The endpoint singularity of the integrand is
/// removed by the substitution s = tau sin(u); vertices are uniform in u.
CurvePolyline pu_curve(double beta, double tau, int n_vertices);

/// Psi(F(x,y)) with F(x,y) = (x, asin(tanh y)) and Psi the unit-sphere
/// angles chart. Defined for (x,y) in [-pi/2,pi/2] x [-beta,beta]; the image
/// latitude is bounded by asin(tanh beta).
Point3 sphere_chart(double beta, const Point2& p);

}  // namespace sysgeo
