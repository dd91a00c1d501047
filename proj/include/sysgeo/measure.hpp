#pragma once

#include "sysgeo/geometry.hpp"

#include <functional>
#include <span>

// Lengths, Riemannian areas and L2 inner products of invariant profiles.
// The quadrature is adaptive Simpson with interval bisection; integrands
// with kinks are split at the known knot locations first so no panel ever
// straddles a kink.

namespace sysgeo {

enum class EndpointSingularity { None, InverseSqrt };

struct QuadratureConfig {
    double abs_tol = 1e-10;
    int max_subdivisions = 24;  // bisection depth per panel
    EndpointSingularity endpoint_singularity = EndpointSingularity::None;
};

/// Default tolerances: 1e-10 for closed forms, 1e-8 for sampled profiles.
QuadratureConfig default_quadrature(const Profile& p);
QuadratureConfig default_quadrature(const Profile& p, const Profile& q);

/// Adaptive Simpson on [a,b]. With EndpointSingularity::InverseSqrt the
/// interval is reparametrized by a sine substitution that removes an
/// inverse-square-root singularity at either endpoint; the integrand is
/// never evaluated at a or b in that mode.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

/// Same, splitting [a,b] at the given knots. The tolerance is distributed
/// over the pieces proportionally to their length.
double integrate_with_knots(const std::function<double(double)>& f, double a, double b,
                            std::span<const double> knots, const QuadratureConfig& cfg = {});

/// (f,h) = w * int_0^beta f h dy with w = 2*pi (Mobius) or 4*pi (Klein).
/// Requires matching betas.
double l2_inner(const SurfaceSpec& surface, const Profile& f, const Profile& h);
double l2_inner(const SurfaceSpec& surface, const Profile& f, const Profile& h,
                const QuadratureConfig& cfg);

/// area = squared L2 norm of the conformal factor.
double area(const SurfaceSpec& surface, const Profile& profile);
double area(const SurfaceSpec& surface, const Profile& profile, const QuadratureConfig& cfg);

/// w * int_0^beta f dy for a raw integrand (not necessarily positive);
/// used for projection residuals. Knots are split points in (0, beta).
double weighted_integral(const SurfaceSpec& surface, const std::function<double(double)>& f,
                         std::span<const double> knots, const QuadratureConfig& cfg = {});

/// Length of a lifted polyline under the metric profile^2 * flat: the sum
/// over segments of int phi(curve(t)) |curve'(t)| dt. Segments are split at
/// fold lines and at profile knot crossings before quadrature.
double curve_length(const SurfaceSpec& surface, const Profile& profile,
                    const CurvePolyline& curve);
double curve_length(const SurfaceSpec& surface, const Profile& profile,
                    const CurvePolyline& curve, const QuadratureConfig& cfg);

}  // namespace sysgeo
