#pragma once

#include "sysgeo/geometry.hpp"
#include "sysgeo/systole.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>

// The two L2 projections (isometry average and rank-one projection onto the
// optimal profile), the Pu integral identity, the projection inequality, the
// decreasing-function check, and the defect reports.

namespace sysgeo {

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

struct AverageConfig {
    int out_samples = 2048;   // sample count of the returned profile on [0, beta]
    double x_tol = 1e-9;      // tolerance of each x-average
};

/// Haar average over the isometry group, factored as: uniform x-average over
/// [0, pi), then symmetrization in y, then (Klein only) averaging with the
/// 2*beta shift. Input is a positive function of (x, y), periodic under the
/// deck group; output is an invariant sampled profile on [0, beta].
Profile isometry_average(const SurfaceSpec& surface,
                         const std::function<double(double, double)>& phi2d,
                         const AverageConfig& cfg = {});

/// L2-orthogonal projection onto the ray spanned by `target`:
/// c = (phi, target) / (target, target); returns (c, c * target).
std::pair<double, Profile> rank1_project(const SurfaceSpec& surface, const Profile& phi,
                                         const Profile& target);

// ---------------------------------------------------------------------------
// Pu identity and projection inequality
// ---------------------------------------------------------------------------

struct PuConfig {
    int curve_vertices = 512;  // polyline resolution of each gamma_tau
    int panels = 256;          // composite panels of the substituted tau integral
};

/// |LHS - RHS| of the Pu integral identity for an invariant Mobius profile:
///   LHS = int_0^beta phi phi0 dy,
///   RHS = (1/pi) int_0^beta L(gamma_tau) w(tau) dtau,
/// with w(tau) = phi0(tau)^2 tanh(tau) / sqrt(phi0(tau)^2 - phi0(beta)^2).
/// Curve lengths come from pu_curve + curve_length; the endpoint singularity
/// of w is removed by the substitution tau = beta sin(u).
double pu_equality_residual(double beta, const Profile& phi, const PuConfig& cfg = {});

/// Rescales phi so the numerical systole equals pi, then returns
/// int_0^beta phi phi_opt dy - int_0^beta phi_opt^2 dy. Nonnegative up to
/// the discretization error of the systole estimate.
double projection_inequality_margin(const SurfaceSpec& surface, const Profile& phi,
                                    const GridConfig& grid);
/// Same, reusing a precomputed systole estimate for phi.
double projection_inequality_margin(const SurfaceSpec& surface, const Profile& phi,
                                    const SystoleEstimate& est);

// ---------------------------------------------------------------------------
// Decreasing-function check
// ---------------------------------------------------------------------------

enum class LemmaCheck { Holds, Fails, PremiseFailed };

/// For sampled h (positive, non-increasing) and g on a shared grid starting
/// at 0: checks that every running integral int_0^z h g dominates
/// h(z) int_0^z g. The running integrals use the midpoint-in-h,
/// trapezoid-in-g product rule, under which the discrete statement is an
/// exact theorem whenever the grid premise holds. Premise violations (h not
/// positive/decreasing, or a negative running integral of h g) yield
/// PremiseFailed, distinct from Fails.
LemmaCheck decreasing_lemma_check(std::span<const double> ys, std::span<const double> hs,
                                  std::span<const double> gs, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Defect reports
// ---------------------------------------------------------------------------

struct VarianceForm {
    double expected_h;  // mean of h = phi/phi_opt under the optimal measure
    double var_h;
    double area_opt;
};

struct DefectReport {
    SurfaceKind surface;
    double beta;
    double area_g;
    double sys_g;
    double alpha_g;
    double alpha_conformal_opt;
    double residual_norm_sq;   // |phi - P(phi)|^2 in L2
    double lhs_defect;         // residual_norm_sq / sys_g^2
    double rhs_defect;         // alpha_g - alpha_conformal_opt
    VarianceForm variance_form;
    std::optional<double> bavard_gap;  // alpha_conformal_opt - 2 sqrt(2)/pi, Klein only
};

/// Full report for an invariant positive profile. The systole is estimated
/// numerically; the residual comes from the rank-one projection onto the
/// optimal profile; the variance form uses the probability measure with
/// density phi_opt^2 / area_opt.
DefectReport defect_report(const SurfaceSpec& surface, const Profile& phi,
                           const GridConfig& grid);
DefectReport defect_report(const SurfaceSpec& surface, const Profile& phi,
                           const SystoleEstimate& est);

/// Flat JSON object with the exact report field names.
std::string defect_report_json(const DefectReport& report, int indent = 2);

}  // namespace sysgeo
