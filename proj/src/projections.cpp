#include "sysgeo/projections.hpp"

#include "sysgeo/measure.hpp"
#include "sysgeo/optimal.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sysgeo {

namespace {

constexpr double kPi = std::numbers::pi;

Profile optimal_profile(const SurfaceSpec& surface) {
    return surface.kind == SurfaceKind::Mobius ? mobius_optimal(surface.beta)
                                               : klein_optimal(surface.beta);
}

std::vector<double> merged_knots(const Profile& f, const Profile& h) {
    std::vector<double> all(f.knots().begin(), f.knots().end());
    all.insert(all.end(), h.knots().begin(), h.knots().end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

}  // namespace

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

Profile isometry_average(const SurfaceSpec& surface,
                         const std::function<double(double, double)>& phi2d,
                         const AverageConfig& cfg) {
    if (cfg.out_samples < 2) throw std::invalid_argument("out_samples must be >= 2");
    const double b = surface.beta;

    // reject nonpositive inputs early, on a coarse lattice of the domain
    for (int i = 0; i <= 32; ++i)
        for (int j = 0; j <= 32; ++j) {
            const double x = kPi * i / 32.0;
            const double y = -surface.half_height() + 2.0 * surface.half_height() * j / 32.0;
            if (!(phi2d(x, y) > 0.0))
                throw std::invalid_argument("isometry_average requires a positive input");
        }

    QuadratureConfig qc;
    qc.abs_tol = cfg.x_tol;
    auto x_avg = [&](double y) {
        auto f = [&](double x) { return phi2d(x, y); };
        return integrate(f, 0.0, kPi, qc) / kPi;
    };

    const int n = cfg.out_samples;
    std::vector<double> ys(n), vals(n);
    for (int i = 0; i < n; ++i) {
        const double y = b * i / (n - 1);
        ys[i] = y;
        double v = 0.5 * (x_avg(y) + x_avg(-y));
        if (surface.kind == SurfaceKind::Klein) {
            const double shifted = 0.5 * (x_avg(y + 2.0 * b) + x_avg(-y - 2.0 * b));
            v = 0.5 * (v + shifted);
        }
        vals[i] = v;
    }
    return Profile::sampled(b, std::move(ys), std::move(vals));
}

std::pair<double, Profile> rank1_project(const SurfaceSpec& surface, const Profile& phi,
                                         const Profile& target) {
    const double c = l2_inner(surface, phi, target) / l2_inner(surface, target, target);
    return {c, target.scaled(c)};
}

// ---------------------------------------------------------------------------
// Pu identity and projection inequality
// ---------------------------------------------------------------------------

double pu_equality_residual(double beta, const Profile& phi, const PuConfig& cfg) {
    if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
    if (std::abs(phi.beta() - beta) > 1e-12 * std::max(1.0, beta))
        throw std::invalid_argument("profile width does not match beta");

    const SurfaceSpec surface = SurfaceSpec::mobius(beta);
    QuadratureConfig lhs_cfg = default_quadrature(phi);
    auto lhs_fn = [&](double y) { return phi.value(y) * phi0(y); };
    const double lhs = integrate_with_knots(lhs_fn, 0.0, beta, phi.knots(), lhs_cfg);

    // RHS after tau = beta sin(u): the inverse-square-root endpoint
    // singularity of the weight cancels against the cos(u) measure factor,
    // leaving an analytic integrand; fixed composite Simpson is then exact
    // to high order. tanh(beta) - tanh(tau) is evaluated through
    // sinh(beta - tau) / (cosh beta cosh tau), which has no cancellation.
    const double thb = std::tanh(beta);
    const double chb = std::cosh(beta);
    auto integrand = [&](double u) {
        const double gap = 2.0 * beta * std::pow(std::sin(kPi / 4.0 - 0.5 * u), 2);
        const double tau = beta - gap;  // = beta sin(u)
        if (tau <= 0.0) return 0.0;
        const double tht = std::tanh(tau);
        const double diff = std::sinh(gap) / (chb * std::cosh(tau));
        const double w = phi0(tau) * phi0(tau) * tht / std::sqrt(diff * (thb + tht));
        const CurvePolyline gamma = pu_curve(beta, tau, cfg.curve_vertices);
        return curve_length(surface, phi, gamma) * w * beta * std::cos(u);
    };
    // inset at u = pi/2 keeps tau strictly below beta; truncation O(1e-6)
    const double hi = kPi / 2.0 - 1e-6;
    const int panels = std::max(16, cfg.panels);
    const double h = hi / panels;
    std::vector<double> node(2 * panels + 1);
    for (int i = 0; i <= 2 * panels; ++i) node[i] = integrand(i * hi / (2 * panels));
    double rhs = 0.0;
    for (int p = 0; p < panels; ++p)
        rhs += h / 6.0 * (node[2 * p] + 4.0 * node[2 * p + 1] + node[2 * p + 2]);
    rhs /= kPi;

    return std::abs(lhs - rhs);
}

double projection_inequality_margin(const SurfaceSpec& surface, const Profile& phi,
                                    const SystoleEstimate& est) {
    const Profile opt = optimal_profile(surface);
    const Profile rescaled = phi.scaled(kPi / est.value);
    const auto knots = merged_knots(rescaled, opt);
    QuadratureConfig qc = default_quadrature(rescaled, opt);
    auto cross = [&](double y) { return rescaled.value(y) * opt.value(y); };
    auto sq = [&](double y) { return opt.value(y) * opt.value(y); };
    return integrate_with_knots(cross, 0.0, surface.beta, knots, qc) -
           integrate_with_knots(sq, 0.0, surface.beta, opt.knots(), qc);
}

double projection_inequality_margin(const SurfaceSpec& surface, const Profile& phi,
                                    const GridConfig& grid) {
    return projection_inequality_margin(surface, phi, systole_estimate(surface, phi, grid));
}

// ---------------------------------------------------------------------------
// Decreasing-function check
// ---------------------------------------------------------------------------

LemmaCheck decreasing_lemma_check(std::span<const double> ys, std::span<const double> hs,
                                  std::span<const double> gs, double tol) {
    const std::size_t n = ys.size();
    if (n < 2 || hs.size() != n || gs.size() != n)
        throw std::invalid_argument("decreasing_lemma_check needs matching grids, >= 2 points");
    if (ys[0] != 0.0) throw std::invalid_argument("grid must start at 0");
    for (std::size_t i = 1; i < n; ++i)
        if (!(ys[i] > ys[i - 1])) throw std::invalid_argument("grid must be strictly increasing");

    for (std::size_t i = 0; i < n; ++i)
        if (!(hs[i] > 0.0)) return LemmaCheck::PremiseFailed;
    for (std::size_t i = 1; i < n; ++i)
        if (hs[i] > hs[i - 1] + tol) return LemmaCheck::PremiseFailed;

    // Running integrals with the midpoint-in-h, trapezoid-in-g product rule.
    // Under this rule the discrete statement is an exact theorem (Abel
    // summation with the decreasing interval weights (h_a+h_b)/2 >= h_b),
    // so a grid premise implies the grid conclusion with no extra slack.
    std::vector<double> cum_hg(n, 0.0), cum_g(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double dy = ys[i] - ys[i - 1];
        const double hm = 0.5 * (hs[i] + hs[i - 1]);
        const double gint = 0.5 * dy * (gs[i - 1] + gs[i]);
        cum_hg[i] = cum_hg[i - 1] + hm * gint;
        cum_g[i] = cum_g[i - 1] + gint;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (cum_hg[i] < -tol) return LemmaCheck::PremiseFailed;

    for (std::size_t i = 0; i < n; ++i)
        if (cum_hg[i] < hs[i] * cum_g[i] - tol) return LemmaCheck::Fails;
    return LemmaCheck::Holds;
}

// ---------------------------------------------------------------------------
// Defect reports
// ---------------------------------------------------------------------------

DefectReport defect_report(const SurfaceSpec& surface, const Profile& phi,
                           const SystoleEstimate& est) {
    const OptimalSummary summary = optimal_summary(surface);
    const Profile opt = optimal_profile(surface);

    DefectReport r;
    r.surface = surface.kind;
    r.beta = surface.beta;
    r.sys_g = est.value;
    r.area_g = area(surface, phi);
    r.alpha_g = r.area_g / (r.sys_g * r.sys_g);
    r.alpha_conformal_opt = summary.alpha_sys;

    const double inner = l2_inner(surface, phi, opt);
    const double opt_norm2 = l2_inner(surface, opt, opt);
    const double c = inner / opt_norm2;
    const auto knots = merged_knots(phi, opt);
    QuadratureConfig qc = default_quadrature(phi, opt);
    auto resid_fn = [&](double y) {
        const double d = phi.value(y) - c * opt.value(y);
        return d * d;
    };
    r.residual_norm_sq = weighted_integral(surface, resid_fn, knots, qc);
    r.lhs_defect = r.residual_norm_sq / (r.sys_g * r.sys_g);
    r.rhs_defect = r.alpha_g - r.alpha_conformal_opt;

    // variance of h = phi/phi_opt under the probability measure with density
    // phi_opt^2 / area_opt
    r.variance_form.area_opt = opt_norm2;
    r.variance_form.expected_h = inner / opt_norm2;
    const double e_h2 = r.area_g / opt_norm2;
    r.variance_form.var_h = e_h2 - r.variance_form.expected_h * r.variance_form.expected_h;

    if (surface.kind == SurfaceKind::Klein)
        r.bavard_gap = summary.alpha_sys - 2.0 * std::sqrt(2.0) / kPi;
    return r;
}

DefectReport defect_report(const SurfaceSpec& surface, const Profile& phi,
                           const GridConfig& grid) {
    return defect_report(surface, phi, systole_estimate(surface, phi, grid));
}

std::string defect_report_json(const DefectReport& r, int indent) {
    nlohmann::json j{{"surface", to_string(r.surface)},
                     {"beta", r.beta},
                     {"area_g", r.area_g},
                     {"sys_g", r.sys_g},
                     {"alpha_g", r.alpha_g},
                     {"alpha_conformal_opt", r.alpha_conformal_opt},
                     {"residual_norm_sq", r.residual_norm_sq},
                     {"lhs_defect", r.lhs_defect},
                     {"rhs_defect", r.rhs_defect},
                     {"variance_form",
                      {{"expected_h", r.variance_form.expected_h},
                       {"var_h", r.variance_form.var_h},
                       {"area_opt", r.variance_form.area_opt}}}};
    if (r.bavard_gap)
        j["bavard_gap"] = *r.bavard_gap;
    else
        j["bavard_gap"] = nullptr;
    return j.dump(indent);
}

}  // namespace sysgeo
