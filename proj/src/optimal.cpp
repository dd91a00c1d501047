#include "sysgeo/optimal.hpp"

#include "sysgeo/measure.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sysgeo {

namespace {
constexpr double kPi = std::numbers::pi;
}

ThresholdConstants constants() {
    return {std::log(1.0 + std::sqrt(2.0)), std::log(2.0 + std::sqrt(3.0))};
}

double phi0(double y) {
    // 2 e^y / (1 + e^{2y}) = 1 / cosh(y)
    return 1.0 / std::cosh(y);
}

double gudermannian(double y) { return std::asin(std::tanh(y)); }

Profile phi0_profile(double beta) {
    return Profile::expression(beta, "phi0", [](double y) { return phi0(y); }, {},
                               ProfileKind::Phi0);
}

Profile mobius_optimal(double beta) {
    const double b1 = constants().beta1;
    std::vector<double> knots;
    if (beta > b1) knots.push_back(b1);
    return Profile::expression(
        beta, "mobius_optimal", [](double y) { return std::max(phi0(y), 0.5); },
        std::move(knots), ProfileKind::MobiusOptimal);
}

double solve_s_beta(double beta) {
    const double b0 = constants().beta0;
    if (!(beta > kPi / 4.0 && beta < b0))
        throw std::domain_error("solve_s_beta requires pi/4 < beta < beta0");
    // I(s) = int_0^s phi0 + (beta - s) phi0(s) is strictly decreasing with
    // I(0) = beta > pi/4 and I(beta) < pi/4.
    auto I = [beta](double s) { return gudermannian(s) + (beta - s) * phi0(s); };
    double lo = 0.0, hi = beta;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (I(mid) > kPi / 4.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Profile klein_optimal(double beta) {
    const auto [b0, b1] = constants();
    if (beta <= kPi / 4.0) {
        const double c = kPi / (4.0 * beta);
        return Profile::expression(beta, "klein_optimal", [c](double) { return c; }, {},
                                   ProfileKind::KleinOptimal);
    }
    if (beta < b0) {
        const double s = solve_s_beta(beta);
        const double plateau = phi0(s);
        return Profile::expression(
            beta, "klein_optimal",
            [s, plateau](double y) { return y <= s ? phi0(y) : plateau; }, {s},
            ProfileKind::KleinOptimal);
    }
    if (beta <= b1)
        return Profile::expression(beta, "klein_optimal", [](double y) { return phi0(y); }, {},
                                   ProfileKind::KleinOptimal);
    return Profile::expression(
        beta, "klein_optimal",
        [b1 = b1](double y) { return y <= b1 ? phi0(y) : 0.5; }, {b1},
        ProfileKind::KleinOptimal);
}

const char* to_string(OptimalCase c) {
    switch (c) {
        case OptimalCase::Thin: return "thin";
        case OptimalCase::RoundFlatThin: return "round_flat_thin";
        case OptimalCase::Round: return "round";
        case OptimalCase::RoundFlatThick: return "round_flat_thick";
        case OptimalCase::Thick: return "thick";
    }
    return "?";
}

OptimalSummary optimal_summary(const SurfaceSpec& surface) {
    const auto [b0, b1] = constants();
    const double beta = surface.beta;
    OptimalSummary s;
    s.beta = beta;
    s.kind = surface.kind;
    s.sys = kPi;

    if (surface.kind == SurfaceKind::Mobius) {
        if (beta <= b1) {
            s.case_tag = OptimalCase::Round;
            s.area = 2.0 * kPi * std::tanh(beta);
        } else {
            s.case_tag = OptimalCase::Thick;
            s.area = kPi * std::sqrt(3.0) + 0.5 * kPi * (beta - b1);
        }
    } else {
        if (beta <= kPi / 4.0) {
            s.case_tag = OptimalCase::Thin;
            s.area = kPi * kPi * kPi / (4.0 * beta);
        } else if (beta <= b0) {
            // boundary width beta0 is assigned to this case; there the knee
            // sits at beta0 and the formula matches the next branch
            s.case_tag = OptimalCase::RoundFlatThin;
            const double sb = (beta == b0) ? b0 : solve_s_beta(beta);
            s.s_beta = sb;
            s.area = 4.0 * kPi * (std::tanh(sb) + (beta - sb) * phi0(sb) * phi0(sb));
        } else if (beta <= b1) {
            s.case_tag = OptimalCase::Round;
            s.area = 4.0 * kPi * std::tanh(beta);
        } else {
            s.case_tag = OptimalCase::RoundFlatThick;
            s.area = 2.0 * kPi * std::sqrt(3.0) + kPi * (beta - b1);
        }
    }
    s.alpha_sys = s.area / (kPi * kPi);
    return s;
}

// ---------------------------------------------------------------------------
// Pu curves and the spherical chart
// ---------------------------------------------------------------------------

namespace {

// x'(t) integrand after s = tau sin(u): bounded, with limit
// sqrt(tau / tanh(tau)) at u = +-pi/2. tanh(tau) - tanh(|s|) is evaluated
// through sinh(tau - |s|) / (cosh tau cosh s), which has no cancellation.
double pu_speed(double tau, double u) {
    const double c = std::cos(u);
    const double tt = std::tanh(tau);
    if (c < 1e-9) return std::sqrt(tau / tt);
    const double s = std::abs(tau * std::sin(u));
    const double diff = std::sinh(tau - s) / (std::cosh(tau) * std::cosh(s));
    const double d = diff * (tt + std::tanh(s));  // = phi0(s)^2 - phi0(tau)^2
    if (d <= 0.0) return std::sqrt(tau / tt);
    return phi0(tau) * tau * c / std::sqrt(d);
}

}  // namespace

CurvePolyline pu_curve(double beta, double tau, int n_vertices) {
    if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
    if (!(tau >= 0.0 && tau < beta)) throw std::domain_error("pu_curve requires 0 <= tau < beta");
    if (n_vertices < 16) throw std::invalid_argument("pu_curve needs at least 16 vertices");

    const SurfaceSpec surface = SurfaceSpec::mobius(beta);
    std::vector<Point2> verts;
    verts.reserve(n_vertices);

    if (tau == 0.0) {
        for (int i = 0; i < n_vertices; ++i) {
            const double t = kPi * i / (n_vertices - 1);
            verts.emplace_back(t, 0.0);
        }
        return CurvePolyline(surface, std::move(verts), DeckWord{1, 0});
    }

    // cumulative x-advance over the u-grid; the integrand is even, so
    // centering by half the total puts x(0) at pi/2
    const int n = n_vertices;
    std::vector<double> cum(n, 0.0);
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-12;
    auto speed = [tau](double u) { return pu_speed(tau, u); };
    for (int i = 1; i < n; ++i) {
        const double ua = -kPi / 2 + kPi * (i - 1) / (n - 1);
        const double ub = -kPi / 2 + kPi * i / (n - 1);
        cum[i] = cum[i - 1] + integrate(speed, ua, ub, cfg);
    }
    const double half_span = 0.5 * cum[n - 1];
    for (int i = 0; i < n; ++i) {
        const double u = -kPi / 2 + kPi * i / (n - 1);
        verts.emplace_back(kPi / 2 + cum[i] - half_span, -tau * std::sin(u));
    }
    return CurvePolyline(surface, std::move(verts), DeckWord{1, 0});
}

Point3 sphere_chart(double beta, const Point2& p) {
    if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
    const double slack = 1e-9;
    if (std::abs(p.x()) > kPi / 2 + slack || std::abs(p.y()) > beta + slack)
        throw std::domain_error("sphere_chart point outside [-pi/2,pi/2] x [-beta,beta]");
    const double theta1 = p.x();
    const double theta2 = gudermannian(p.y());
    return {std::cos(theta1) * std::cos(theta2), std::sin(theta1) * std::cos(theta2),
            std::sin(theta2)};
}

}  // namespace sysgeo
