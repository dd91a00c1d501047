#include "sysgeo/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sysgeo {

namespace {

constexpr double kPi = std::numbers::pi;

struct Adapt {
    const std::function<double(double)>& f;
    int max_depth;

    double run(double a, double fa, double m, double fm, double b, double fb, double whole,
               double tol, int depth) const {
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        // the width floor stops runaway refinement once the requested
        // tolerance falls below the evaluation noise of the integrand
        if (depth >= max_depth || std::abs(delta) <= 15.0 * tol ||
            b - a <= 1e-13 * (std::abs(a) + std::abs(b) + 1.0))
            return left + right + delta / 15.0;
        return run(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
               run(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
    }
};

double simpson_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Adapt{f, max_depth}.run(a, fa, m, fm, b, fb, whole, tol, 0);
}

void check_config(const QuadratureConfig& cfg) {
    if (!(cfg.abs_tol > 0.0)) throw std::invalid_argument("quadrature abs_tol must be positive");
    if (cfg.max_subdivisions < 1)
        throw std::invalid_argument("quadrature max_subdivisions must be >= 1");
}

}  // namespace

QuadratureConfig default_quadrature(const Profile& p) {
    QuadratureConfig cfg;
    cfg.abs_tol = p.is_sampled() ? 1e-8 : 1e-10;
    return cfg;
}

QuadratureConfig default_quadrature(const Profile& p, const Profile& q) {
    QuadratureConfig cfg;
    cfg.abs_tol = (p.is_sampled() || q.is_sampled()) ? 1e-8 : 1e-10;
    return cfg;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg) {
    check_config(cfg);
    if (cfg.endpoint_singularity == EndpointSingularity::InverseSqrt) {
        // t = mid + half*sin(u) removes an inverse-square-root singularity at
        // either endpoint; endpoints are never sampled (cos(±pi/2) factor).
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        auto g = [&](double u) {
            return f(mid + half * std::sin(u)) * half * std::cos(u);
        };
        // the inset keeps the substituted integrand finite at the ends and
        // keeps the sampled abscissae strictly inside (a, b); it truncates
        // O(inset * max|g|), negligible against the tolerances used here
        const double eps = 1e-7;
        return simpson_adaptive(g, -kPi / 2 + eps, kPi / 2 - eps, cfg.abs_tol,
                                cfg.max_subdivisions);
    }
    return simpson_adaptive(f, a, b, cfg.abs_tol, cfg.max_subdivisions);
}

double integrate_with_knots(const std::function<double(double)>& f, double a, double b,
                            std::span<const double> knots, const QuadratureConfig& cfg) {
    check_config(cfg);
    std::vector<double> cuts{a};
    for (double k : knots)
        if (k > a + 1e-15 && k < b - 1e-15) cuts.push_back(k);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    const double total_len = b - a;
    double sum = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double len = cuts[i] - cuts[i - 1];
        if (len <= 0.0) continue;
        const double tol = std::max(cfg.abs_tol * len / total_len, 0.02 * cfg.abs_tol);
        sum += simpson_adaptive(f, cuts[i - 1], cuts[i], tol, cfg.max_subdivisions);
    }
    return sum;
}

namespace {

void check_match(const SurfaceSpec& surface, const Profile& p) {
    if (std::abs(p.beta() - surface.beta) > 1e-12 * std::max(1.0, surface.beta))
        throw std::invalid_argument("profile width does not match the surface");
}

std::vector<double> merged_knots(const Profile& f, const Profile& h) {
    std::vector<double> all(f.knots().begin(), f.knots().end());
    all.insert(all.end(), h.knots().begin(), h.knots().end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

}  // namespace

double l2_inner(const SurfaceSpec& surface, const Profile& f, const Profile& h,
                const QuadratureConfig& cfg) {
    check_match(surface, f);
    check_match(surface, h);
    const auto knots = merged_knots(f, h);
    auto fn = [&](double y) { return f.value(y) * h.value(y); };
    return surface.l2_weight() * integrate_with_knots(fn, 0.0, surface.beta, knots, cfg);
}

double l2_inner(const SurfaceSpec& surface, const Profile& f, const Profile& h) {
    return l2_inner(surface, f, h, default_quadrature(f, h));
}

double area(const SurfaceSpec& surface, const Profile& profile, const QuadratureConfig& cfg) {
    return l2_inner(surface, profile, profile, cfg);
}

double area(const SurfaceSpec& surface, const Profile& profile) {
    return l2_inner(surface, profile, profile);
}

double weighted_integral(const SurfaceSpec& surface, const std::function<double(double)>& f,
                         std::span<const double> knots, const QuadratureConfig& cfg) {
    return surface.l2_weight() * integrate_with_knots(f, 0.0, surface.beta, knots, cfg);
}

// ---------------------------------------------------------------------------
// curve_length
// ---------------------------------------------------------------------------

namespace {

// Split parameters of one straight segment so that the folded ordinate is
// smooth on each piece: cuts at crossings of the fold lines y = j*beta, then
// at profile-knot preimages (the fold is affine between fold lines).
std::vector<double> segment_cuts(const SurfaceSpec& surface, const Profile& profile,
                                 const Point2& p0, const Point2& p1) {
    std::vector<double> ts{0.0, 1.0};
    const double y0 = p0.y(), dy = p1.y() - p0.y();
    const double b = surface.beta;
    if (std::abs(dy) > 1e-15) {
        const double ylo = std::min(y0, y0 + dy), yhi = std::max(y0, y0 + dy);
        const long jlo = static_cast<long>(std::ceil(ylo / b - 1e-12));
        const long jhi = static_cast<long>(std::floor(yhi / b + 1e-12));
        for (long j = jlo; j <= jhi; ++j) {
            const double t = (j * b - y0) / dy;
            if (t > 1e-12 && t < 1.0 - 1e-12) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());

    if (!profile.knots().empty() && std::abs(dy) > 1e-15) {
        std::vector<double> more;
        for (std::size_t i = 1; i < ts.size(); ++i) {
            const double ta = ts[i - 1], tb = ts[i];
            const double ua = fold_y(surface, y0 + ta * dy);
            const double ub = fold_y(surface, y0 + tb * dy);
            if (std::abs(ub - ua) < 1e-15) continue;
            for (double k : profile.knots()) {
                const double s = (k - ua) / (ub - ua);
                if (s > 1e-12 && s < 1.0 - 1e-12) more.push_back(ta + s * (tb - ta));
            }
        }
        ts.insert(ts.end(), more.begin(), more.end());
        std::sort(ts.begin(), ts.end());
    }
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double c) { return std::abs(a - c) < 1e-14; }),
             ts.end());
    return ts;
}

}  // namespace

double curve_length(const SurfaceSpec& surface, const Profile& profile,
                    const CurvePolyline& curve, const QuadratureConfig& cfg) {
    check_match(surface, profile);
    const auto& v = curve.vertices();
    const double total_euclid = curve.euclidean_length();
    if (total_euclid <= 0.0) throw std::invalid_argument("degenerate curve");

    double total = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const Point2 p0 = v[i - 1], p1 = v[i];
        const double seg = (p1 - p0).norm();
        const double tol_seg = std::max(cfg.abs_tol * seg / total_euclid, 0.01 * cfg.abs_tol);
        auto fn = [&](double t) {
            const Point2 q = p0 + t * (p1 - p0);
            return profile_eval(surface, profile, q) * seg;
        };
        const auto ts = segment_cuts(surface, profile, p0, p1);
        for (std::size_t j = 1; j < ts.size(); ++j) {
            const double piece_tol =
                std::max(tol_seg * (ts[j] - ts[j - 1]), 0.01 * tol_seg);
            total += simpson_adaptive(fn, ts[j - 1], ts[j], piece_tol, cfg.max_subdivisions);
        }
    }
    return total;
}

double curve_length(const SurfaceSpec& surface, const Profile& profile,
                    const CurvePolyline& curve) {
    return curve_length(surface, profile, curve, default_quadrature(profile));
}

}  // namespace sysgeo
