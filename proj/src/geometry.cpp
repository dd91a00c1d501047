#include "sysgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sysgeo {

namespace {
constexpr double kPi = std::numbers::pi;

void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("surface width parameter must be positive");
}
}  // namespace

// ---------------------------------------------------------------------------
// SurfaceSpec
// ---------------------------------------------------------------------------

SurfaceSpec SurfaceSpec::mobius(double beta) {
    check_beta(beta);
    return {SurfaceKind::Mobius, beta};
}

SurfaceSpec SurfaceSpec::klein(double beta) {
    check_beta(beta);
    return {SurfaceKind::Klein, beta};
}

double SurfaceSpec::flat_area() const {
    return kind == SurfaceKind::Mobius ? 2.0 * kPi * beta : 4.0 * kPi * beta;
}

double SurfaceSpec::l2_weight() const {
    return kind == SurfaceKind::Mobius ? 2.0 * kPi : 4.0 * kPi;
}

const char* to_string(SurfaceKind kind) {
    return kind == SurfaceKind::Mobius ? "mobius" : "klein";
}

// ---------------------------------------------------------------------------
// DeckWord
// ---------------------------------------------------------------------------

DeckWord compose(DeckWord first, DeckWord second) {
    const int sign = (second.k % 2 == 0) ? 1 : -1;
    return {first.k + second.k, second.m + sign * first.m};
}

DeckWord inverse(DeckWord w) {
    const int sign = (w.k % 2 == 0) ? 1 : -1;
    return {-w.k, -sign * w.m};
}

Point2 deck_apply(const SurfaceSpec& surface, DeckWord word, const Point2& p) {
    if (surface.kind == SurfaceKind::Mobius && word.m != 0)
        throw std::invalid_argument("deck words on the Mobius strip have m = 0");
    const double sign = (word.k % 2 == 0) ? 1.0 : -1.0;
    return {p.x() + word.k * kPi, sign * p.y() + 4.0 * surface.beta * word.m};
}

double fold_y(const SurfaceSpec& surface, double y) {
    const double b = surface.beta;
    if (surface.kind == SurfaceKind::Mobius) return std::min(std::abs(y), b);
    double t = std::fmod(std::abs(y), 2.0 * b);
    return t <= b ? t : 2.0 * b - t;
}

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

namespace {

double sampled_min(const std::vector<double>& values) {
    return *std::min_element(values.begin(), values.end());
}

// dense positivity scan + minimum for closed forms
double scan_min(const std::function<double(double)>& f, double beta,
                const std::vector<double>& knots) {
    constexpr int kScan = 2048;
    double lo = f(0.0);
    for (int i = 1; i <= kScan; ++i) lo = std::min(lo, f(beta * i / kScan));
    for (double k : knots) lo = std::min(lo, f(k));
    return lo;
}

}  // namespace

Profile Profile::flat(double beta, double value) {
    check_beta(beta);
    if (!(value > 0.0)) throw std::invalid_argument("flat profile value must be positive");
    Profile p;
    p.beta_ = beta;
    p.kind_ = ProfileKind::Flat;
    p.name_ = "flat";
    p.eval_ = [value](double) { return value; };
    p.min_value_ = value;
    p.knots_ = std::make_shared<const std::vector<double>>();
    return p;
}

Profile Profile::sampled(double beta, std::vector<double> ys, std::vector<double> values) {
    check_beta(beta);
    if (ys.size() != values.size() || ys.size() < 2)
        throw std::invalid_argument("sampled profile needs matching grids with >= 2 points");
    if (ys.front() != 0.0) throw std::invalid_argument("sample grid must start at 0");
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (!(ys[i] > ys[i - 1])) throw std::invalid_argument("sample grid must be strictly increasing");
    if (std::abs(ys.back() - beta) > 1e-12 * std::max(1.0, beta))
        throw std::invalid_argument("sample grid must end at beta");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("profile values must be positive");

    Profile p;
    p.beta_ = beta;
    p.kind_ = ProfileKind::Sampled;
    p.name_ = "sampled";
    p.min_value_ = sampled_min(values);
    auto xs = std::make_shared<std::vector<double>>(std::move(ys));
    auto vs = std::make_shared<std::vector<double>>(std::move(values));
    p.eval_ = [xs, vs](double y) {
        const auto& x = *xs;
        if (y <= x.front()) return vs->front();
        if (y >= x.back()) return vs->back();
        const auto it = std::upper_bound(x.begin(), x.end(), y);
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        const double t = (y - x[i - 1]) / (x[i] - x[i - 1]);
        return (*vs)[i - 1] + t * ((*vs)[i] - (*vs)[i - 1]);
    };
    // interior sample points are the kinks of the interpolant
    auto knots = std::make_shared<std::vector<double>>(xs->begin() + 1, xs->end() - 1);
    p.knots_ = std::move(knots);
    return p;
}

Profile Profile::expression(double beta, std::string name, std::function<double(double)> f,
                            std::vector<double> interior_knots, ProfileKind kind) {
    check_beta(beta);
    for (double k : interior_knots)
        if (!(k > 0.0 && k < beta)) throw std::invalid_argument("knots must lie in (0, beta)");
    std::sort(interior_knots.begin(), interior_knots.end());
    const double lo = scan_min(f, beta, interior_knots);
    if (!(lo > 0.0)) throw std::invalid_argument("profile values must be positive");
    Profile p;
    p.beta_ = beta;
    p.kind_ = kind;
    p.name_ = std::move(name);
    p.eval_ = std::move(f);
    p.min_value_ = lo;
    p.knots_ = std::make_shared<const std::vector<double>>(std::move(interior_knots));
    return p;
}

double Profile::value(double y) const {
    const double t = std::clamp(std::abs(y), 0.0, beta_);
    return scale_ * eval_(t);
}

Profile Profile::scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("profile scale must be positive");
    Profile p = *this;
    p.scale_ *= c;
    p.min_value_ *= c;
    return p;
}

double profile_eval(const SurfaceSpec& surface, const Profile& profile, const Point2& p) {
    return profile.value(fold_y(surface, p.y()));
}

// ---------------------------------------------------------------------------
// CurvePolyline
// ---------------------------------------------------------------------------

CurvePolyline::CurvePolyline(const SurfaceSpec& surface, std::vector<Point2> vertices,
                             DeckWord word)
    : vertices_(std::move(vertices)), word_(word) {
    if (vertices_.size() < 2) throw std::invalid_argument("curve needs at least 2 vertices");
    for (std::size_t i = 1; i < vertices_.size(); ++i)
        if ((vertices_[i] - vertices_[i - 1]).norm() == 0.0)
            throw std::invalid_argument("consecutive curve vertices must be distinct");
    const Point2 expected = deck_apply(surface, word, vertices_.front());
    if ((vertices_.back() - expected).norm() > kClosureTol)
        throw std::invalid_argument("curve is not closed under its deck word");
}

double CurvePolyline::euclidean_length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < vertices_.size(); ++i)
        total += (vertices_[i] - vertices_[i - 1]).norm();
    return total;
}

CurveClass classify_curve(const SurfaceSpec& surface, const CurvePolyline& curve) {
    if (surface.kind != SurfaceKind::Klein)
        throw std::invalid_argument("curve classification is defined on the Klein bottle only");
    double lo = curve.vertices().front().y(), hi = lo;
    for (const auto& v : curve.vertices()) {
        lo = std::min(lo, v.y());
        hi = std::max(hi, v.y());
    }
    return (hi - lo >= 4.0 * surface.beta - kClosureTol) ? CurveClass::Vertical
                                                         : CurveClass::Horizontal;
}

}  // namespace sysgeo
