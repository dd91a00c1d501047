#include "sysgeo/measure.hpp"

#include "sysgeo/optimal.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace sysgeo;

namespace {
constexpr double kPi = std::numbers::pi;

Profile random_sampled(double beta, std::mt19937_64& rng, int n = 40) {
    std::uniform_real_distribution<double> u(0.2, 2.0);
    std::vector<double> ys(n), vs(n);
    for (int i = 0; i < n; ++i) {
        ys[i] = beta * i / (n - 1);
        vs[i] = u(rng);
    }
    return Profile::sampled(beta, std::move(ys), std::move(vs));
}
}  // namespace

TEST_CASE("adaptive quadrature basics") {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-12;
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, cfg) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // kink at 0.3: splitting at the knot keeps full accuracy
    auto kinky = [](double x) { return std::abs(x - 0.3); };
    const double knots[] = {0.3};
    CHECK(integrate_with_knots(kinky, 0.0, 1.0, knots, cfg) ==
          doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-12));

    // inverse-square-root endpoint singularity
    QuadratureConfig sing;
    sing.abs_tol = 1e-9;
    sing.endpoint_singularity = EndpointSingularity::InverseSqrt;
    CHECK(integrate([](double t) { return 1.0 / std::sqrt(1.0 - t); }, 0.0, 1.0, sing) ==
          doctest::Approx(2.0).epsilon(1e-6));

    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, QuadratureConfig{-1.0, 4}),
                    std::invalid_argument);
}

TEST_CASE("l2 inner products against closed forms") {
    for (double beta : {0.4, constants().beta0, 1.0, 2.3}) {
        const auto mob = SurfaceSpec::mobius(beta);
        const auto f = phi0_profile(beta);
        CHECK(l2_inner(mob, f, f) == doctest::Approx(2 * kPi * std::tanh(beta)).epsilon(1e-11));
    }
    const auto klein = SurfaceSpec::klein(0.75);
    const auto one = Profile::flat(0.75, 1.0);
    CHECK(l2_inner(klein, one, one) == doctest::Approx(4 * kPi * 0.75).epsilon(1e-12));

    const double b0 = constants().beta0;
    const auto mob0 = SurfaceSpec::mobius(b0);
    CHECK(l2_inner(mob0, phi0_profile(b0), Profile::flat(b0, 1.0)) ==
          doctest::Approx(2 * kPi * kPi / 4.0).epsilon(1e-11));

    CHECK_THROWS_AS(l2_inner(mob0, phi0_profile(b0), Profile::flat(1.0, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("areas of reference metrics") {
    const auto mob = SurfaceSpec::mobius(0.9);
    CHECK(area(mob, Profile::flat(0.9, 1.0)) == doctest::Approx(2 * kPi * 0.9).epsilon(1e-12));
    CHECK(area(mob, mobius_optimal(0.9)) ==
          doctest::Approx(2 * kPi * std::tanh(0.9)).epsilon(1e-11));

    const auto klein = SurfaceSpec::klein(1.0);  // beta0 <= 1 <= beta1
    CHECK(area(klein, klein_optimal(1.0)) ==
          doctest::Approx(4 * kPi * std::tanh(1.0)).epsilon(1e-11));
}

TEST_CASE("curve lengths") {
    const double beta = 1.1, tau = 0.4;
    const auto mob = SurfaceSpec::mobius(beta);
    const auto g0 = phi0_profile(beta);

    // double horizontal wrap at height tau
    const CurvePolyline wrap(mob, {{-kPi / 2, tau}, {3 * kPi / 2, tau}}, DeckWord{2, 0});
    CHECK(curve_length(mob, g0, wrap) == doctest::Approx(2 * kPi * phi0(tau)).epsilon(1e-11));

    const auto klein = SurfaceSpec::klein(beta);
    const CurvePolyline vertical(klein, {{0.0, -2 * beta}, {0.0, 2 * beta}}, DeckWord{0, 1});
    CHECK(curve_length(klein, Profile::flat(beta, 1.0), vertical) ==
          doctest::Approx(4 * beta).epsilon(1e-12));

    const auto gamma = pu_curve(beta, tau, 512);
    CHECK(curve_length(mob, g0, gamma) == doctest::Approx(kPi).epsilon(1e-4));
}

TEST_CASE("measure scaling and bilinearity properties") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uc(0.3, 2.5);
    for (int trial = 0; trial < 25; ++trial) {
        const double beta = 0.3 + 1.5 * std::generate_canonical<double, 53>(rng);
        const auto surface =
            (trial % 2 == 0) ? SurfaceSpec::mobius(beta) : SurfaceSpec::klein(beta);
        const auto f = random_sampled(beta, rng);
        const auto h = random_sampled(beta, rng);
        const double c = uc(rng);

        CHECK(area(surface, f.scaled(c)) == doctest::Approx(c * c * area(surface, f)).epsilon(1e-9));
        CHECK(l2_inner(surface, f, h) == doctest::Approx(l2_inner(surface, h, f)).epsilon(1e-9));
        CHECK(l2_inner(surface, f.scaled(c), h) ==
              doctest::Approx(c * l2_inner(surface, f, h)).epsilon(1e-9));

        const double lhs = l2_inner(surface, f, h);
        CHECK(lhs * lhs <= area(surface, f) * area(surface, h) + 1e-8);

        // independent dense quadrature agrees
        const double direct =
            surface.l2_weight() *
            oracle::trapezoid([&](double y) { return f.value(y) * h.value(y); }, 0.0, beta);
        CHECK(lhs == doctest::Approx(direct).epsilon(1e-6));

        const CurvePolyline seg(
            surface, {{0.2, -0.3 * beta}, {0.2 + kPi, 0.3 * beta}}, DeckWord{1, 0});
        CHECK(curve_length(surface, f.scaled(c), seg) ==
              doctest::Approx(c * curve_length(surface, f, seg)).epsilon(1e-9));
    }
}

TEST_CASE("curve lengths split correctly at folds and knots") {
    // a slanted segment sweeping two Klein periods; compare against dense
    // pointwise quadrature of the folded profile
    const double beta = 0.5;
    const auto klein = SurfaceSpec::klein(beta);
    std::mt19937_64 rng(9);
    const auto f = random_sampled(beta, rng, 17);
    const Point2 a(0.1, -1.9), b(0.9, 1.7);
    const CurvePolyline seg(klein, {a, b, deck_apply(klein, {0, 1}, a)}, DeckWord{0, 1});
    const double len = curve_length(klein, f, seg);

    auto along = [&](const Point2& p, const Point2& q) {
        return oracle::trapezoid(
            [&](double t) {
                const Point2 z = p + t * (q - p);
                return profile_eval(klein, f, z) * (q - p).norm();
            },
            0.0, 1.0, 200000);
    };
    CHECK(len == doctest::Approx(along(a, b) + along(b, deck_apply(klein, {0, 1}, a)))
                     .epsilon(1e-6));
}
