#include "sysgeo/systole.hpp"

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
const GridConfig kSmall{64, 64, Stencil::D16, 4, 2};
const GridConfig kMedium{128, 128, Stencil::D16, 4, 2};

Profile wavy(double beta, double amp) {
    return Profile::expression(beta, "wavy", [beta, amp](double y) {
        return 1.0 + amp * std::cos(2.0 * kPi * y / beta);
    });
}
}  // namespace

TEST_CASE("grid config validation") {
    CHECK_THROWS_AS(validate(GridConfig{4, 64, Stencil::D16, 4, 2}), std::invalid_argument);
    CHECK_THROWS_AS(validate(GridConfig{64, 64, Stencil::D16, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(validate(GridConfig{64, 64, Stencil::D16, 4, 0}), std::invalid_argument);
}

TEST_CASE("flat metrics against the straight-line oracle") {
    const double beta = 0.6;
    const auto mob = SurfaceSpec::mobius(beta);
    const auto klein = SurfaceSpec::klein(beta);
    const auto flat_m = Profile::flat(beta, 1.0);

    for (const DeckWord w : {DeckWord{1, 0}, DeckWord{2, 0}, DeckWord{3, 0}}) {
        const auto [len, wit] = shortest_in_class(mob, flat_m, w, kSmall);
        CHECK(len == doctest::Approx(oracle::flat_class_length(mob, w, 1.0)).epsilon(0.01));
        CHECK(wit.word() == w);
    }
    for (const DeckWord w :
         {DeckWord{0, 1}, DeckWord{1, 0}, DeckWord{1, 1}, DeckWord{2, 1}, DeckWord{2, -1}}) {
        const auto [len, wit] = shortest_in_class(klein, flat_m, w, kSmall);
        CHECK(len == doctest::Approx(oracle::flat_class_length(klein, w, 1.0)).epsilon(0.01));
    }

    CHECK(systole_estimate(mob, flat_m, kSmall).value == doctest::Approx(kPi).epsilon(0.01));
    const auto est = systole_estimate(klein, flat_m, kSmall);
    CHECK(est.value == doctest::Approx(std::min(kPi, 4 * beta)).epsilon(0.01));
    CHECK(est.word == DeckWord{0, 1});
}

TEST_CASE("estimates match the closed forms of the round metrics") {
    // thin strip: the antipodal classes realize pi
    auto est = systole_estimate(SurfaceSpec::mobius(1.0), phi0_profile(1.0), kMedium);
    CHECK(est.value == doctest::Approx(kPi).epsilon(0.02));
    CHECK(est.word == DeckWord{1, 0});

    // thick strip: the doubled loop along the boundary wins
    est = systole_estimate(SurfaceSpec::mobius(2.0), phi0_profile(2.0), kMedium);
    CHECK(est.value == doctest::Approx(2 * kPi * phi0(2.0)).epsilon(0.02));
    CHECK(est.word == DeckWord{2, 0});

    for (double beta : {0.5, 1.0}) {
        const auto e =
            systole_estimate(SurfaceSpec::klein(beta), klein_optimal(beta), kMedium);
        CHECK(e.value == doctest::Approx(kPi).epsilon(0.02));
    }
}

TEST_CASE("word validation") {
    const auto mob = SurfaceSpec::mobius(1.0);
    const auto klein = SurfaceSpec::klein(1.0);
    const auto flat = Profile::flat(1.0, 1.0);
    CHECK_THROWS_AS(shortest_in_class(mob, flat, DeckWord{0, 0}, kSmall),
                    std::invalid_argument);
    CHECK_THROWS_AS(shortest_in_class(mob, flat, DeckWord{1, 1}, kSmall),
                    std::invalid_argument);
    CHECK_THROWS_AS(shortest_in_class(klein, flat, DeckWord{0, 0}, kSmall),
                    std::invalid_argument);
    CHECK_THROWS_AS(systole_estimate(klein, Profile::flat(0.7, 1.0), kSmall),
                    std::invalid_argument);
}

TEST_CASE("inverse words give the same length with reversed witnesses") {
    const auto klein = SurfaceSpec::klein(0.8);
    const auto prof = wavy(0.8, 0.3);
    const auto [len_pos, wit_pos] = shortest_in_class(klein, prof, DeckWord{1, 1}, kSmall);
    const auto [len_neg, wit_neg] =
        shortest_in_class(klein, prof, inverse(DeckWord{1, 1}), kSmall);
    CHECK(len_pos == doctest::Approx(len_neg).epsilon(1e-12));
    CHECK(wit_neg.word() == inverse(DeckWord{1, 1}));
}

TEST_CASE("witness consistency") {
    const auto klein = SurfaceSpec::klein(0.7);
    const auto prof = wavy(0.7, 0.25);
    const auto est = systole_estimate(klein, prof, kSmall);

    // the reported value is the quadrature length of the witness
    CHECK(est.value ==
          doctest::Approx(curve_length(klein, prof, est.witness)).epsilon(1e-10));
    CHECK(est.witness.word() == est.word);
    CHECK_FALSE(est.word.is_identity());

    const auto [vlen, vwit] = shortest_in_class(klein, prof, DeckWord{0, 1}, kSmall);
    CHECK(classify_curve(klein, vwit) == CurveClass::Vertical);
    if (est.word.k != 0) CHECK(classify_curve(klein, est.witness) == CurveClass::Horizontal);
}

TEST_CASE("estimate properties: monotonicity, scaling, refinement") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 0.35);
    for (int trial = 0; trial < 6; ++trial) {
        const double beta = 0.5 + 0.3 * trial;
        const auto surface =
            (trial % 2 == 0) ? SurfaceSpec::mobius(beta) : SurfaceSpec::klein(beta);
        const auto p1 = wavy(beta, u(rng));
        const auto p2 = Profile::expression(
            beta, "dominating", [p1](double y) { return p1.value(y) + 0.2; });

        const double s1 = systole_estimate(surface, p1, kSmall).value;
        const double s2 = systole_estimate(surface, p2, kSmall).value;
        CHECK(s1 <= s2 + 1e-9);  // pointwise p1 <= p2

        for (double c : {0.5, 2.0}) {
            CHECK(systole_estimate(surface, p1.scaled(c), kSmall).value ==
                  doctest::Approx(c * s1).epsilon(1e-10));
        }

        const double fine = systole_estimate(surface, p1, kMedium).value;
        CHECK(fine <= s1 * (1.0 + 0.01));
    }
}

TEST_CASE("folding Klein curves into the strip") {
    const double beta = 0.8;
    const auto klein = SurfaceSpec::klein(beta);

    // curves inside |y| <= beta are untouched
    const CurvePolyline inside(klein, {{0.0, 0.2}, {kPi, -0.2}}, DeckWord{1, 0});
    const auto same = fold_to_mobius(klein, inside);
    REQUIRE(same.vertices().size() == 2);
    CHECK((same.vertices()[0] - inside.vertices()[0]).norm() < 1e-15);
    CHECK((same.vertices()[1] - inside.vertices()[1]).norm() < 1e-15);

    // the reflection branch y -> 2 beta - y
    const CurvePolyline outside(
        klein, {{0.0, 0.0}, {1.0, 1.5 * beta}, {kPi, 0.0}}, DeckWord{1, 0});
    const auto folded = fold_to_mobius(klein, outside);
    bool found = false;
    for (const auto& v : folded.vertices())
        if (std::abs(v.x() - 1.0) < 1e-12 && std::abs(v.y() - 0.5 * beta) < 1e-12) found = true;
    CHECK(found);
    CHECK(folded.word() == DeckWord{1, 0});

    // lengths under invariant profiles are preserved exactly
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.6, 1.6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto prof = wavy(beta, 0.2 + 0.1 * (trial % 3));
        std::vector<Point2> verts{{0.0, u(rng)}};
        verts.emplace_back(1.0, u(rng));
        verts.emplace_back(2.0, u(rng));
        verts.push_back(deck_apply(klein, {1, 0}, verts.front()));
        const CurvePolyline curve(klein, verts, DeckWord{1, 0});
        const auto image = fold_to_mobius(klein, curve);
        CHECK(curve_length(klein, prof, curve) ==
              doctest::Approx(curve_length(SurfaceSpec::mobius(beta), prof, image))
                  .epsilon(1e-9));
    }

    // vertical curves fold to contractible loops in the strip
    const CurvePolyline vertical(klein, {{0.0, -2 * beta}, {0.0, 2 * beta}}, DeckWord{0, 1});
    const auto loop = fold_to_mobius(klein, vertical);
    CHECK(loop.word().is_identity());

    CHECK_THROWS_AS(fold_to_mobius(SurfaceSpec::mobius(beta), inside), std::invalid_argument);
}
