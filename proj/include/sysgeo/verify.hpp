#pragma once

#include "sysgeo/geometry.hpp"
#include "sysgeo/systole.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

// The verification suite: every check the `verify` command and the
// acceptance binary run, with its tolerance pinned here.

namespace sysgeo::verify {

struct VerifyOptions {
    // fine grid for the closed-form systole comparisons
    GridConfig fine_grid{256, 256, Stencil::D16, 4, 2};
    // grid for the randomized inequality suites
    GridConfig suite_grid{128, 128, Stencil::D16, 4, 2};
    int trials = 100;          // random profiles per width
    int lemma_trials = 1000;
    std::uint64_t seed = 0;
    double sys_rel_tol = 0.02; // systole discretization tolerance at the grids above
    int pu_vertices = 512;
};

struct CheckResult {
    std::string id;
    std::string description;
    bool pass = false;
    std::string detail;  // worst observed margin / error
};

/// Runs every check; if `log` is non-null, prints one PASS/FAIL line per
/// check as it completes. Deterministic for a fixed seed.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opts, std::ostream* log = nullptr);

std::string summary_json(const std::vector<CheckResult>& results, const VerifyOptions& opts,
                         int indent = 2);

/// Smooth positive random profile on [0, beta]: a low-order cosine series
/// with the oscillation capped at half the mean, so min >= mean/2.
Profile random_invariant_profile(double beta, std::mt19937_64& rng);

}  // namespace sysgeo::verify
