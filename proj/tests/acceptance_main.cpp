// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the same checks as `sysgeo verify` at the default settings.

#include "sysgeo/verify.hpp"

#include <iostream>

int main() {
    sysgeo::verify::VerifyOptions opts;
    const auto results = sysgeo::verify::run_acceptance(opts, &std::cout);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILURES present")
              << std::endl;
    return all ? 0 : 1;
}
