#pragma once

// Independent oracles used by the tests: plain dense quadrature and the
// straight-segment class-length minimizer for flat metrics. These do not
// share code with the library paths they check.

#include "sysgeo/geometry.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double trapezoid(const std::function<double(double)>& f, double a, double b,
                        int n = 20000) {
    double sum = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) sum += f(a + (b - a) * i / n);
    return sum * (b - a) / n;
}

// 2D trapezoid over [0,pi] x [-H,H] of a plane function
inline double trapezoid2d(const std::function<double(double, double)>& f, double half_height,
                          int nx = 400, int ny = 400) {
    const double pi = std::numbers::pi;
    double sum = 0.0;
    for (int i = 0; i <= nx; ++i) {
        const double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
        const double x = pi * i / nx;
        for (int j = 0; j <= ny; ++j) {
            const double wy = (j == 0 || j == ny) ? 0.5 : 1.0;
            const double y = -half_height + 2.0 * half_height * j / ny;
            sum += wx * wy * f(x, y);
        }
    }
    return sum * (pi / nx) * (2.0 * half_height / ny);
}

// Shortest straight segment joining a seam point to its deck image under a
// flat metric of constant factor c; geodesics of flat metrics are straight
// lines, so this minimum is the exact class length.
inline double flat_class_length(const sysgeo::SurfaceSpec& surface, sysgeo::DeckWord word,
                                double c, int scan = 4096) {
    const double pi = std::numbers::pi;
    const double H = surface.half_height();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= scan; ++i) {
        const double y0 = -H + 2.0 * H * i / scan;
        const sysgeo::Point2 img =
            sysgeo::deck_apply(surface, word, sysgeo::Point2(0.0, y0));
        best = std::min(best, std::hypot(word.k * pi, img.y() - y0));
    }
    return c * best;
}

}  // namespace oracle
