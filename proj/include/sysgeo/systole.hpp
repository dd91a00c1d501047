#pragma once

#include "sysgeo/geometry.hpp"

#include <string>
#include <utility>

// Numerical systole estimation for invariant conformal metrics: shortest
// paths on a grid graph over the lifted slab, one homotopy class (deck word)
// at a time. Estimates are upper bounds that converge as the grid refines;
// the remaining overestimate comes from the direction stencil.
//
// Calls for distinct words are independent and use no shared mutable state,
// so they may run concurrently.

namespace sysgeo {

enum class Stencil { D8 = 8, D16 = 16, D32 = 32 };

struct GridConfig {
    int nx = 256;               // columns per pi of horizontal extent
    int ny = 256;               // rows per fundamental height (2*beta or 4*beta)
    Stencil stencil = Stencil::D16;
    int k_max = 4;
    int m_max = 2;
};

/// Throws std::invalid_argument unless nx, ny >= 8, k_max >= 2, m_max >= 1.
void validate(const GridConfig& grid);

struct SystoleEstimate {
    double value;                  // quadrature length of the witness
    CurvePolyline witness;
    DeckWord word;
    std::pair<int, int> grid;      // effective (nx, ny)
    std::string discretization_note;
};

/// Shortest noncontractible loop in the free homotopy class of `word`:
/// a monotone shortest-path sweep from every seam basepoint on x = 0 to its
/// deck image, with midpoint-rule edge weights. On the Mobius strip paths
/// never exit |y| <= beta. Returns the length of the best witness polyline
/// (re-measured by quadrature) and the witness itself.
std::pair<double, CurvePolyline> shortest_in_class(const SurfaceSpec& surface,
                                                   const Profile& profile, DeckWord word,
                                                   const GridConfig& grid);

/// Minimum of shortest_in_class over the word set
///   {(k,m): 1 <= |k| <= k_max, |m| <= m_max} plus {(0,m): 1 <= |m| <= m_max}
/// on the Klein bottle, pruning words whose flat lower bound
/// min(phi) * hypot(k pi, vertical gap) already exceeds the current best.
/// Inverse and conjugate words share the same class minimum, so only
/// canonical representatives are searched.
SystoleEstimate systole_estimate(const SurfaceSpec& surface, const Profile& profile,
                                 const GridConfig& grid);

/// The folding map Klein -> Mobius strip: the identity on |y| <= beta,
/// y -> 2*beta - y on (beta, 2*beta], y -> -2*beta - y on [-2*beta, -beta).
/// Segments are split at the fold lines so the image is again a polyline.
/// Lengths under invariant profiles are preserved exactly.
CurvePolyline fold_to_mobius(const SurfaceSpec& surface, const CurvePolyline& curve);

}  // namespace sysgeo
