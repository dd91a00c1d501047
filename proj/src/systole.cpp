#include "sysgeo/systole.hpp"

#include "sysgeo/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sysgeo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Move {
    int dx, dy;
};

// Forward half of the stencil (dx >= 1); pure vertical steps are handled by
// in-column sweeps. Direction counts quoted in Stencil include the mirrored
// and vertical moves.
std::vector<Move> forward_moves(Stencil s) {
    std::vector<Move> mv = {{1, 0}, {1, 1}, {1, -1}};
    if (s != Stencil::D8) {
        mv.insert(mv.end(), {{1, 2}, {1, -2}, {2, 1}, {2, -1}});
    }
    if (s == Stencil::D32) {
        mv.insert(mv.end(),
                  {{1, 3}, {1, -3}, {3, 1}, {3, -1}, {2, 3}, {2, -3}, {3, 2}, {3, -2}});
    }
    return mv;
}

int max_move_dx(Stencil s) { return s == Stencil::D32 ? 3 : 2; }

struct Slab {
    double ylo = 0.0;
    double dy = 0.0;
    int rows = 0;

    double y(int r) const { return ylo + r * dy; }
    int row(double yv) const {
        const long r = std::lround((yv - ylo) / dy);
        if (r < 0 || r >= rows) throw std::logic_error("systole search: row outside slab");
        return static_cast<int>(r);
    }
};

// ny rounded up so that beta is a whole number of rows
int effective_ny(const SurfaceSpec& surface, int ny) {
    const int q = surface.kind == SurfaceKind::Mobius ? 2 : 4;
    return ((ny + q - 1) / q) * q;
}

// Slab covering the seam basepoints y0 in [0, src_span*beta] and the deck
// images for every m in `ms`, padded by 2*beta. The slab edges sit on
// multiples of beta, which are reflection lines of the lifted metric, so
// confining the search there loses nothing.
Slab make_slab(const SurfaceSpec& surface, int k, const std::vector<int>& ms, int ny_eff,
               int src_span) {
    const double b = surface.beta;
    Slab s;
    if (surface.kind == SurfaceKind::Mobius) {
        s.dy = 2.0 * b / ny_eff;
        s.ylo = -b;
        s.rows = ny_eff + 1;
        return s;
    }
    const bool odd = (k % 2) != 0;
    long jlo = 0, jhi = src_span;
    for (int m : ms) {
        jlo = std::min(jlo, (odd ? -static_cast<long>(src_span) : 0L) + 4L * m);
        jhi = std::max(jhi, (odd ? 0L : static_cast<long>(src_span)) + 4L * m);
    }
    jlo -= 2;
    jhi += 2;
    const int rows_per_beta = ny_eff / 4;
    s.dy = 4.0 * b / ny_eff;
    s.ylo = static_cast<double>(jlo) * b;
    s.rows = static_cast<int>(jhi - jlo) * rows_per_beta + 1;
    return s;
}

struct Tables {
    std::vector<Move> moves;
    std::vector<std::vector<double>> w;  // [move][start row], midpoint rule
    std::vector<double> vstep;           // [row], cost of r -> r+1
};

Tables make_tables(const SurfaceSpec& surface, const Profile& profile, const Slab& slab,
                   double dx, Stencil stencil) {
    Tables t;
    t.moves = forward_moves(stencil);
    const int R = slab.rows;
    t.w.resize(t.moves.size());
    for (std::size_t s = 0; s < t.moves.size(); ++s) {
        const auto [mdx, mdy] = t.moves[s];
        const double len = std::hypot(mdx * dx, mdy * slab.dy);
        auto& ws = t.w[s];
        ws.assign(R, kInf);
        for (int r = 0; r < R; ++r) {
            if (r + mdy < 0 || r + mdy >= R) continue;
            const double ymid = slab.y(r) + 0.5 * mdy * slab.dy;
            ws[r] = profile.value(fold_y(surface, ymid)) * len;
        }
    }
    t.vstep.assign(R > 0 ? R - 1 : 0, 0.0);
    for (int r = 0; r + 1 < R; ++r)
        t.vstep[r] = profile.value(fold_y(surface, slab.y(r) + 0.5 * slab.dy)) * slab.dy;
    return t;
}

// parent codes for the witness backtrack
constexpr std::int8_t kParNone = -1;
constexpr std::int8_t kParUp = 100;    // arrived from r-1
constexpr std::int8_t kParDown = 101;  // arrived from r+1

void vertical_relax(std::vector<double>& col, const std::vector<double>& vstep,
                    std::int8_t* par) {
    const int R = static_cast<int>(col.size());
    for (int r = 1; r < R; ++r) {
        const double cand = col[r - 1] + vstep[r - 1];
        if (cand < col[r]) {
            col[r] = cand;
            if (par) par[r] = kParUp;
        }
    }
    for (int r = R - 2; r >= 0; --r) {
        const double cand = col[r + 1] + vstep[r];
        if (cand < col[r]) {
            col[r] = cand;
            if (par) par[r] = kParDown;
        }
    }
}

// Monotone-in-x shortest path sweep from (0, src_row) across n_cols columns.
// Writes the distances of the final column to `final_col`; optionally fills
// the full parent matrix of size (n_cols+1) * rows.
void run_dp(const Tables& t, const Slab& slab, int n_cols, int src_row,
            std::vector<double>& final_col, std::vector<std::int8_t>* parents) {
    const int R = slab.rows;
    std::array<std::vector<double>, 4> ring;
    for (auto& v : ring) v.assign(R, kInf);
    if (parents) parents->assign(static_cast<std::size_t>(n_cols + 1) * R, kParNone);

    auto par_at = [&](int c) {
        return parents ? parents->data() + static_cast<std::size_t>(c) * R : nullptr;
    };

    ring[0].assign(R, kInf);
    ring[0][src_row] = 0.0;
    vertical_relax(ring[0], t.vstep, par_at(0));

    for (int c = 1; c <= n_cols; ++c) {
        auto& cur = ring[c & 3];
        cur.assign(R, kInf);
        std::int8_t* par = par_at(c);
        for (std::size_t s = 0; s < t.moves.size(); ++s) {
            const auto [mdx, mdy] = t.moves[s];
            if (mdx > c) continue;
            const auto& prev = ring[(c - mdx) & 3];
            const auto& ws = t.w[s];
            const int rlo = std::max(0, mdy);
            const int rhi = R - 1 + std::min(0, mdy);
            for (int r = rlo; r <= rhi; ++r) {
                const double cand = prev[r - mdy] + ws[r - mdy];
                if (cand < cur[r]) {
                    cur[r] = cand;
                    if (par) par[r] = static_cast<std::int8_t>(s);
                }
            }
        }
        vertical_relax(cur, t.vstep, par);
    }
    final_col = ring[n_cols & 3];
}

std::vector<Point2> backtrack(const Tables& t, const Slab& slab, double dx, int n_cols,
                              const std::vector<std::int8_t>& parents, int src_row,
                              int tgt_row) {
    const int R = slab.rows;
    std::vector<std::pair<int, int>> nodes;
    int c = n_cols, r = tgt_row;
    nodes.emplace_back(c, r);
    while (!(c == 0 && r == src_row)) {
        const std::int8_t p = parents[static_cast<std::size_t>(c) * R + r];
        if (p == kParNone) throw std::logic_error("systole search: broken parent chain");
        if (p == kParUp)
            r -= 1;
        else if (p == kParDown)
            r += 1;
        else {
            c -= t.moves[p].dx;
            r -= t.moves[p].dy;
        }
        nodes.emplace_back(c, r);
    }
    std::reverse(nodes.begin(), nodes.end());

    // merge runs of identical lattice steps into single segments
    std::vector<Point2> pts;
    pts.reserve(nodes.size());
    auto point = [&](const std::pair<int, int>& n) {
        return Point2(n.first * dx, slab.y(n.second));
    };
    pts.push_back(point(nodes.front()));
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const int dc = nodes[i].first - nodes[i - 1].first;
        const int dr = nodes[i].second - nodes[i - 1].second;
        if (i + 1 < nodes.size()) {
            const int dc2 = nodes[i + 1].first - nodes[i].first;
            const int dr2 = nodes[i + 1].second - nodes[i].second;
            if (dc == dc2 && dr == dr2) continue;  // extend the current run
        }
        pts.push_back(point(nodes[i]));
    }
    return pts;
}

double flat_lower_bound(const SurfaceSpec& surface, double min_phi, int k, int m) {
    const double b = surface.beta;
    if (k == 0) return 4.0 * b * std::abs(m) * min_phi;
    const double gap = (k % 2 != 0) ? std::max(0.0, 4.0 * b * std::abs(m) - 2.0 * b)
                                    : 4.0 * b * std::abs(m);
    return std::hypot(k * kPi, gap) * min_phi;
}

// seam basepoints: grid rows with y in [0, src_span*beta]; rows outside are
// covered by the evenness and shift symmetries of the lifted metric (they
// correspond to inverse, mirrored or shifted words of equal length)
std::pair<int, int> source_row_range(const SurfaceSpec& surface, const Slab& slab, int ny_eff,
                                     int src_span) {
    if (surface.kind == SurfaceKind::Mobius) return {ny_eff / 2, ny_eff};
    const int rows_per_beta = ny_eff / 4;
    const int r0 = slab.row(0.0);
    return {r0, r0 + src_span * rows_per_beta};
}

int target_row(const SurfaceSpec& surface, const Slab& slab, int k, int m, int src_row) {
    const double y0 = slab.y(src_row);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return slab.row(sign * y0 + 4.0 * surface.beta * m);
}

// class (0, m) on the Klein bottle: the metric is x-invariant, so the
// straight vertical segment is optimal; its grid cost is m times the
// midpoint sum over one 4*beta period (independent of the basepoint)
double vertical_class_cost(const SurfaceSpec& surface, const Profile& profile, int m_abs,
                           int ny_eff) {
    const double b = surface.beta;
    const double dy = 4.0 * b / ny_eff;
    double sum = 0.0;
    for (int i = 0; i < ny_eff; ++i)
        sum += profile.value(fold_y(surface, -2.0 * b + (i + 0.5) * dy)) * dy;
    return m_abs * sum;
}

CurvePolyline vertical_witness(const SurfaceSpec& surface, int m) {
    const double b = surface.beta;
    std::vector<Point2> verts{{0.0, -2.0 * b * m}, {0.0, 2.0 * b * m}};
    return CurvePolyline(surface, std::move(verts), DeckWord{0, m});
}

void check_profile(const SurfaceSpec& surface, const Profile& profile) {
    if (std::abs(profile.beta() - surface.beta) > 1e-12 * std::max(1.0, surface.beta))
        throw std::invalid_argument("profile width does not match the surface");
}

struct GroupBest {
    double dp = kInf;
    int m = 0;
    int src_row = -1;
};

// One word group: all classes (k, m) for m in ms share the per-source DP;
// only the target row differs.
GroupBest run_group(const SurfaceSpec& surface, int k, const std::vector<int>& ms,
                    const GridConfig& grid, int ny_eff, const Slab& slab,
                    const Tables& tables, int src_span) {
    const int n_cols = k * grid.nx;
    const auto [src_lo, src_hi] = source_row_range(surface, slab, ny_eff, src_span);
    GroupBest best;
    std::vector<double> final_col;
    for (int src = src_lo; src <= src_hi; ++src) {
        run_dp(tables, slab, n_cols, src, final_col, nullptr);
        for (int m : ms) {
            const int tgt = target_row(surface, slab, k, m, src);
            const double d = final_col[tgt];
            if (d < best.dp) best = {d, m, src};
        }
    }
    return best;
}

std::string make_note(const SurfaceSpec& surface, const GridConfig& grid, int ny_eff) {
    std::ostringstream os;
    os << static_cast<int>(grid.stencil) << "-direction stencil, dx=pi/" << grid.nx
       << ", dy=" << (surface.kind == SurfaceKind::Mobius ? 2.0 : 4.0) * surface.beta / ny_eff
       << ", midpoint-rule edge weights; value is the quadrature length of the witness, an"
          " upper bound on the class minimum";
    return os.str();
}

}  // namespace

void validate(const GridConfig& grid) {
    if (grid.nx < 8 || grid.ny < 8) throw std::invalid_argument("grid must be at least 8x8");
    if (grid.k_max < 2) throw std::invalid_argument("k_max must be >= 2");
    if (grid.m_max < 1) throw std::invalid_argument("m_max must be >= 1");
}

std::pair<double, CurvePolyline> shortest_in_class(const SurfaceSpec& surface,
                                                   const Profile& profile, DeckWord word,
                                                   const GridConfig& grid) {
    validate(grid);
    check_profile(surface, profile);
    if (word.is_identity())
        throw std::invalid_argument("word (0,0) labels contractible loops only");
    if (surface.kind == SurfaceKind::Mobius && word.m != 0)
        throw std::invalid_argument("deck words on the Mobius strip have m = 0");

    // inverse words label the same free class with reversed orientation
    if (word.k < 0 || (word.k == 0 && word.m < 0)) {
        auto [len, wit] = shortest_in_class(surface, profile, inverse(word), grid);
        std::vector<Point2> rev(wit.vertices().rbegin(), wit.vertices().rend());
        return {len, CurvePolyline(surface, std::move(rev), word)};
    }

    const int ny_eff = effective_ny(surface, grid.ny);

    if (word.k == 0) {
        auto wit = vertical_witness(surface, word.m);
        return {curve_length(surface, profile, wit), std::move(wit)};
    }

    // The class displacement is even in the basepoint with (k,m) <-> (k,-m),
    // and 2*beta-periodic for even k but only 4*beta-periodic for odd k, so
    // odd words need the doubled seam window. The mirrored representative is
    // read off the same sweep; a winning mirror is reflected back into the
    // requested class at the end.
    std::vector<int> ms{word.m};
    if (word.m != 0) ms.push_back(-word.m);
    const int src_span = (surface.kind == SurfaceKind::Klein && word.k % 2 != 0) ? 2 : 1;
    const Slab slab = make_slab(surface, word.k, ms, ny_eff, src_span);
    const Tables tables = make_tables(surface, profile, slab, kPi / grid.nx, grid.stencil);
    const GroupBest best =
        run_group(surface, word.k, ms, grid, ny_eff, slab, tables, src_span);
    if (!std::isfinite(best.dp)) throw std::logic_error("systole search: image unreachable");

    const int n_cols = word.k * grid.nx;
    std::vector<double> final_col;
    std::vector<std::int8_t> parents;
    run_dp(tables, slab, n_cols, best.src_row, final_col, &parents);
    const int tgt = target_row(surface, slab, word.k, best.m, best.src_row);
    auto pts = backtrack(tables, slab, kPi / grid.nx, n_cols, parents, best.src_row, tgt);
    if (best.m != word.m)
        for (auto& p : pts) p.y() = -p.y();
    CurvePolyline wit(surface, std::move(pts), word);
    return {curve_length(surface, profile, wit), std::move(wit)};
}

SystoleEstimate systole_estimate(const SurfaceSpec& surface, const Profile& profile,
                                 const GridConfig& grid) {
    validate(grid);
    check_profile(surface, profile);
    const int ny_eff = effective_ny(surface, grid.ny);
    const double min_phi = profile.min_value();

    struct Winner {
        double dp = kInf;
        int k = 0, m = 0, src_row = -1;
        Slab slab;
    } best;

    if (surface.kind == SurfaceKind::Klein) {
        const double base = vertical_class_cost(surface, profile, 1, ny_eff);
        for (int m = 1; m <= grid.m_max; ++m)
            if (m * base < best.dp) best = {m * base, 0, m, -1, {}};
    }

    // Over the full word set, the seam window [0, beta] is enough: the
    // half-period shift isometry permutes the odd-k classes among each other
    // (m -> m-1), so the scan of all |m| <= m_max across that window sees
    // every basepoint of every class, up to words beyond the m bound whose
    // flat length already loses.
    for (int k = 1; k <= grid.k_max; ++k) {
        std::vector<int> ms;
        if (surface.kind == SurfaceKind::Mobius) {
            if (flat_lower_bound(surface, min_phi, k, 0) < best.dp) ms.push_back(0);
        } else {
            for (int m = -grid.m_max; m <= grid.m_max; ++m)
                if (flat_lower_bound(surface, min_phi, k, m) < best.dp) ms.push_back(m);
        }
        if (ms.empty()) continue;

        const Slab slab = make_slab(surface, k, ms, ny_eff, 1);
        const Tables tables =
            make_tables(surface, profile, slab, kPi / grid.nx, grid.stencil);
        const GroupBest gb =
            run_group(surface, k, ms, grid, ny_eff, slab, tables, 1);
        if (gb.dp < best.dp) best = {gb.dp, k, gb.m, gb.src_row, slab};
    }

    if (!std::isfinite(best.dp)) throw std::logic_error("systole search found no candidate");

    CurvePolyline witness = [&] {
        if (best.k == 0) return vertical_witness(surface, best.m);
        const Tables tables =
            make_tables(surface, profile, best.slab, kPi / grid.nx, grid.stencil);
        const int n_cols = best.k * grid.nx;
        std::vector<double> final_col;
        std::vector<std::int8_t> parents;
        run_dp(tables, best.slab, n_cols, best.src_row, final_col, &parents);
        const int tgt = target_row(surface, best.slab, best.k, best.m, best.src_row);
        auto pts =
            backtrack(tables, best.slab, kPi / grid.nx, n_cols, parents, best.src_row, tgt);
        return CurvePolyline(surface, std::move(pts), DeckWord{best.k, best.m});
    }();

    SystoleEstimate est{curve_length(surface, profile, witness), std::move(witness),
                        DeckWord{best.k, best.m},
                        {grid.nx, ny_eff},
                        make_note(surface, grid, ny_eff)};
    return est;
}

CurvePolyline fold_to_mobius(const SurfaceSpec& surface, const CurvePolyline& curve) {
    if (surface.kind != SurfaceKind::Klein)
        throw std::invalid_argument("fold_to_mobius expects a Klein bottle curve");
    const double b = surface.beta;

    // triangle fold: identity on |y| <= beta, reflections at odd multiples
    auto rho = [b](double y) {
        double t = std::remainder(y, 4.0 * b);  // in [-2b, 2b]
        if (t > b) return 2.0 * b - t;
        if (t < -b) return -2.0 * b - t;
        return t;
    };

    const auto& v = curve.vertices();
    std::vector<Point2> out;
    out.reserve(v.size() + 8);
    auto push = [&](const Point2& p) {
        if (!out.empty() && (out.back() - p).norm() < 1e-14) return;
        out.push_back(p);
    };

    push ({v.front().x(), rho(v.front().y())});
    for (std::size_t i = 1; i < v.size(); ++i) {
        const Point2 p0 = v[i - 1], p1 = v[i];
        const double dy = p1.y() - p0.y();
        // split at the fold lines y = (2j+1) b crossed by this segment
        if (std::abs(dy) > 1e-15) {
            const double ylo = std::min(p0.y(), p1.y()), yhi = std::max(p0.y(), p1.y());
            const long jlo = static_cast<long>(std::ceil((ylo / b - 1.0) / 2.0 - 1e-12));
            const long jhi = static_cast<long>(std::floor((yhi / b - 1.0) / 2.0 + 1e-12));
            std::vector<double> ts;
            for (long j = jlo; j <= jhi; ++j) {
                const double yc = (2.0 * j + 1.0) * b;
                const double t = (yc - p0.y()) / dy;
                if (t > 1e-12 && t < 1.0 - 1e-12) ts.push_back(t);
            }
            std::sort(ts.begin(), ts.end());
            for (double t : ts) {
                const Point2 q = p0 + t * (p1 - p0);
                push({q.x(), rho(q.y())});
            }
        }
        push({p1.x(), rho(p1.y())});
    }

    const DeckWord folded{curve.word().k, 0};
    const SurfaceSpec mob = SurfaceSpec::mobius(b);
    // the folded image lies in the embedded strip |y| <= beta; validate
    // against the Mobius closure when noncontractible, Klein otherwise
    if (folded.k != 0) return CurvePolyline(mob, std::move(out), folded);
    return CurvePolyline(surface, std::move(out), folded);
}

}  // namespace sysgeo
