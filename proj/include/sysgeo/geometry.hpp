#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <string>
#include <vector>

// Flat quotient surfaces (Mobius strip, Klein bottle), their deck groups,
// and invariant conformal factors reduced to the interval [0, beta].
//
// All types are immutable after construction and all operations are pure,
// so everything here is safe for concurrent use.

namespace sysgeo {

using Point2 = Eigen::Vector2d;
using Point3 = Eigen::Vector3d;

inline constexpr double kClosureTol = 1e-9;

// ---------------------------------------------------------------------------
// SurfaceSpec
// ---------------------------------------------------------------------------

enum class SurfaceKind { Mobius, Klein };

/// Quotient surface selector. The fundamental domain is fixed as
/// [0,pi] x [-beta,beta] for the Mobius strip and [0,pi] x [-2beta,2beta]
/// for the Klein bottle.
struct SurfaceSpec {
    SurfaceKind kind;
    double beta;

    static SurfaceSpec mobius(double beta);
    static SurfaceSpec klein(double beta);

    // beta for Mobius, 2*beta for Klein
    double half_height() const { return kind == SurfaceKind::Mobius ? beta : 2.0 * beta; }
    // Euclidean area of the fundamental domain
    double flat_area() const;
    // weight of the reduced 1D integral: 2*pi (Mobius) or 4*pi (Klein)
    double l2_weight() const;
};

const char* to_string(SurfaceKind kind);

// ---------------------------------------------------------------------------
// DeckWord
// ---------------------------------------------------------------------------

/// Element of the deck group, acting on the plane by
///   (x,y) -> (x + k*pi, (-1)^k y + 4*beta*m).
/// m is always 0 on the Mobius strip. (0,0) is the identity and labels
/// contractible loops only.
struct DeckWord {
    int k = 0;
    int m = 0;

    bool is_identity() const { return k == 0 && m == 0; }
    friend bool operator==(const DeckWord&, const DeckWord&) = default;
};

/// Word of "second after first": apply(second, apply(first, p)).
DeckWord compose(DeckWord first, DeckWord second);
DeckWord inverse(DeckWord w);

Point2 deck_apply(const SurfaceSpec& surface, DeckWord word, const Point2& p);

/// Folds a plane ordinate into [0, beta] using the invariances of admitted
/// conformal factors: evenness (both surfaces) and 2*beta-periodicity
/// (Klein). On the Mobius strip, ordinates beyond the strip are clamped.
double fold_y(const SurfaceSpec& surface, double y);

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

enum class ProfileKind { Flat, Phi0, MobiusOptimal, KleinOptimal, NamedExpression, Sampled };

/// Positive conformal factor stored on [0, beta] only; the extension to the
/// surface is by formula (see profile_eval), never by a 2D field.
/// Sampled profiles are piecewise linear. Closed-form profiles carry their
/// interior kink locations in knots() so quadrature can split there.
class Profile {
public:
    static Profile flat(double beta, double value);
    static Profile sampled(double beta, std::vector<double> ys, std::vector<double> values);
    static Profile expression(double beta, std::string name, std::function<double(double)> f,
                              std::vector<double> interior_knots = {},
                              ProfileKind kind = ProfileKind::NamedExpression);

    double beta() const { return beta_; }
    ProfileKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    bool is_sampled() const { return kind_ == ProfileKind::Sampled; }
    double scale() const { return scale_; }

    /// Value at |y| clamped into [0, beta]; evenness is built in.
    double value(double y) const;

    /// Global minimum over [0, beta] (exact for sampled profiles, dense
    /// sampling otherwise). Used by the systole search for pruning.
    double min_value() const { return min_value_; }

    /// Interior kink/sample ordinates in (0, beta), sorted.
    const std::vector<double>& knots() const { return *knots_; }

    Profile scaled(double c) const;

private:
    Profile() = default;

    double beta_ = 0.0;
    double scale_ = 1.0;
    double min_value_ = 0.0;
    ProfileKind kind_ = ProfileKind::Flat;
    std::string name_;
    std::function<double(double)> eval_;  // unscaled, defined on [0, beta]
    std::shared_ptr<const std::vector<double>> knots_;
};

/// Evaluation at an arbitrary plane point: fold the ordinate into [0, beta],
/// then evaluate. Independent of x. Total on the plane.
double profile_eval(const SurfaceSpec& surface, const Profile& profile, const Point2& p);

// ---------------------------------------------------------------------------
// CurvePolyline
// ---------------------------------------------------------------------------

/// Lifted closed curve: a polyline in the universal cover together with its
/// deck word. The constructor enforces closure (last vertex equals the deck
/// image of the first within kClosureTol), at least two vertices, and
/// distinct consecutive vertices.
class CurvePolyline {
public:
    CurvePolyline(const SurfaceSpec& surface, std::vector<Point2> vertices, DeckWord word);

    const std::vector<Point2>& vertices() const { return vertices_; }
    DeckWord word() const { return word_; }

    double euclidean_length() const;

private:
    std::vector<Point2> vertices_;
    DeckWord word_;
};

enum class CurveClass { Vertical, Horizontal };

/// Klein bottle only: Vertical iff the ordinate range of the lift has length
/// at least 4*beta, Horizontal otherwise.
CurveClass classify_curve(const SurfaceSpec& surface, const CurvePolyline& curve);

}  // namespace sysgeo
