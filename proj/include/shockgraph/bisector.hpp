#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "shockgraph/contour.hpp"
#include "shockgraph/geometry.hpp"
#include "shockgraph/polynomial.hpp"

namespace shock {

enum class BisectorKind : std::uint8_t {
    Line,                     ///< point-point, or two non-parallel segments
    Parabola,                 ///< point and segment
    PerpendicularAtEndpoint,  ///< segment and its own endpoint
    Midline,                  ///< two parallel segments
};

const char* to_string(BisectorKind kind);

/// Geometry of one generator, copied so a bisector is self-contained.
struct Generator {
    int id = -1;
    ElementKind kind = ElementKind::Point;
    Point2 a;
    Point2 b;
};

/// Locus of points equidistant to two boundary elements, together with its
/// analytic shock dynamics.
///
/// Internally every bisector is a quadratic curve p(t) = P0 + P1 t + P2 t^2
/// in a native parameter t: arc-length for the straight kinds, and the
/// coordinate along the directrix for parabolas. `arc_from_native` and
/// `native_from_arc` convert to the unit-speed parameter s (measured from t = 0).
class Bisector {
public:
    BisectorKind kind() const { return kind_; }
    const Generator& plus() const { return plus_; }
    const Generator& minus() const { return minus_; }
    /// Native-parameter domain; endpoints may be infinite.
    double t_min() const { return t_lo_; }
    double t_max() const { return t_hi_; }
    bool in_domain(double t) const { return t >= t_lo_ && t <= t_hi_; }

    Point2 point(double t) const;
    /// dp/dt (not unit length for parabolas).
    Point2 velocity(double t) const;
    Point2 tangent(double t) const { return normalized(velocity(t)); }
    double radius(double t) const;
    /// dr/dt in the native parameter.
    double radius_rate(double t) const;
    /// dr/ds along unit-speed arc length; equals +-cos(phi).
    double flow(double t) const { return radius_rate(t) / norm(velocity(t)); }
    /// Angle in [0, pi/2] between the shock tangent and the ray to a contact point.
    double half_angle(double t) const;
    /// Unsigned curvature of the bisector curve.
    double curvature(double t) const;

    Point2 contact_plus(double t) const;
    Point2 contact_minus(double t) const;

    /// Signed arc length from native 0 to t.
    double arc_from_native(double t) const;
    double native_from_arc(double s) const;
    double arc_length(double t0, double t1) const { return std::abs(arc_from_native(t1) - arc_from_native(t0)); }

    const PolyCurve& curve() const { return curve_; }
    const Poly& radius_sq() const { return radius_sq_; }

    /// Parameter of minimum radius over the closed domain.
    double source_param() const;
    /// Travel directions (+1/-1) along which shocks leave the source.
    std::vector<int> source_directions() const;

    /// Sub-intervals of [lo, hi] (within the domain) whose points lie in `box`.
    std::vector<std::pair<double, double>> inside_intervals(const Rect& box, double lo, double hi) const;
    /// The domain intersected with the parameter range that can reach `box`; empty if none.
    std::optional<std::pair<double, double>> bounded_domain(const Rect& box) const;

    /// Native parameter of the point on the curve closest to q (searches the domain).
    double project(Point2 q) const;

    /// Disambiguates the two angle-bisector branches of a segment pair.
    int branch() const { return branch_; }

private:
    friend std::vector<Bisector> bisector_segment_segment(const BoundaryElement&, const BoundaryElement&);
    friend std::optional<Bisector> bisector_point_segment(const BoundaryElement&, const BoundaryElement&);
    friend Bisector bisector_endpoint_own_segment(const BoundaryElement&, const BoundaryElement&);
    friend Bisector bisector_point_point(const BoundaryElement&, const BoundaryElement&);

    void finalize();

    BisectorKind kind_ = BisectorKind::Line;
    Generator plus_;
    Generator minus_;
    Point2 origin_;
    Point2 dir_;     ///< unit direction of travel at t (lines), directrix direction (parabola)
    Point2 normal_;  ///< parabola: unit normal from directrix toward the focus
    double h_ = 0.0;         ///< PP half-gap, parabola focal height, Midline radius
    double rate_ = 0.0;      ///< SS: r = rate * t on the domain
    double t_lo_ = 0.0;
    double t_hi_ = 0.0;
    int branch_ = 0;
    PolyCurve curve_;
    Poly radius_sq_;
};

Generator as_generator(const BoundaryElement& e);

/// Perpendicular bisector of two distinct points. Throws DegenerateInputError if coincident.
Bisector bisector_point_point(const BoundaryElement& a, const BoundaryElement& b);

/// Angle-bisector branches (or the midline) with both contact feet strictly inside
/// both open segments. Non-parallel pairs may yield two branches; pairs whose
/// interiors intersect throw InvalidInputError.
std::vector<Bisector> bisector_segment_segment(const BoundaryElement& u, const BoundaryElement& v);

/// Parabola with focus p and directrix along u, clipped to feet inside u.
/// Empty when p lies on u's supporting line outside u; throws InvalidInputError
/// when p touches u's interior.
std::optional<Bisector> bisector_point_segment(const BoundaryElement& p, const BoundaryElement& u);

/// Line through endpoint p perpendicular to its own segment u; r(t) = |t|.
Bisector bisector_endpoint_own_segment(const BoundaryElement& p, const BoundaryElement& u);

/// All bisectors of an element pair under the adjacency rules.
std::vector<Bisector> make_bisectors(const BoundaryElement& a, const BoundaryElement& b);

}  // namespace shock
