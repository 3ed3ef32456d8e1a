#pragma once
/**
 * @file geometry.hpp
 * @brief Exact-geometry primitives for piecewise-smooth planar boundaries.
 *
 * A boundary piece is one of three curve types, each parameterized by
 * arclength u in [0, length]:
 *   - a line segment p0 -> p1,
 *   - a circular arc (center, radius, start angle, signed sweep),
 *   - an elliptical arc (center, semi-axes a >= b, axis rotation, start
 *     parameter, signed parameter sweep).
 *
 * Elliptical arcs carry a cumulative arclength table (1024 knots, fixed-order
 * Gauss-Legendre per knot interval) built once at construction. Arclength
 * inversion brackets u in the table and polishes with Newton, falling back to
 * bisection when a Newton step leaves the bracket.
 *
 * Ray intersection is closed form for all three types. Ellipses are solved in
 * their own axis-aligned frame after a rigid transform.
 *
 * All types are immutable after construction.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace billiard {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
    constexpr Vec2 operator/(double k) const { return {x / k, y / k}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double k, Vec2 v) { return v * k; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
/// Counter-clockwise quarter turn.
constexpr Vec2 perp_left(Vec2 v) { return {-v.y, v.x}; }
inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

using Point2 = Vec2;

/// A direction of norm 1 (within 1e-12). Construct through normalized() or
/// from_angle(); the raw-components constructor validates.
class UnitVector2 {
public:
    static constexpr double kNormTolerance = 1e-12;

    UnitVector2() = default;
    UnitVector2(double x, double y);

    static UnitVector2 normalized(Vec2 v);
    static UnitVector2 from_angle(double angle) {
        return UnitVector2(Unchecked{}, std::cos(angle), std::sin(angle));
    }

    double x() const { return v_.x; }
    double y() const { return v_.y; }
    Vec2 vec() const { return v_; }
    operator Vec2() const { return v_; }  // NOLINT(google-explicit-constructor)

    UnitVector2 operator-() const { return UnitVector2(Unchecked{}, -v_.x, -v_.y); }
    UnitVector2 left_normal() const { return UnitVector2(Unchecked{}, -v_.y, v_.x); }
    UnitVector2 right_normal() const { return UnitVector2(Unchecked{}, v_.y, -v_.x); }

private:
    struct Unchecked {};
    UnitVector2(Unchecked, double x, double y) : v_{x, y} {}
    Vec2 v_{1.0, 0.0};
};

struct LineSegment {
    Point2 p0;
    Point2 p1;
};

struct CircularArc {
    Point2 center;
    double radius{1.0};
    double start_angle{0.0};
    /// Signed; positive is counter-clockwise. |sweep| <= 2*pi.
    double sweep{kTwoPi};
};

struct EllipticalArc {
    Point2 center;
    double semi_major{1.0};  // a
    double semi_minor{1.0};  // b
    double rotation{0.0};    // angle of the major axis
    double start_param{0.0};
    /// Signed parameter sweep; positive is counter-clockwise. |sweep| <= 2*pi.
    double sweep{kTwoPi};
};

struct RayHit {
    double t{0.0};
    Point2 point;
    double local_arclength{0.0};
    /// Forward unit tangent of the segment at the hit.
    UnitVector2 tangent;
};

struct CurvePoint {
    Point2 point;
    UnitVector2 tangent;
};

struct BoundingBox {
    Point2 lo;
    Point2 hi;
    void expand(Point2 p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    double diagonal() const { return distance(lo, hi); }
};

/// One smooth piece of a boundary, parameterized by arclength.
class BoundarySegment {
public:
    enum class Kind { line, circular_arc, elliptical_arc };

    static constexpr int kArclengthKnots = 1024;

    /// Validating constructors; throw std::invalid_argument on bad geometry.
    explicit BoundarySegment(const LineSegment& line);
    explicit BoundarySegment(const CircularArc& arc);
    explicit BoundarySegment(const EllipticalArc& arc);

    Kind kind() const;
    const LineSegment* as_line() const { return std::get_if<LineSegment>(&shape_); }
    const CircularArc* as_circle() const { return std::get_if<CircularArc>(&shape_); }
    const EllipticalArc* as_ellipse() const { return std::get_if<EllipticalArc>(&shape_); }

    double length() const { return length_; }
    bool closed() const;

    /// Point and unit forward tangent at arclength u in [0, length()].
    /// Throws ContractViolation when u is out of range.
    CurvePoint point_at(double u) const;

    Point2 start_point() const { return start_.point; }
    Point2 end_point() const { return end_.point; }
    UnitVector2 start_tangent() const { return start_.tangent; }
    UnitVector2 end_tangent() const { return end_.tangent; }

    /// Smallest-t intersection with t > t_min, if any.
    std::optional<RayHit> intersect(Point2 origin, UnitVector2 dir, double t_min) const;

    /// Every intersection of the full line origin + t*dir (any sign of t) with
    /// this piece, ascending in t. At most two. A grazing contact with a
    /// conic is reported once.
    std::vector<RayHit> line_hits(Point2 origin, UnitVector2 dir) const;

    /// Tight axis-aligned bounds.
    BoundingBox bounds() const;

    /// Arclength from the start of an elliptical arc to parameter offset
    /// `offset` in [0, |sweep|]. Exposed for testing the quadrature table.
    double ellipse_arclength_at_offset(double offset) const;
    const std::vector<double>& arclength_table() const { return cumulative_; }

private:
    void build_ellipse_table();
    double ellipse_offset_at_arclength(double u) const;
    CurvePoint ellipse_point_at_offset(double offset) const;
    double ellipse_speed(double param) const;
    /// Hit record for the point at ray parameter t, known to lie on the
    /// supporting conic; nullopt when it falls outside the arc's range.
    std::optional<RayHit> conic_hit(Point2 origin, Vec2 d, double t) const;
    std::vector<double> conic_roots(Point2 origin, Vec2 d) const;
    std::optional<RayHit> line_hit(Point2 origin, Vec2 d) const;

    std::variant<LineSegment, CircularArc, EllipticalArc> shape_;
    double length_{0.0};
    CurvePoint start_;
    CurvePoint end_;
    std::vector<double> cumulative_;  // elliptical arcs only, kArclengthKnots+1 entries
};

/// Length of a segment.
inline double segment_length(const BoundarySegment& seg) { return seg.length(); }
inline CurvePoint point_at_arclength(const BoundarySegment& seg, double u) { return seg.point_at(u); }
inline std::optional<RayHit> ray_intersect(const BoundarySegment& seg, Point2 origin, UnitVector2 dir,
                                           double t_min) {
    return seg.intersect(origin, dir, t_min);
}

/// All intersection points between two segments. Exact for any pair that
/// involves a line and for circle-circle; other conic pairs are resolved by
/// intersecting a 512-chord polyline of the first against the second.
std::vector<Point2> segment_intersections(const BoundarySegment& a, const BoundarySegment& b);

/// Reduce an angle to [0, 2*pi).
double wrap_angle(double angle);

}  // namespace billiard
