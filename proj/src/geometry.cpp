#include "billiard/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace billiard {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGLNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

constexpr double kAngleTolerance = 1e-12;
constexpr double kLineParamTolerance = 1e-12;
// Roots whose discriminant is within this fraction of scale^2 are one grazing contact.
constexpr double kGrazingDiscriminant = 1e-12;
constexpr int kPolylineChords = 512;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

bool is_full_turn(double sweep) { return std::abs(sweep) >= kTwoPi - kAngleTolerance; }

// Roots of t^2 + 2*beta*t + gamma = 0, ascending; grazing pairs merged.
std::vector<double> unit_quadratic_roots(double beta, double gamma, double scale) {
    const double disc = beta * beta - gamma;
    if (disc < 0.0) return {};
    if (disc <= kGrazingDiscriminant * scale * scale) return {-beta};
    const double root = std::sqrt(disc);
    // Stable pair: the larger-magnitude root first, the other from Vieta.
    const double q = -beta - sign_of(beta) * root;
    double t1 = q;
    double t2 = (q != 0.0) ? gamma / q : beta + root;
    if (t1 > t2) std::swap(t1, t2);
    return {t1, t2};
}

// Offset of `param` along an arc starting at `start` sweeping `sweep`, in
// [0, |sweep|], or nullopt if outside.
std::optional<double> arc_offset(double param, double start, double sweep) {
    const double off = wrap_angle(sign_of(sweep) * (param - start));
    const double span = std::abs(sweep);
    if (is_full_turn(sweep)) return off;
    if (off <= span + kAngleTolerance) return std::min(off, span);
    if (off >= kTwoPi - kAngleTolerance) return 0.0;
    return std::nullopt;
}

}  // namespace

double wrap_angle(double angle) {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

UnitVector2::UnitVector2(double x, double y) : v_{x, y} {
    if (std::abs(norm(v_) - 1.0) > kNormTolerance)
        throw ContractViolation("UnitVector2: components do not have unit norm");
}

UnitVector2 UnitVector2::normalized(Vec2 v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) throw ContractViolation("UnitVector2: cannot normalize zero vector");
    return UnitVector2(Unchecked{}, v.x / n, v.y / n);
}

// ---------------------------------------------------------------------------
// Construction

BoundarySegment::BoundarySegment(const LineSegment& line) : shape_(line) {
    length_ = distance(line.p0, line.p1);
    if (!(length_ > 0.0) || !std::isfinite(length_))
        throw std::invalid_argument("line segment has zero length");
    const auto t = UnitVector2::normalized(line.p1 - line.p0);
    start_ = {line.p0, t};
    end_ = {line.p1, t};
}

BoundarySegment::BoundarySegment(const CircularArc& arc) : shape_(arc) {
    if (!(arc.radius > 0.0)) throw std::invalid_argument("circular arc radius must be positive");
    if (arc.sweep == 0.0 || std::abs(arc.sweep) > kTwoPi + kAngleTolerance)
        throw std::invalid_argument("circular arc sweep must be nonzero and at most 2*pi");
    length_ = arc.radius * std::abs(arc.sweep);
    start_ = point_at(0.0);
    end_ = point_at(length_);
}

BoundarySegment::BoundarySegment(const EllipticalArc& arc) : shape_(arc) {
    if (!(arc.semi_minor > 0.0) || arc.semi_major < arc.semi_minor)
        throw std::invalid_argument("elliptical arc requires a >= b > 0");
    if (arc.sweep == 0.0 || std::abs(arc.sweep) > kTwoPi + kAngleTolerance)
        throw std::invalid_argument("elliptical arc sweep must be nonzero and at most 2*pi");
    build_ellipse_table();
    start_ = point_at(0.0);
    end_ = point_at(length_);
}

BoundarySegment::Kind BoundarySegment::kind() const {
    switch (shape_.index()) {
        case 0: return Kind::line;
        case 1: return Kind::circular_arc;
        default: return Kind::elliptical_arc;
    }
}

bool BoundarySegment::closed() const {
    if (const auto* c = as_circle()) return is_full_turn(c->sweep);
    if (const auto* e = as_ellipse()) return is_full_turn(e->sweep);
    return false;
}

// ---------------------------------------------------------------------------
// Elliptical arclength table

double BoundarySegment::ellipse_speed(double param) const {
    const auto& e = std::get<EllipticalArc>(shape_);
    const double s = std::sin(param), c = std::cos(param);
    return std::sqrt(e.semi_major * e.semi_major * s * s + e.semi_minor * e.semi_minor * c * c);
}

void BoundarySegment::build_ellipse_table() {
    const auto& e = std::get<EllipticalArc>(shape_);
    const double h = std::abs(e.sweep) / kArclengthKnots;
    const double dir = sign_of(e.sweep);
    cumulative_.assign(kArclengthKnots + 1, 0.0);
    for (int k = 0; k < kArclengthKnots; ++k) {
        const double mid = (k + 0.5) * h;
        double piece = 0.0;
        for (std::size_t i = 0; i < kGLNodes.size(); ++i)
            piece += kGLWeights[i] * ellipse_speed(e.start_param + dir * (mid + 0.5 * h * kGLNodes[i]));
        cumulative_[k + 1] = cumulative_[k] + 0.5 * h * piece;
    }
    length_ = cumulative_.back();
}

double BoundarySegment::ellipse_arclength_at_offset(double offset) const {
    const auto& e = std::get<EllipticalArc>(shape_);
    const double span = std::abs(e.sweep);
    const double h = span / kArclengthKnots;
    offset = std::clamp(offset, 0.0, span);
    const int k = std::min(static_cast<int>(offset / h), kArclengthKnots - 1);
    const double lo = k * h;
    const double width = offset - lo;
    if (width <= 0.0) return cumulative_[k];
    const double dir = sign_of(e.sweep);
    const double mid = lo + 0.5 * width;
    double piece = 0.0;
    for (std::size_t i = 0; i < kGLNodes.size(); ++i)
        piece += kGLWeights[i] * ellipse_speed(e.start_param + dir * (mid + 0.5 * width * kGLNodes[i]));
    return cumulative_[k] + 0.5 * width * piece;
}

double BoundarySegment::ellipse_offset_at_arclength(double u) const {
    const auto& e = std::get<EllipticalArc>(shape_);
    const double span = std::abs(e.sweep);
    const double h = span / kArclengthKnots;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const int k = std::clamp(static_cast<int>(it - cumulative_.begin()) - 1, 0, kArclengthKnots - 1);

    double lo = k * h, hi = (k + 1) * h;
    const double c0 = cumulative_[k], c1 = cumulative_[k + 1];
    double x = lo + h * (u - c0) / (c1 - c0);
    const double tol = 1e-13 * length_;
    const double dir = sign_of(e.sweep);
    for (int iter = 0; iter < 60; ++iter) {
        const double f = ellipse_arclength_at_offset(x) - u;
        if (std::abs(f) <= tol) break;
        if (f > 0.0) hi = x; else lo = x;
        double next = x - f / ellipse_speed(e.start_param + dir * x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    return x;
}

CurvePoint BoundarySegment::ellipse_point_at_offset(double offset) const {
    const auto& e = std::get<EllipticalArc>(shape_);
    const double dir = sign_of(e.sweep);
    const double t = e.start_param + dir * offset;
    const double c = std::cos(t), s = std::sin(t);
    const Vec2 local{e.semi_major * c, e.semi_minor * s};
    const Vec2 dlocal{-e.semi_major * s * dir, e.semi_minor * c * dir};
    return {e.center + rotate(local, e.rotation), UnitVector2::normalized(rotate(dlocal, e.rotation))};
}

// ---------------------------------------------------------------------------
// Evaluation

CurvePoint BoundarySegment::point_at(double u) const {
    const double slack = 1e-12 * std::max(1.0, length_);
    if (!(u >= -slack && u <= length_ + slack))
        throw ContractViolation("point_at: arclength " + std::to_string(u) + " outside [0, " +
                                std::to_string(length_) + "]");
    u = std::clamp(u, 0.0, length_);

    return std::visit(
        [&](const auto& shape) -> CurvePoint {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, LineSegment>) {
                const Vec2 e = shape.p1 - shape.p0;
                return {shape.p0 + e * (u / length_), UnitVector2::normalized(e)};
            } else if constexpr (std::is_same_v<T, CircularArc>) {
                const double dir = sign_of(shape.sweep);
                const double ang = shape.start_angle + dir * u / shape.radius;
                const double c = std::cos(ang), s = std::sin(ang);
                return {shape.center + Vec2{c, s} * shape.radius, UnitVector2::normalized(Vec2{-s * dir, c * dir})};
            } else {
                return ellipse_point_at_offset(ellipse_offset_at_arclength(u));
            }
        },
        shape_);
}

std::optional<RayHit> BoundarySegment::conic_hit(Point2 origin, Vec2 d, double t) const {
    const Point2 p = origin + d * t;
    if (const auto* c = as_circle()) {
        const Vec2 w = p - c->center;
        const double ang = std::atan2(w.y, w.x);
        const auto off = arc_offset(ang, c->start_angle, c->sweep);
        if (!off) return std::nullopt;
        const double dir = sign_of(c->sweep);
        return RayHit{t, p, std::min(*off * c->radius, length_),
                      UnitVector2::from_angle(ang + dir * 0.5 * kPi)};
    }
    const auto& e = std::get<EllipticalArc>(shape_);
    const Vec2 w = rotate(p - e.center, -e.rotation);
    const double param = std::atan2(w.y / e.semi_minor, w.x / e.semi_major);
    const auto off = arc_offset(param, e.start_param, e.sweep);
    if (!off) return std::nullopt;
    const double dir = sign_of(e.sweep);
    const Vec2 dlocal{-e.semi_major * std::sin(param) * dir, e.semi_minor * std::cos(param) * dir};
    return RayHit{t, p, std::min(ellipse_arclength_at_offset(*off), length_),
                  UnitVector2::normalized(rotate(dlocal, e.rotation))};
}

std::vector<double> BoundarySegment::conic_roots(Point2 origin, Vec2 d) const {
    if (const auto* c = as_circle()) {
        const Vec2 w = origin - c->center;
        return unit_quadratic_roots(dot(d, w), dot(w, w) - c->radius * c->radius, c->radius);
    }
    const auto& e = std::get<EllipticalArc>(shape_);
    const Vec2 o = rotate(origin - e.center, -e.rotation);
    const Vec2 dl = rotate(d, -e.rotation);
    const double ia2 = 1.0 / (e.semi_major * e.semi_major);
    const double ib2 = 1.0 / (e.semi_minor * e.semi_minor);
    const double A = dl.x * dl.x * ia2 + dl.y * dl.y * ib2;
    const double half_b = o.x * dl.x * ia2 + o.y * dl.y * ib2;
    const double C = o.x * o.x * ia2 + o.y * o.y * ib2 - 1.0;
    // The rescaled quadratic is in units of t, so merge at the minor-axis scale.
    return unit_quadratic_roots(half_b / A, C / A, e.semi_minor);
}

std::optional<RayHit> BoundarySegment::line_hit(Point2 origin, Vec2 d) const {
    const auto* line = as_line();
    const Vec2 e = line->p1 - line->p0;
    const double denom = cross(d, e);
    if (std::abs(denom) <= 1e-15 * length_) return std::nullopt;
    const Vec2 w = line->p0 - origin;
    const double t = cross(w, e) / denom;
    double lambda = cross(w, d) / denom;
    if (lambda < -kLineParamTolerance || lambda > 1.0 + kLineParamTolerance) return std::nullopt;
    lambda = std::clamp(lambda, 0.0, 1.0);
    return RayHit{t, origin + d * t, lambda * length_, start_.tangent};
}

std::vector<RayHit> BoundarySegment::line_hits(Point2 origin, UnitVector2 dir) const {
    std::vector<RayHit> hits;
    const Vec2 d = dir.vec();
    if (as_line()) {
        if (auto h = line_hit(origin, d)) hits.push_back(*h);
        return hits;
    }
    for (double t : conic_roots(origin, d))
        if (auto h = conic_hit(origin, d, t)) hits.push_back(*h);
    return hits;
}

std::optional<RayHit> BoundarySegment::intersect(Point2 origin, UnitVector2 dir, double t_min) const {
    const Vec2 d = dir.vec();
    if (as_line()) {
        auto h = line_hit(origin, d);
        if (h && h->t > t_min) return h;
        return std::nullopt;
    }
    auto roots = conic_roots(origin, d);
    std::sort(roots.begin(), roots.end());
    for (double t : roots) {
        if (t <= t_min) continue;
        if (auto h = conic_hit(origin, d, t)) return h;
    }
    return std::nullopt;
}

BoundingBox BoundarySegment::bounds() const {
    BoundingBox box{start_.point, start_.point};
    box.expand(end_.point);
    if (const auto* c = as_circle()) {
        for (int k = 0; k < 4; ++k) {
            const double ang = k * 0.5 * kPi;
            if (arc_offset(ang, c->start_angle, c->sweep))
                box.expand(c->center + Vec2{std::cos(ang), std::sin(ang)} * c->radius);
        }
    } else if (const auto* e = as_ellipse()) {
        const double cp = std::cos(e->rotation), sp = std::sin(e->rotation);
        const double tx = std::atan2(-e->semi_minor * sp, e->semi_major * cp);
        const double ty = std::atan2(e->semi_minor * cp, e->semi_major * sp);
        for (double t : {tx, tx + kPi, ty, ty + kPi}) {
            if (arc_offset(t, e->start_param, e->sweep)) {
                const Vec2 local{e->semi_major * std::cos(t), e->semi_minor * std::sin(t)};
                box.expand(e->center + rotate(local, e->rotation));
            }
        }
    }
    return box;
}

// ---------------------------------------------------------------------------
// Segment-segment intersection

namespace {

std::vector<Point2> line_against(const BoundarySegment& line_seg, const BoundarySegment& other) {
    const auto& l = *line_seg.as_line();
    const auto dir = UnitVector2::normalized(l.p1 - l.p0);
    const double len = line_seg.length();
    const double slack = kLineParamTolerance * len;
    std::vector<Point2> out;
    for (const auto& h : other.line_hits(l.p0, dir)) {
        if (h.t >= -slack && h.t <= len + slack) out.push_back(h.point);
    }
    return out;
}

bool point_on_segment(const BoundarySegment& seg, Point2 p, double tol) {
    if (const auto* l = seg.as_line()) {
        const Vec2 e = l->p1 - l->p0;
        const double lambda = dot(p - l->p0, e) / dot(e, e);
        if (lambda < -kLineParamTolerance || lambda > 1.0 + kLineParamTolerance) return false;
        return distance(l->p0 + e * lambda, p) <= tol;
    }
    if (const auto* c = seg.as_circle()) {
        if (std::abs(distance(p, c->center) - c->radius) > tol) return false;
        const Vec2 w = p - c->center;
        return arc_offset(std::atan2(w.y, w.x), c->start_angle, c->sweep).has_value();
    }
    // Ellipse membership via the arc's own parameterization.
    const auto& e = *seg.as_ellipse();
    const Vec2 w = rotate(p - e.center, -e.rotation);
    const double param = std::atan2(w.y / e.semi_minor, w.x / e.semi_major);
    const Vec2 on{e.semi_major * std::cos(param), e.semi_minor * std::sin(param)};
    if (distance(on, w) > tol) return false;
    return arc_offset(param, e.start_param, e.sweep).has_value();
}

std::vector<Point2> circle_against_circle(const CircularArc& a, const CircularArc& b, const BoundarySegment& sa,
                                          const BoundarySegment& sb) {
    std::vector<Point2> out;
    const Vec2 delta = b.center - a.center;
    const double d = norm(delta);
    const double scale = std::max(a.radius, b.radius);
    if (d <= 1e-12 * scale) {
        if (std::abs(a.radius - b.radius) > 1e-12 * scale) return out;
        // Same supporting circle: overlapping arcs share interior points.
        const Point2 mid_a = sa.point_at(0.5 * sa.length()).point;
        const Point2 mid_b = sb.point_at(0.5 * sb.length()).point;
        if (point_on_segment(sb, mid_a, 1e-9 * scale)) out.push_back(mid_a);
        else if (point_on_segment(sa, mid_b, 1e-9 * scale)) out.push_back(mid_b);
        return out;
    }
    if (d > a.radius + b.radius || d < std::abs(a.radius - b.radius)) return out;
    const double along = (a.radius * a.radius - b.radius * b.radius + d * d) / (2.0 * d);
    const double h = std::sqrt(std::max(0.0, a.radius * a.radius - along * along));
    const Vec2 u = delta / d;
    const Point2 base = a.center + u * along;
    const Vec2 off = perp_left(u) * h;
    const double tol = 1e-9 * scale;
    for (const Point2 p : {base + off, base - off}) {
        if (point_on_segment(sa, p, tol) && point_on_segment(sb, p, tol)) out.push_back(p);
        if (h == 0.0) break;
    }
    return out;
}

std::vector<Point2> polyline_against(const BoundarySegment& a, const BoundarySegment& b) {
    std::vector<Point2> out;
    Point2 prev = a.start_point();
    for (int k = 1; k <= kPolylineChords; ++k) {
        const Point2 next = a.point_at(a.length() * k / kPolylineChords).point;
        const double len = distance(prev, next);
        if (len > 0.0) {
            const BoundarySegment chord(LineSegment{prev, next});
            for (const auto& p : line_against(chord, b)) out.push_back(p);
        }
        prev = next;
    }
    return out;
}

}  // namespace

std::vector<Point2> segment_intersections(const BoundarySegment& a, const BoundarySegment& b) {
    if (a.as_line()) return line_against(a, b);
    if (b.as_line()) return line_against(b, a);
    if (a.as_circle() && b.as_circle()) return circle_against_circle(*a.as_circle(), *b.as_circle(), a, b);
    return polyline_against(a, b);
}

}  // namespace billiard
