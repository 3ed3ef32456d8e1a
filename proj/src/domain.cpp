#include "billiard/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace billiard {

namespace {

constexpr double kClosureTolerance = 1e-9;    // x diameter
constexpr double kJunctionExclusion = 1e-6;   // x diameter
constexpr double kCornerTurn = 1e-9;          // radians
constexpr double kProbeOffset = 1e-6;         // x diameter

// Probe directions for parity tests; three so a ray grazing a vertex or a
// tangency on one of them is outvoted.
constexpr std::array<double, 3> kParityAngles = {0.7137160231, 2.3197452911, 4.1049273519};

std::string where(int component, int segment = -1) {
    std::string s = "component " + std::to_string(component);
    if (segment >= 0) s += ", segment " + std::to_string(segment);
    return s;
}

int crossings(const std::vector<BoundarySegment>& segs, Point2 p, double angle, double scale) {
    const auto dir = UnitVector2::from_angle(angle);
    std::vector<Point2> pts;
    for (const auto& seg : segs) {
        for (const auto& h : seg.line_hits(p, dir)) {
            if (h.t <= 0.0) continue;
            const bool dup = std::any_of(pts.begin(), pts.end(),
                                         [&](Point2 q) { return distance(q, h.point) <= 1e-12 * scale; });
            if (!dup) pts.push_back(h.point);
        }
    }
    return static_cast<int>(pts.size());
}

bool parity_inside(const std::vector<BoundarySegment>& segs, Point2 p, double scale) {
    int votes = 0;
    for (double a : kParityAngles) votes += crossings(segs, p, a, scale) % 2;
    return votes >= 2;
}

double tangent_turn(UnitVector2 a, UnitVector2 b) { return std::abs(std::atan2(cross(a, b), dot(a, b))); }

}  // namespace

const char* to_string(DomainError::Kind kind) {
    switch (kind) {
        case DomainError::Kind::empty: return "empty";
        case DomainError::Kind::open_chain: return "open_chain";
        case DomainError::Kind::self_intersecting: return "self_intersecting";
        case DomainError::Kind::wrong_orientation: return "wrong_orientation";
        case DomainError::Kind::obstacle_outside: return "obstacle_outside";
        case DomainError::Kind::obstacles_overlap: return "obstacles_overlap";
        case DomainError::Kind::invalid_parameter: return "invalid_parameter";
        case DomainError::Kind::unknown_builtin: return "unknown_builtin";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// BoundaryComponent

BoundaryComponent::BoundaryComponent(std::vector<BoundarySegment> segments) : segments_(std::move(segments)) {
    offsets_.reserve(segments_.size());
    double acc = 0.0;
    for (const auto& seg : segments_) {
        offsets_.push_back(acc);
        acc += seg.length();
    }
    perimeter_ = acc;
    const std::size_t n = segments_.size();
    junctions_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& prev = segments_[(j + n - 1) % n];
        const auto& cur = segments_[j];
        junctions_[j].point = cur.start_point();
        junctions_[j].is_corner = tangent_turn(prev.end_tangent(), cur.start_tangent()) > kCornerTurn;
    }
    inward_left_.assign(n, true);
}

std::size_t BoundaryComponent::segment_index(double s) const {
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), s);
    if (it == offsets_.begin()) return 0;
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

BoundingBox BoundaryComponent::bounds() const {
    BoundingBox box = segments_.front().bounds();
    for (const auto& seg : segments_) {
        const auto b = seg.bounds();
        box.expand(b.lo);
        box.expand(b.hi);
    }
    return box;
}

bool BoundaryComponent::encloses(Point2 p) const { return parity_inside(segments_, p, bounds().diagonal()); }

// ---------------------------------------------------------------------------
// Domain

const BoundaryComponent& Domain::component(std::size_t alpha) const {
    if (alpha >= components_.size())
        throw std::out_of_range("component index " + std::to_string(alpha) + " out of range (q = " +
                                std::to_string(components_.size()) + ")");
    return components_[alpha];
}

double Domain::reduce(std::size_t alpha, double s) const {
    const double p = perimeter(alpha);
    double r = std::fmod(s, p);
    if (r < 0.0) r += p;
    if (r >= p) r = 0.0;
    return r;
}

BoundaryFrame Domain::locate(std::size_t alpha, double s) const {
    const auto& comp = component(alpha);
    s = reduce(alpha, s);
    const std::size_t i = comp.segment_index(s);
    const auto& seg = comp.segments_[i];
    const double u = std::clamp(s - comp.offsets_[i], 0.0, seg.length());
    const auto cp = seg.point_at(u);
    const auto normal = comp.inward_left_[i] ? cp.tangent.left_normal() : cp.tangent.right_normal();
    return {cp.point, cp.tangent, normal};
}

bool Domain::contains(Point2 p) const {
    if (!components_.front().encloses(p)) return false;
    for (std::size_t a = 1; a < components_.size(); ++a)
        if (components_[a].encloses(p)) return false;
    return true;
}

namespace {

void check_closed(const std::vector<BoundarySegment>& segs, int alpha, double tol) {
    const std::size_t n = segs.size();
    for (std::size_t j = 0; j < n; ++j) {
        const auto& next = segs[(j + 1) % n];
        if (distance(segs[j].end_point(), next.start_point()) > tol)
            throw DomainError(DomainError::Kind::open_chain,
                              "open chain: " + where(alpha, static_cast<int>(j)) +
                                  " does not end where the next segment starts",
                              alpha, static_cast<int>(j));
    }
}

void check_simple(const std::vector<BoundarySegment>& segs, int alpha, double scale) {
    const std::size_t n = segs.size();
    const double near = kJunctionExclusion * scale;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::vector<Point2> allowed;
            if (j == i + 1) allowed.push_back(segs[j].start_point());
            if (i == 0 && j == n - 1) allowed.push_back(segs[0].start_point());
            for (const auto& p : segment_intersections(segs[i], segs[j])) {
                const bool at_junction = std::any_of(allowed.begin(), allowed.end(),
                                                     [&](Point2 q) { return distance(p, q) <= near; });
                if (!at_junction)
                    throw DomainError(DomainError::Kind::self_intersecting,
                                      "self-intersecting boundary: " + where(alpha, static_cast<int>(i)) +
                                          " crosses segment " + std::to_string(j),
                                      alpha, static_cast<int>(i));
            }
        }
    }
}

bool components_cross(const BoundaryComponent& a, const BoundaryComponent& b) {
    for (const auto& sa : a.segments())
        for (const auto& sb : b.segments())
            if (!segment_intersections(sa, sb).empty()) return true;
    return false;
}

}  // namespace

Domain build_domain(std::vector<std::vector<BoundarySegment>> components) {
    if (components.empty()) throw DomainError(DomainError::Kind::empty, "domain needs at least one component");

    BoundingBox box{};
    bool first = true;
    for (std::size_t a = 0; a < components.size(); ++a) {
        if (components[a].empty())
            throw DomainError(DomainError::Kind::empty, "empty boundary: " + where(static_cast<int>(a)),
                              static_cast<int>(a));
        for (const auto& seg : components[a]) {
            const auto b = seg.bounds();
            if (first) { box = b; first = false; }
            box.expand(b.lo);
            box.expand(b.hi);
        }
    }

    Domain dom;
    dom.diameter_ = box.diagonal();
    const double diam = dom.diameter_;

    for (std::size_t a = 0; a < components.size(); ++a) {
        const int alpha = static_cast<int>(a);
        check_closed(components[a], alpha, kClosureTolerance * diam);
        check_simple(components[a], alpha, diam);

        BoundaryComponent comp(std::move(components[a]));
        const double probe = kProbeOffset * diam;
        for (std::size_t i = 0; i < comp.segments_.size(); ++i) {
            const auto& seg = comp.segments_[i];
            const auto mid = seg.point_at(0.5 * seg.length());
            const bool left_is_interior = comp.encloses(mid.point + mid.tangent.left_normal().vec() * probe);
            // Outer wall: the table is the curve's interior; obstacles: its exterior.
            comp.inward_left_[i] = (a == 0) ? left_is_interior : !left_is_interior;
            const bool ccw = left_is_interior;
            if (!ccw)
                throw DomainError(DomainError::Kind::wrong_orientation,
                                  "boundary must be counter-clockwise: " + where(alpha, static_cast<int>(i)), alpha,
                                  static_cast<int>(i));
        }
        dom.components_.push_back(std::move(comp));
    }

    const auto& outer = dom.components_.front();
    for (std::size_t a = 1; a < dom.components_.size(); ++a) {
        const auto& obs = dom.components_[a];
        const int alpha = static_cast<int>(a);
        bool inside = true;
        for (const auto& seg : obs.segments()) inside = inside && outer.encloses(seg.start_point());
        if (!inside || components_cross(outer, obs))
            throw DomainError(DomainError::Kind::obstacle_outside,
                              "obstacle outside outer wall: " + where(alpha), alpha);
        for (std::size_t b = 1; b < a; ++b) {
            const auto& other = dom.components_[b];
            if (components_cross(obs, other) || obs.encloses(other.segments().front().start_point()) ||
                other.encloses(obs.segments().front().start_point()))
                throw DomainError(DomainError::Kind::obstacles_overlap,
                                  "overlapping obstacles: " + where(alpha) + " and component " + std::to_string(b),
                                  alpha);
        }
    }

    double total = 0.0;
    for (const auto& c : dom.components_) total += c.perimeter();
    dom.total_perimeter_ = total;
    return dom;
}

// ---------------------------------------------------------------------------
// Builtins

std::vector<BoundarySegment> circle_component(Point2 center, double radius) {
    return {BoundarySegment(CircularArc{center, radius, 0.0, kTwoPi})};
}

std::vector<BoundarySegment> ellipse_component(Point2 center, double a, double b, double rotation) {
    return {BoundarySegment(EllipticalArc{center, a, b, rotation, 0.0, kTwoPi})};
}

double signed_area(const std::vector<Point2>& vertices) {
    double acc = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        acc += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
    return 0.5 * acc;
}

std::vector<BoundarySegment> polygon_component(const std::vector<Point2>& vertices) {
    if (vertices.size() < 3)
        throw DomainError(DomainError::Kind::invalid_parameter, "polygon needs at least 3 vertices");
    if (!(signed_area(vertices) > 0.0))
        throw DomainError(DomainError::Kind::invalid_parameter, "polygon vertices must be counter-clockwise");
    std::vector<BoundarySegment> segs;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Point2 a = vertices[i], b = vertices[(i + 1) % vertices.size()];
        if (a == b) throw DomainError(DomainError::Kind::invalid_parameter, "polygon has repeated vertex");
        segs.emplace_back(LineSegment{a, b});
    }
    return segs;
}

std::vector<BoundarySegment> stadium_component(Point2 center, double straight, double radius) {
    if (!(straight > 0.0) || !(radius > 0.0))
        throw DomainError(DomainError::Kind::invalid_parameter, "stadium needs straight > 0 and r > 0");
    const double h = 0.5 * straight;
    return {
        BoundarySegment(LineSegment{center + Vec2{-h, -radius}, center + Vec2{h, -radius}}),
        BoundarySegment(CircularArc{center + Vec2{h, 0.0}, radius, -0.5 * kPi, kPi}),
        BoundarySegment(LineSegment{center + Vec2{h, radius}, center + Vec2{-h, radius}}),
        BoundarySegment(CircularArc{center + Vec2{-h, 0.0}, radius, 0.5 * kPi, kPi}),
    };
}

Domain circle_table(double radius) {
    if (!(radius > 0.0)) throw DomainError(DomainError::Kind::invalid_parameter, "circle needs r > 0");
    return build_domain({circle_component({0.0, 0.0}, radius)});
}

Domain ellipse_table(double a, double b) {
    if (!(b > 0.0) || a < b) throw DomainError(DomainError::Kind::invalid_parameter, "ellipse needs a >= b > 0");
    return build_domain({ellipse_component({0.0, 0.0}, a, b)});
}

Domain polygon_table(const std::vector<Point2>& vertices) { return build_domain({polygon_component(vertices)}); }

Domain stadium_table(double straight, double radius) {
    return build_domain({stadium_component({0.0, 0.0}, straight, radius)});
}

Domain concentric_annulus(double outer_radius, double inner_radius) {
    if (!(inner_radius > 0.0) || !(outer_radius > inner_radius))
        throw DomainError(DomainError::Kind::invalid_parameter, "annulus needs R > r > 0");
    return build_domain({circle_component({0.0, 0.0}, outer_radius), circle_component({0.0, 0.0}, inner_radius)});
}

Domain asymmetric_annulus(double outer_radius, double inner_radius, Vec2 offset) {
    if (!(inner_radius > 0.0) || !(norm(offset) + inner_radius < outer_radius))
        throw DomainError(DomainError::Kind::invalid_parameter,
                          "asymmetric annulus needs r > 0 and |offset| + r < R");
    return build_domain({circle_component({0.0, 0.0}, outer_radius), circle_component(offset, inner_radius)});
}

Domain unit_square() { return polygon_table({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}); }

Domain builtin(const std::string& name, const std::map<std::string, double>& params,
               const std::vector<Point2>& vertices) {
    auto take = [&](std::initializer_list<const char*> allowed) {
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, _] : params)
            if (!ok.count(key))
                throw DomainError(DomainError::Kind::invalid_parameter,
                                  "unknown parameter '" + key + "' for builtin " + name);
    };
    auto get = [&](const char* key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };

    if (name == "circle") {
        take({"r"});
        return circle_table(get("r", 1.0));
    }
    if (name == "ellipse") {
        take({"a", "b"});
        return ellipse_table(get("a", 2.0), get("b", 1.0));
    }
    if (name == "polygon") {
        take({});
        if (vertices.empty()) return unit_square();
        return polygon_table(vertices);
    }
    if (name == "stadium") {
        take({"straight", "r"});
        return stadium_table(get("straight", 2.0), get("r", 1.0));
    }
    if (name == "concentric_annulus") {
        take({"R", "r"});
        return concentric_annulus(get("R", 1.0), get("r", 0.5));
    }
    if (name == "asymmetric_annulus") {
        take({"R", "r", "offset_x", "offset_y"});
        return asymmetric_annulus(get("R", 1.0), get("r", 0.3), {get("offset_x", 0.2), get("offset_y", 0.0)});
    }
    throw DomainError(DomainError::Kind::unknown_builtin, "unknown builtin domain '" + name + "'");
}

}  // namespace billiard
