#pragma once
// Billiard tables: closed boundary components assembled into validated,
// possibly multiply connected, domains.
//
// Conventions:
//   - component 0 is the outer wall, components 1..q-1 are obstacles;
//   - every component is parameterized counter-clockwise by arclength,
//     with s = 0 at the start of its first segment;
//   - the into-the-table normal is found by a parity probe at build time
//     (left of the tangent on the outer wall, right of it on obstacles).

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "billiard/geometry.hpp"

namespace billiard {

class DomainError : public std::runtime_error {
public:
    enum class Kind {
        empty,
        open_chain,
        self_intersecting,
        wrong_orientation,
        obstacle_outside,
        obstacles_overlap,
        invalid_parameter,
        unknown_builtin,
    };

    DomainError(Kind kind, std::string message, int component = -1, int segment = -1)
        : std::runtime_error(std::move(message)), kind_(kind), component_(component), segment_(segment) {}

    Kind kind() const { return kind_; }
    int component() const { return component_; }
    int segment() const { return segment_; }

private:
    Kind kind_;
    int component_;
    int segment_;
};

const char* to_string(DomainError::Kind kind);

/// A junction between consecutive segments of a component.
struct Junction {
    Point2 point;
    /// Tangent turn across the junction exceeds 1e-9 rad.
    bool is_corner{false};
};

/// One closed boundary curve, as built by build_domain().
class Domain;

class BoundaryComponent {
public:
    explicit BoundaryComponent(std::vector<BoundarySegment> segments);

    const std::vector<BoundarySegment>& segments() const { return segments_; }
    /// Arclength at which segment i starts.
    const std::vector<double>& offsets() const { return offsets_; }
    double perimeter() const { return perimeter_; }
    /// Junction j sits at the start of segment j (end of segment j-1, cyclic).
    const std::vector<Junction>& junctions() const { return junctions_; }
    /// Per segment: true when the table lies to the left of the forward tangent.
    const std::vector<bool>& inward_left() const { return inward_left_; }

    /// Index of the segment holding arclength s in [0, perimeter).
    std::size_t segment_index(double s) const;

    /// Parity test against this closed curve alone.
    bool encloses(Point2 p) const;

    BoundingBox bounds() const;

private:
    friend class Domain;
    friend Domain build_domain(std::vector<std::vector<BoundarySegment>> components);
    std::vector<BoundarySegment> segments_;
    std::vector<double> offsets_;
    double perimeter_{0.0};
    std::vector<Junction> junctions_;
    std::vector<bool> inward_left_;
};

struct BoundaryFrame {
    Point2 point;
    UnitVector2 tangent;
    UnitVector2 inward_normal;
};

class Domain {
public:
    std::size_t component_count() const { return components_.size(); }
    const BoundaryComponent& component(std::size_t alpha) const;
    const std::vector<BoundaryComponent>& components() const { return components_; }

    double perimeter(std::size_t alpha) const { return component(alpha).perimeter(); }
    double total_perimeter() const { return total_perimeter_; }
    double diameter() const { return diameter_; }

    /// Reduce s into [0, perimeter(alpha)).
    double reduce(std::size_t alpha, double s) const;

    /// Point, forward tangent and into-table normal at arclength s on
    /// component alpha. s is reduced modulo the perimeter first. Throws
    /// std::out_of_range for a bad component index.
    BoundaryFrame locate(std::size_t alpha, double s) const;

    /// True when p lies strictly inside the outer wall and outside every
    /// obstacle (parity tests).
    bool contains(Point2 p) const;

private:
    friend Domain build_domain(std::vector<std::vector<BoundarySegment>> components);
    std::vector<BoundaryComponent> components_;
    double total_perimeter_{0.0};
    double diameter_{0.0};
};

/// Validate and assemble. The first component is the outer wall. Throws
/// DomainError naming the offending component/segment.
Domain build_domain(std::vector<std::vector<BoundarySegment>> components);

inline BoundaryFrame locate(const Domain& dom, std::size_t alpha, double s) { return dom.locate(alpha, s); }

// ---------------------------------------------------------------------------
// Builtin tables

/// Closed component builders, all counter-clockwise.
std::vector<BoundarySegment> circle_component(Point2 center, double radius);
std::vector<BoundarySegment> ellipse_component(Point2 center, double a, double b, double rotation = 0.0);
std::vector<BoundarySegment> polygon_component(const std::vector<Point2>& vertices);
/// Straight sides of length `straight` joined by semicircles of `radius`,
/// centered at `center`; s = 0 at the lower-left end of the bottom side.
std::vector<BoundarySegment> stadium_component(Point2 center, double straight, double radius);

Domain circle_table(double radius);
Domain ellipse_table(double a, double b);
Domain polygon_table(const std::vector<Point2>& vertices);
Domain stadium_table(double straight, double radius);
Domain concentric_annulus(double outer_radius, double inner_radius);
Domain asymmetric_annulus(double outer_radius, double inner_radius, Vec2 offset);
/// Unit square with vertices (0,0), (1,0), (1,1), (0,1).
Domain unit_square();

/// Named builtin with numeric parameters. Recognised names and keys:
///   circle {r}, ellipse {a, b}, polygon (vertices), stadium {straight, r},
///   concentric_annulus {R, r}, asymmetric_annulus {R, r, offset_x, offset_y}.
/// Missing keys fall back to: circle r=1; ellipse a=2, b=1; polygon = unit
/// square; stadium straight=2, r=1; concentric_annulus R=1, r=0.5;
/// asymmetric_annulus R=1, r=0.3, offset=(0.2, 0). Unknown keys are rejected.
Domain builtin(const std::string& name, const std::map<std::string, double>& params,
               const std::vector<Point2>& vertices = {});

/// Signed area of a closed polygon (positive for counter-clockwise).
double signed_area(const std::vector<Point2>& vertices);

}  // namespace billiard
