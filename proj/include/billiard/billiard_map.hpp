#pragma once
// The billiard map on (component, s, theta) coordinates, its inverse, and the
// two canonical involutions.
//
// theta is measured from the forward tangent toward the into-table normal, so
// theta lies in (0, pi) on the outer wall and on obstacles alike, and
// sigma(s, theta) = (s, pi - theta) holds on every component.
//
// A phase point stores tilt = theta - pi/2, the angle of the outgoing ray
// from the normal. sigma is then an exact sign flip, so sigma(sigma(z)) == z
// bit for bit, which pi - (pi - theta) does not guarantee in floating point.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "billiard/domain.hpp"

namespace billiard {

inline constexpr double kHalfPi = 0.5 * kPi;

struct PhasePoint {
    std::size_t component{0};
    double s{0.0};
    /// theta - pi/2, in (-pi/2, pi/2).
    double tilt{0.0};

    static constexpr PhasePoint from_theta(std::size_t component, double s, double theta) {
        return {component, s, theta - kHalfPi};
    }
    constexpr double theta() const { return tilt + kHalfPi; }

    bool operator==(const PhasePoint&) const = default;
};

/// Shorthand for PhasePoint::from_theta.
constexpr PhasePoint phase_point(std::size_t component, double s, double theta) {
    return PhasePoint::from_theta(component, s, theta);
}

/// Check 0 < theta < pi and s in [0, perimeter). Throws ContractViolation.
void validate(const Domain& dom, const PhasePoint& z);

/// Distance in phase space: max of the circular arclength gap (length units)
/// and the angle gap (radians). Infinite across components.
struct PhaseDistance {
    double arclength{0.0};
    double angle{0.0};
};
PhaseDistance phase_distance(const Domain& dom, const PhasePoint& a, const PhasePoint& b);

enum class Singularity { corner_hit, tangential, no_intersection };
const char* to_string(Singularity reason);

struct RegularStep {
    PhasePoint next;
    double chord_length{0.0};
};

struct SingularStep {
    Singularity reason{Singularity::no_intersection};
    /// Ray parameter of the offending hit, or 0 when nothing was hit.
    double diagnostic{0.0};
};

class StepOutcome {
public:
    StepOutcome(RegularStep r) : v_(r) {}   // NOLINT(google-explicit-constructor)
    StepOutcome(SingularStep s) : v_(s) {}  // NOLINT(google-explicit-constructor)

    bool regular() const { return std::holds_alternative<RegularStep>(v_); }
    const RegularStep& step() const { return std::get<RegularStep>(v_); }
    const PhasePoint& next() const { return step().next; }
    const SingularStep& singular() const { return std::get<SingularStep>(v_); }

private:
    std::variant<RegularStep, SingularStep> v_;
};

/// Tolerance policy for the map. Distances are fractions of the domain diameter.
struct MapTolerances {
    double launch_offset = 1e-10;  // t_min = launch_offset * diameter
    double corner = 1e-9;          // hit within corner * diameter of a true corner
    double tangent = 1e-12;        // sin(theta') below this is tangential
};

/// Outgoing unit direction cos(theta) * tangent + sin(theta) * inward_normal.
UnitVector2 direction_of(const Domain& dom, const PhasePoint& z);

/// The billiard map.
StepOutcome step(const Domain& dom, const PhasePoint& z, const MapTolerances& tol = {});

/// (alpha, s, theta) -> (alpha, s, pi - theta).
constexpr PhasePoint sigma(const PhasePoint& z) { return {z.component, z.s, -z.tilt}; }

/// Chord reversal, realised as sigma o step.
StepOutcome tau(const Domain& dom, const PhasePoint& z, const MapTolerances& tol = {});

/// The inverse map, sigma o step o sigma.
StepOutcome inverse_step(const Domain& dom, const PhasePoint& z, const MapTolerances& tol = {});

struct OrbitSummary {
    std::size_t steps_completed{0};
    /// Empty when all requested steps were regular.
    std::optional<SingularStep> termination;
    PhasePoint last;
};

/// Iterate the map up to n times. `visitor(k, z_k, z_{k+1}, chord_length)` is
/// called for each regular step; iteration stops at the first singular one.
template <class Visitor>
    requires std::invocable<Visitor&, std::size_t, const PhasePoint&, const PhasePoint&, double>
OrbitSummary orbit(const Domain& dom, PhasePoint z, std::size_t n, Visitor&& visitor,
                   const MapTolerances& tol = {}) {
    OrbitSummary summary;
    for (std::size_t k = 0; k < n; ++k) {
        const StepOutcome out = step(dom, z, tol);
        if (!out.regular()) {
            summary.termination = out.singular();
            summary.last = z;
            return summary;
        }
        visitor(k, z, out.next(), out.step().chord_length);
        z = out.next();
        ++summary.steps_completed;
    }
    summary.last = z;
    return summary;
}

inline OrbitSummary orbit(const Domain& dom, PhasePoint z, std::size_t n, const MapTolerances& tol = {}) {
    return orbit(dom, z, n, [](std::size_t, const PhasePoint&, const PhasePoint&, double) {}, tol);
}

}  // namespace billiard
