#pragma once
// Footpoint increments and their Birkhoff averages: footpoint gain, rotation
// number (simply connected tables) and rotation vector (q-connected tables).

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "billiard/billiard_map.hpp"

namespace billiard {

/// Raised by checks that need a fully regular orbit.
class SingularOrbitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Positive arclength from s to s_next along a component of perimeter p, in [0, p).
double arclength_gap(double s, double s_next, double p);

/// (s_next - s) mod |component|. Both points must sit on the same component.
double footpoint_increment(const Domain& dom, const PhasePoint& z, const PhasePoint& z_next);

struct RotationEstimate {
    double rho{0.0};
    double upsilon{0.0};
    /// Steps actually averaged over (less than requested if truncated).
    std::size_t steps{0};
    /// |rho_N - rho_{N/2}|; a convergence indicator, not an error bound.
    /// NaN when the orbit ended before N/2 steps.
    double half_width{0.0};
    bool terminated_singular{false};
    std::optional<SingularStep> termination;
};

/// Birkhoff average of the footpoint increment over n steps. Requires q = 1
/// and n >= 1. A singular orbit is averaged over its completed steps.
RotationEstimate rotation_number(const Domain& dom, const PhasePoint& z, std::size_t n);

struct ComponentRotation {
    double upsilon{0.0};
    double rho{0.0};
    /// Footpoints of z, phi(z), ..., phi^N(z) lying on this component.
    std::size_t visits{0};
};

struct RotationVectorEstimate {
    std::vector<ComponentRotation> components;
    std::size_t steps{0};
    std::vector<double> half_width;
    /// Half-width of rho_1 + ... + rho_q.
    double half_width_total{0.0};
    bool terminated_singular{false};
    std::optional<SingularStep> termination;
};

/// Per-component gains: the increments between consecutive visits to a
/// component are summed and divided by the total step count.
RotationVectorEstimate rotation_vector(const Domain& dom, const PhasePoint& z, std::size_t n);

/// rho_1 + ... + rho_q.
double rotation_number_total(const RotationVectorEstimate& v);

/// The same estimators evaluated on the time reversal of the n-step orbit of
/// z: the orbit segment z_0..z_n is mapped by tau onto a chord sequence
/// traversed backwards. Every reversed step is recomputed with a fresh map
/// evaluation from tau(z_k), so no round-off is carried along the orbit.
/// Throws SingularOrbitError if any step is singular.
RotationEstimate reversed_rotation_number(const Domain& dom, const PhasePoint& z, std::size_t n);
RotationVectorEstimate reversed_rotation_vector(const Domain& dom, const PhasePoint& z, std::size_t n);

struct ReversalCheck {
    double rho_forward{0.0};
    double rho_reversed{0.0};
    std::size_t steps{0};

    double deviation() const { return std::abs(rho_forward + rho_reversed - 1.0); }
    double tolerance() const { return 2.0 / static_cast<double>(steps) + 1e-9; }
    bool passed() const { return deviation() <= tolerance(); }
};

/// rho_N of z and of its time-reversed orbit. Requires q = 1 and a regular
/// n-step orbit (throws SingularOrbitError otherwise).
ReversalCheck reversed_estimate_check(const Domain& dom, const PhasePoint& z, std::size_t n);

}  // namespace billiard
