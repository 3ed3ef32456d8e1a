#include "billiard/billiard_map.hpp"

#include <cmath>
#include <limits>

namespace billiard {

namespace {
constexpr double kGrazingLaunch = 1e-6;
}  // namespace

const char* to_string(Singularity reason) {
    switch (reason) {
        case Singularity::corner_hit: return "corner_hit";
        case Singularity::tangential: return "tangential";
        case Singularity::no_intersection: return "no_intersection";
    }
    return "unknown";
}

void validate(const Domain& dom, const PhasePoint& z) {
    if (z.component >= dom.component_count())
        throw ContractViolation("phase point component " + std::to_string(z.component) + " out of range");
    if (!(std::abs(z.tilt) < kHalfPi)) throw ContractViolation("phase point theta must lie in (0, pi)");
    if (!(z.s >= 0.0 && z.s < dom.perimeter(z.component)))
        throw ContractViolation("phase point s must lie in [0, perimeter)");
}

PhaseDistance phase_distance(const Domain& dom, const PhasePoint& a, const PhasePoint& b) {
    if (a.component != b.component) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    const double p = dom.perimeter(a.component);
    double ds = std::abs(a.s - b.s);
    ds = std::min(ds, p - ds);
    return {ds, std::abs(a.tilt - b.tilt)};
}

UnitVector2 direction_of(const Domain& dom, const PhasePoint& z) {
    const auto frame = dom.locate(z.component, z.s);
    return UnitVector2::normalized(frame.tangent.vec() * -std::sin(z.tilt) +
                                   frame.inward_normal.vec() * std::cos(z.tilt));
}

StepOutcome step(const Domain& dom, const PhasePoint& z, const MapTolerances& tol) {
    const auto frame = dom.locate(z.component, z.s);
    const auto dir = UnitVector2::normalized(frame.tangent.vec() * -std::sin(z.tilt) +
                                             frame.inward_normal.vec() * std::cos(z.tilt));
    const double diam = dom.diameter();
    const double t_min = tol.launch_offset * diam;

    std::optional<RayHit> best;
    std::size_t best_comp = 0, best_seg = 0;
    const auto& comps = dom.components();
    for (std::size_t a = 0; a < comps.size(); ++a) {
        const auto& segs = comps[a].segments();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const auto hit = segs[i].intersect(frame.point, dir, t_min);
            if (hit && (!best || hit->t < best->t)) {
                best = hit;
                best_comp = a;
                best_seg = i;
            }
        }
    }
    if (!best) {
        // A launch this close to the tangent only re-meets its own footpoint.
        if (std::cos(z.tilt) <= kGrazingLaunch) return SingularStep{Singularity::tangential, 0.0};
        return SingularStep{Singularity::no_intersection, 0.0};
    }

    const auto& comp = comps[best_comp];
    const std::size_t nseg = comp.segments().size();
    const auto& junctions = comp.junctions();
    for (std::size_t j : {best_seg, (best_seg + 1) % nseg}) {
        if (junctions[j].is_corner && distance(junctions[j].point, best->point) <= tol.corner * diam)
            return SingularStep{Singularity::corner_hit, best->t};
    }

    const UnitVector2 tangent = best->tangent;
    const auto normal = comp.inward_left()[best_seg] ? tangent.left_normal() : tangent.right_normal();

    // Mirror the incoming direction across the tangent line: the tangential
    // component is kept, the normal component flips sign.
    const double along = dot(dir.vec(), tangent.vec());
    const double across = -dot(dir.vec(), normal.vec());
    if (!(across >= tol.tangent)) return SingularStep{Singularity::tangential, best->t};

    PhasePoint next;
    next.component = best_comp;
    next.s = dom.reduce(best_comp, comp.offsets()[best_seg] + best->local_arclength);
    // theta' = atan2(across, along); tilt' = theta' - pi/2.
    next.tilt = std::atan2(-along, across);
    return RegularStep{next, best->t};
}

StepOutcome tau(const Domain& dom, const PhasePoint& z, const MapTolerances& tol) {
    const auto out = step(dom, z, tol);
    if (!out.regular()) return out;
    return RegularStep{sigma(out.next()), out.step().chord_length};
}

StepOutcome inverse_step(const Domain& dom, const PhasePoint& z, const MapTolerances& tol) {
    const auto out = step(dom, sigma(z), tol);
    if (!out.regular()) return out;
    return RegularStep{sigma(out.next()), out.step().chord_length};
}

}  // namespace billiard
