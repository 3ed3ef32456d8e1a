#include "billiard/rotation.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace billiard {

namespace {

// Neumaier-compensated running sum; orbits run to 1e6 steps.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
        else comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_{0.0};
    double comp_{0.0};
};

struct Footpoint {
    std::size_t component;
    double s;
};

// Accumulates per-component increments over a footpoint sequence.
class VisitAccumulator {
public:
    VisitAccumulator(const Domain& dom, std::size_t half) : dom_(dom), half_(half) {
        const std::size_t q = dom.component_count();
        sums_.resize(q);
        visits_.assign(q, 0);
        last_.assign(q, std::nullopt);
    }

    void visit(const Footpoint& f) {
        if (const auto prev = last_[f.component])
            sums_[f.component].add(arclength_gap(*prev, f.s, dom_.perimeter(f.component)));
        last_[f.component] = f.s;
        ++visits_[f.component];
    }

    // Call after each completed step.
    void stepped(std::size_t steps_done) {
        if (steps_done == half_) {
            half_sums_.clear();
            for (const auto& s : sums_) half_sums_.push_back(s.value());
        }
    }

    RotationVectorEstimate finish(std::size_t steps) const {
        RotationVectorEstimate est;
        const std::size_t q = sums_.size();
        est.steps = steps;
        est.components.resize(q);
        est.half_width.assign(q, std::numeric_limits<double>::quiet_NaN());
        double total = 0.0, total_half = 0.0;
        for (std::size_t a = 0; a < q; ++a) {
            auto& c = est.components[a];
            c.visits = visits_[a];
            c.upsilon = steps > 0 ? sums_[a].value() / static_cast<double>(steps) : 0.0;
            c.rho = c.upsilon / dom_.perimeter(a);
            if (steps < 2) {
                est.half_width[a] = 0.0;
            } else if (!half_sums_.empty() && steps > half_) {
                const double rho_half = half_sums_[a] / static_cast<double>(half_) / dom_.perimeter(a);
                est.half_width[a] = std::abs(c.rho - rho_half);
                total_half += rho_half;
            }
            total += c.rho;
        }
        if (steps < 2) est.half_width_total = 0.0;
        else if (!half_sums_.empty() && steps > half_) est.half_width_total = std::abs(total - total_half);
        else est.half_width_total = std::numeric_limits<double>::quiet_NaN();
        return est;
    }

private:
    const Domain& dom_;
    std::size_t half_;
    std::vector<CompensatedSum> sums_;
    std::vector<std::size_t> visits_;
    std::vector<std::optional<double>> last_;
    std::vector<double> half_sums_;
};

RotationEstimate collapse(const Domain& dom, const RotationVectorEstimate& v) {
    RotationEstimate r;
    r.steps = v.steps;
    r.upsilon = v.components.front().upsilon;
    r.rho = r.upsilon / dom.total_perimeter();
    r.half_width = v.half_width.front();
    r.terminated_singular = v.terminated_singular;
    r.termination = v.termination;
    return r;
}

void require_simply_connected(const Domain& dom, const char* what) {
    if (dom.component_count() != 1)
        throw ContractViolation(std::string(what) + " requires a simply connected table (q = 1)");
}

void require_steps(std::size_t n) {
    if (n < 1) throw ContractViolation("need at least one step");
}

}  // namespace

double arclength_gap(double s, double s_next, double p) {
    double xi = std::fmod(s_next - s, p);
    if (xi < 0.0) xi += p;
    if (xi >= p) xi = 0.0;
    return xi;
}

double footpoint_increment(const Domain& dom, const PhasePoint& z, const PhasePoint& z_next) {
    if (z.component != z_next.component)
        throw ContractViolation("footpoint_increment: points lie on different boundary components");
    return arclength_gap(z.s, z_next.s, dom.perimeter(z.component));
}

RotationVectorEstimate rotation_vector(const Domain& dom, const PhasePoint& z, std::size_t n) {
    require_steps(n);
    validate(dom, z);
    VisitAccumulator acc(dom, n / 2);
    acc.visit({z.component, z.s});
    const auto summary = orbit(dom, z, n, [&](std::size_t k, const PhasePoint&, const PhasePoint& next, double) {
        acc.visit({next.component, next.s});
        acc.stepped(k + 1);
    });
    auto est = acc.finish(summary.steps_completed);
    est.terminated_singular = summary.termination.has_value();
    est.termination = summary.termination;
    return est;
}

RotationEstimate rotation_number(const Domain& dom, const PhasePoint& z, std::size_t n) {
    require_simply_connected(dom, "rotation_number");
    return collapse(dom, rotation_vector(dom, z, n));
}

double rotation_number_total(const RotationVectorEstimate& v) {
    double total = 0.0;
    for (const auto& c : v.components) total += c.rho;
    return total;
}

RotationVectorEstimate reversed_rotation_vector(const Domain& dom, const PhasePoint& z, std::size_t n) {
    require_steps(n);
    validate(dom, z);
    std::vector<PhasePoint> forward;
    forward.reserve(n + 1);
    forward.push_back(z);
    const auto summary = orbit(dom, z, n, [&](std::size_t, const PhasePoint&, const PhasePoint& next, double) {
        forward.push_back(next);
    });
    if (summary.termination)
        throw SingularOrbitError(std::string("orbit is singular at step ") + std::to_string(summary.steps_completed) +
                                 " (" + to_string(summary.termination->reason) + ")");

    // Reversed orbit r_k = tau(z_{n-1-k}) = sigma(z_{n-k}); its k-th step is
    // recomputed from r_k.
    VisitAccumulator acc(dom, n / 2);
    const PhasePoint& first = forward[n];
    acc.visit({first.component, first.s});
    for (std::size_t k = 0; k < n; ++k) {
        const auto out = step(dom, sigma(forward[n - k]));
        if (!out.regular())
            throw SingularOrbitError("reversed orbit is singular at step " + std::to_string(k) + " (" +
                                     to_string(out.singular().reason) + ")");
        acc.visit({out.next().component, out.next().s});
        acc.stepped(k + 1);
    }
    return acc.finish(n);
}

RotationEstimate reversed_rotation_number(const Domain& dom, const PhasePoint& z, std::size_t n) {
    require_simply_connected(dom, "reversed_rotation_number");
    return collapse(dom, reversed_rotation_vector(dom, z, n));
}

ReversalCheck reversed_estimate_check(const Domain& dom, const PhasePoint& z, std::size_t n) {
    require_simply_connected(dom, "reversed_estimate_check");
    const auto fwd = rotation_number(dom, z, n);
    if (fwd.terminated_singular)
        throw SingularOrbitError("orbit is singular at step " + std::to_string(fwd.steps));
    const auto rev = reversed_rotation_number(dom, z, n);
    return {fwd.rho, rev.rho, n};
}

}  // namespace billiard
