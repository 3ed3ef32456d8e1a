#pragma once
// Liouville measure d(nu) = sin(theta) ds d(theta) on the billiard phase
// space: density, total mass, exact sampling and plain Monte Carlo.
//
// Sampling is reproducible: sample i of a run with master seed S draws from
// its own substream seeded from (S, i), so results do not depend on how the
// samples are scheduled across threads. Sums are pairwise in sample order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "billiard/billiard_map.hpp"

namespace billiard {

using Rng = std::mt19937_64;

/// Independent generator for sample `index` under master seed `seed`.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Uniform on the open interval (0, 1), 53 random bits.
double uniform_open(Rng& rng);

/// sin(theta).
inline double liouville_density(const PhasePoint& z) { return std::cos(z.tilt); }
inline double total_mass(const Domain& dom) { return 2.0 * dom.total_perimeter(); }

/// Inverse-CDF map from two uniforms to a phase point: global arclength
/// u_s * |boundary| (component chosen by position), theta = arccos(1 - 2 u_theta).
PhasePoint phase_point_from_uniforms(const Domain& dom, double u_s, double u_theta);

/// Exact Liouville sample. Draws with theta within 1e-9 of 0 or pi are redrawn.
PhasePoint sample(const Domain& dom, Rng& rng);

class GeometrySuspicionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MCOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Abort when more than this fraction of samples had to be redrawn.
    double max_singular_fraction = 0.01;
};

struct MCEstimate {
    std::vector<double> mean;
    std::vector<double> std_error;
    std::size_t n_samples{0};
    std::size_t n_singular_discarded{0};
};

/// A functional on phase space; nullopt marks a singular point.
using VectorFunctional = std::function<std::optional<std::vector<double>>(const PhasePoint&)>;
using ScalarFunctional = std::function<std::optional<double>(const PhasePoint&)>;

struct MCSamples {
    std::vector<PhasePoint> points;
    std::vector<std::vector<double>> values;
    std::size_t n_singular_discarded{0};
};

/// Evaluate f on m Liouville samples (singular draws are redrawn and
/// counted). Throws GeometrySuspicionError past the singular-fraction limit.
MCSamples mc_evaluate(const Domain& dom, const VectorFunctional& f, std::size_t m, std::uint64_t seed,
                      const MCOptions& opts = {});

/// Mean and standard error of per-sample vectors, pairwise-summed.
MCEstimate summarize(const std::vector<std::vector<double>>& values, std::size_t discarded = 0);

/// Estimate of the normalised integral of f d(nu) / nu(Phi). Requires m >= 2.
MCEstimate mc_integrate(const Domain& dom, const VectorFunctional& f, std::size_t m, std::uint64_t seed,
                        const MCOptions& opts = {});
MCEstimate mc_integrate(const Domain& dom, const ScalarFunctional& f, std::size_t m, std::uint64_t seed,
                        const MCOptions& opts = {});

/// Pairwise (cascade) sum.
double pairwise_sum(const double* data, std::size_t n);

/// Run body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace billiard
