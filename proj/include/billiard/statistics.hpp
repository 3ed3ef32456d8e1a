#pragma once
// Distribution tests for rotation-number samples on [0, 1].

#include <cstddef>
#include <cstdint>
#include <vector>

namespace billiard {

/// Counts of `values` in `bins` equal bins on [0, 1]; 1.0 lands in the last bin.
std::vector<std::size_t> histogram(const std::vector<double>& values, std::size_t bins);

/// max_b |h(b) - h(bins - 1 - b)|.
std::size_t mirror_deviation(const std::vector<std::size_t>& hist);

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// ks_distance(values, 1 - values) in O(n log n) via the deviations from 1/2.
double reflection_ks_distance(const std::vector<double>& values);

struct SymmetryTest {
    double statistic{0.0};
    /// 99.9% quantile of the statistic under random reflection of each sample.
    double threshold{0.0};
    double p_value{1.0};
    std::size_t randomizations{0};
    bool passed() const { return p_value > 0.001; }
};

/// Tests whether the samples are distributed symmetrically about 1/2. The
/// null distribution is built by reflecting each sample about 1/2 with
/// probability 1/2, which leaves a symmetric law unchanged. Needs >= 2 values.
SymmetryTest symmetry_test(const std::vector<double>& values, std::size_t randomizations, std::uint64_t seed);

}  // namespace billiard
