#include "billiard/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "billiard/geometry.hpp"
#include "billiard/liouville.hpp"

namespace billiard {

namespace {

struct Deviation {
    double magnitude;
    int sign;
};

// Deviations from 1/2 in decreasing magnitude.
std::vector<Deviation> deviations(const std::vector<double>& values) {
    std::vector<Deviation> d;
    d.reserve(values.size());
    for (double v : values) {
        const double y = v - 0.5;
        d.push_back({std::abs(y), y > 0.0 ? 1 : (y < 0.0 ? -1 : 0)});
    }
    std::sort(d.begin(), d.end(), [](const Deviation& a, const Deviation& b) { return a.magnitude > b.magnitude; });
    return d;
}

// Largest |signed count| over the sets {|y| >= a}, evaluated at tie-group ends.
template <class SignOf>
long max_prefix(const std::vector<Deviation>& d, SignOf sign_of) {
    long acc = 0, best = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        acc += sign_of(i);
        if (i + 1 == d.size() || d[i + 1].magnitude != d[i].magnitude) best = std::max(best, std::labs(acc));
    }
    return best;
}

}  // namespace

std::vector<std::size_t> histogram(const std::vector<double>& values, std::size_t bins) {
    if (bins < 2) throw ContractViolation("histogram needs at least 2 bins");
    std::vector<std::size_t> h(bins, 0);
    for (double v : values) {
        const double c = std::clamp(v, 0.0, 1.0);
        const auto b = std::min(bins - 1, static_cast<std::size_t>(c * static_cast<double>(bins)));
        ++h[b];
    }
    return h;
}

std::size_t mirror_deviation(const std::vector<std::size_t>& hist) {
    std::size_t worst = 0;
    const std::size_t n = hist.size();
    for (std::size_t b = 0; b < n; ++b) {
        const std::size_t a = hist[b], m = hist[n - 1 - b];
        worst = std::max(worst, a > m ? a - m : m - a);
    }
    return worst;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ContractViolation("ks_distance needs non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double reflection_ks_distance(const std::vector<double>& values) {
    if (values.empty()) throw ContractViolation("reflection_ks_distance needs samples");
    const auto d = deviations(values);
    const long m = max_prefix(d, [&](std::size_t i) { return d[i].sign; });
    return static_cast<double>(m) / static_cast<double>(values.size());
}

SymmetryTest symmetry_test(const std::vector<double>& values, std::size_t randomizations, std::uint64_t seed) {
    if (values.size() < 2) throw std::invalid_argument("insufficient samples: the symmetry test needs at least 2");
    if (randomizations < 1) throw std::invalid_argument("the symmetry test needs at least one randomization");
    const auto d = deviations(values);
    const double n = static_cast<double>(values.size());

    SymmetryTest out;
    out.randomizations = randomizations;
    const long observed = max_prefix(d, [&](std::size_t i) { return d[i].sign; });
    out.statistic = static_cast<double>(observed) / n;

    std::vector<long> null(randomizations);
    std::vector<int> flips(d.size());
    Rng rng = substream(seed, 0x5eed);
    std::size_t exceed = 0;
    for (std::size_t r = 0; r < randomizations; ++r) {
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (i % 64 == 0) {
                const auto bits = rng();
                for (std::size_t k = 0; k < 64 && i + k < d.size(); ++k)
                    flips[i + k] = ((bits >> k) & 1U) ? 1 : -1;
            }
        }
        null[r] = max_prefix(d, [&](std::size_t i) { return d[i].sign * flips[i]; });
        if (null[r] >= observed) ++exceed;
    }
    std::sort(null.begin(), null.end());
    const auto q = static_cast<std::size_t>(std::ceil(0.999 * static_cast<double>(randomizations)));
    out.threshold = static_cast<double>(null[std::min(randomizations - 1, q > 0 ? q - 1 : 0)]) / n;
    out.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + randomizations);
    return out;
}

}  // namespace billiard
