#include "billiard/liouville.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace billiard {

namespace {

constexpr double kThetaExclusion = 1e-9;
constexpr int kMaxRedrawsPerSample = 1000;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng substream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

PhasePoint phase_point_from_uniforms(const Domain& dom, double u_s, double u_theta) {
    double g = u_s * dom.total_perimeter();
    std::size_t alpha = 0;
    while (alpha + 1 < dom.component_count() && g >= dom.perimeter(alpha)) {
        g -= dom.perimeter(alpha);
        ++alpha;
    }
    PhasePoint z;
    z.component = alpha;
    z.s = dom.reduce(alpha, g);
    // theta = arccos(1 - 2u)  <=>  tilt = -arcsin(1 - 2u).
    z.tilt = -std::asin(1.0 - 2.0 * u_theta);
    return z;
}

PhasePoint sample(const Domain& dom, Rng& rng) {
    for (;;) {
        const double us = uniform_open(rng);
        const double ut = uniform_open(rng);
        const PhasePoint z = phase_point_from_uniforms(dom, us, ut);
        if (std::abs(z.tilt) < kHalfPi - kThetaExclusion) return z;
    }
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 16) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

MCSamples mc_evaluate(const Domain& dom, const VectorFunctional& f, std::size_t m, std::uint64_t seed,
                      const MCOptions& opts) {
    MCSamples out;
    out.points.resize(m);
    out.values.resize(m);
    std::vector<std::size_t> redraws(m, 0);

    parallel_for(m, opts.threads, [&](std::size_t i) {
        Rng rng = substream(seed, i);
        for (int attempt = 0; attempt <= kMaxRedrawsPerSample; ++attempt) {
            const PhasePoint z = sample(dom, rng);
            if (auto v = f(z)) {
                out.points[i] = z;
                out.values[i] = std::move(*v);
                return;
            }
            ++redraws[i];
        }
        throw GeometrySuspicionError("sample " + std::to_string(i) + " stayed singular after " +
                                     std::to_string(kMaxRedrawsPerSample) + " redraws");
    });

    for (std::size_t r : redraws) out.n_singular_discarded += r;
    if (static_cast<double>(out.n_singular_discarded) > opts.max_singular_fraction * static_cast<double>(m))
        throw GeometrySuspicionError(std::to_string(out.n_singular_discarded) + " of " + std::to_string(m) +
                                     " samples were singular; check the domain geometry");
    return out;
}

MCEstimate summarize(const std::vector<std::vector<double>>& values, std::size_t discarded) {
    MCEstimate est;
    const std::size_t m = values.size();
    if (m == 0) throw ContractViolation("summarize: no samples");
    const std::size_t dim = values.front().size();
    est.n_samples = m;
    est.n_singular_discarded = discarded;
    est.mean.assign(dim, 0.0);
    est.std_error.assign(dim, 0.0);

    std::vector<double> column(m);
    for (std::size_t d = 0; d < dim; ++d) {
        for (std::size_t i = 0; i < m; ++i) column[i] = values[i].at(d);
        const double mean = pairwise_sum(column.data(), m) / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) column[i] = (column[i] - mean) * (column[i] - mean);
        const double ss = pairwise_sum(column.data(), m);
        est.mean[d] = mean;
        est.std_error[d] = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m)) : 0.0;
    }
    return est;
}

MCEstimate mc_integrate(const Domain& dom, const VectorFunctional& f, std::size_t m, std::uint64_t seed,
                        const MCOptions& opts) {
    if (m < 2) throw ContractViolation("mc_integrate needs at least 2 samples");
    const auto samples = mc_evaluate(dom, f, m, seed, opts);
    return summarize(samples.values, samples.n_singular_discarded);
}

MCEstimate mc_integrate(const Domain& dom, const ScalarFunctional& f, std::size_t m, std::uint64_t seed,
                        const MCOptions& opts) {
    const VectorFunctional wrapped = [&f](const PhasePoint& z) -> std::optional<std::vector<double>> {
        if (auto v = f(z)) return std::vector<double>{*v};
        return std::nullopt;
    };
    return mc_integrate(dom, wrapped, m, seed, opts);
}

}  // namespace billiard
