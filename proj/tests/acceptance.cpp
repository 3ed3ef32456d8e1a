// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "billiard/experiments.hpp"
#include "billiard/liouville.hpp"
#include "billiard/rotation.hpp"
#include "billiard/statistics.hpp"
#include "oracles.hpp"

using namespace billiard;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.passed) ++failures;
    std::printf("CRITERION %d %s  %s: %s [%.2f s]\n", id, o.passed ? "PASS" : "FAIL", title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

struct NamedTable {
    const char* name;
    Domain dom;
};

std::vector<NamedTable> simple_tables() {
    return {{"circle", circle_table(1.0)},
            {"ellipse(2,1)", ellipse_table(2.0, 1.0)},
            {"stadium(2,1)", stadium_table(2.0, 1.0)},
            {"unit square", unit_square()}};
}

// Draws Liouville points from (seed, index) substreams until `accept` holds.
PhasePoint regular_point(const Domain& dom, std::uint64_t seed, std::size_t index,
                         const std::function<bool(const PhasePoint&)>& accept) {
    Rng rng = substream(seed, index);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const auto z = sample(dom, rng);
        if (accept(z)) return z;
    }
    throw GeometrySuspicionError("no regular point found");
}

Outcome circle_closed_form() {
    const auto dom = circle_table(1.0);
    double worst = 0.0, worst_oracle = 0.0;
    Rng rng = substream(101, 0);
    for (int i = 0; i < 100; ++i) {
        const auto z = sample(dom, rng);
        for (std::size_t n : {1u, 10u, 1000u}) {
            const double rho = rotation_number(dom, z, n).rho;
            // Chord oracle: every increment is 2 R theta.
            oracle::CircleState w{z.s, z.theta()};
            double gain = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const auto next = oracle::circle_step(1.0, w);
                gain += std::fmod(next.s - w.s + 2 * oracle::pi, 2 * oracle::pi);
                w = next;
            }
            const double rho_oracle = gain / static_cast<double>(n) / (2 * oracle::pi);
            worst = std::max(worst, std::abs(rho - z.theta() / kPi));
            worst_oracle = std::max(worst_oracle, std::abs(rho - rho_oracle));
        }
    }
    return {worst <= 1e-9 && worst_oracle <= 1e-9,
            fmt("max |rho_N - theta/pi| = %.3g, max |rho_N - chord oracle| = %.3g (tol 1e-9)", worst, worst_oracle)};
}

Outcome involutions() {
    bool ok = true;
    std::string detail;
    for (const auto& [name, dom] : simple_tables()) {
        const double tol = 1e-8 * dom.diameter();
        double worst_tau = 0.0, worst_conj = 0.0;
        bool sigma_exact = true;
        for (std::size_t i = 0; i < 100; ++i) {
            const auto z = regular_point(dom, 202, i, [&](const PhasePoint& p) {
                const auto f = step(dom, p);
                return f.regular() && tau(dom, f.next()).regular() && inverse_step(dom, f.next()).regular();
            });
            sigma_exact = sigma_exact && sigma(sigma(z)) == z;
            const auto t2 = tau(dom, tau(dom, z).next()).next();
            const auto back = inverse_step(dom, step(dom, z).next()).next();
            const auto dt = phase_distance(dom, t2, z), dc = phase_distance(dom, back, z);
            worst_tau = std::max({worst_tau, dt.arclength, dt.angle});
            worst_conj = std::max({worst_conj, dc.arclength, dc.angle});
        }
        const bool table_ok = sigma_exact && worst_tau <= tol && worst_conj <= tol;
        ok = ok && table_ok;
        detail += std::string(detail.empty() ? "" : "; ") + name + (sigma_exact ? " sigma^2 exact" : " sigma^2 BROKEN") +
                  fmt(", tau^2 %.2g, sigma-phi-sigma-phi %.2g", worst_tau, worst_conj);
    }
    return {ok, detail + " (tol 1e-8 x diameter)"};
}

Outcome reversal() {
    const std::size_t n = 10000;
    const double tol = 2.0 / static_cast<double>(n) + 1e-9;
    bool ok = true;
    std::string detail;
    for (const auto& [name, dom] : simple_tables()) {
        double worst = 0.0;
        for (std::size_t i = 0; i < 50; ++i) {
            std::optional<ReversalCheck> check;
            regular_point(dom, 303, i, [&](const PhasePoint& p) {
                try {
                    check = reversed_estimate_check(dom, p, n);
                    return true;
                } catch (const SingularOrbitError&) {
                    return false;
                }
            });
            worst = std::max(worst, check->deviation());
        }
        ok = ok && worst <= tol;
        detail += std::string(detail.empty() ? "" : "; ") + name + fmt(" %.3g", worst);
    }
    return {ok, "max |rho_N(z) + rho_N(reversed) - 1|: " + detail + fmt(" (tol %.6g)", tol)};
}

Outcome mean_rotation_number() {
    const std::size_t m = 2000, n = 2000;
    bool ok = true;
    std::string detail;
    const std::vector<NamedTable> tables = {{"circle", circle_table(1.0)},
                                            {"ellipse(2,1)", ellipse_table(2.0, 1.0)},
                                            {"stadium(2,1)", stadium_table(2.0, 1.0)}};
    for (const auto& [name, dom] : tables) {
        const ScalarFunctional f = [&](const PhasePoint& z) { return rotation_functional(dom, z, n); };
        const auto est = mc_integrate(dom, f, m, 404);
        const double tol = 3.0 * est.std_error[0] + 2.0 / static_cast<double>(n);
        const double dev = std::abs(est.mean[0] - 0.5);
        ok = ok && dev <= tol;
        detail += std::string(detail.empty() ? "" : "; ") + name +
                  fmt(" %.5f +- %.5f (|err| %.4f", est.mean[0], est.std_error[0], dev) + fmt(", tol %.4f)", tol);
    }
    return {ok, detail};
}

Outcome mean_rotation_vector() {
    const std::size_t m = 2000, n = 2000;
    bool ok = true;
    std::string detail;
    const std::vector<NamedTable> tables = {{"concentric(1,0.5)", concentric_annulus(1.0, 0.5)},
                                            {"asymmetric(1,0.3,0.2)", asymmetric_annulus(1.0, 0.3, {0.2, 0.0})}};
    for (const auto& [name, dom] : tables) {
        const VectorFunctional f = [&](const PhasePoint& z) -> std::optional<std::vector<double>> {
            const auto v = rotation_vector(dom, z, n);
            if (v.terminated_singular) return std::nullopt;
            return std::vector<double>{v.components[0].rho, v.components[1].rho};
        };
        const auto est = mc_integrate(dom, f, m, 505);
        std::string part = std::string(name) + " (";
        for (std::size_t a = 0; a < 2; ++a) {
            const double target = 0.5 * dom.perimeter(a) / dom.total_perimeter();
            const double tol = 3.0 * est.std_error[a] + 2.0 / static_cast<double>(n);
            const double dev = std::abs(est.mean[a] - target);
            ok = ok && dev <= tol;
            part += (a ? ", " : "") + fmt("%.4f vs target %.4f, tol %.4f", est.mean[a], target, tol);
        }
        detail += std::string(detail.empty() ? "" : "; ") + part + ")";
    }
    return {ok, detail};
}

Outcome symmetry() {
    const std::size_t m = 5000, n = 10000;
    bool ok = true;
    std::string detail;
    const std::vector<NamedTable> tables = {{"ellipse(2,1)", ellipse_table(2.0, 1.0)},
                                            {"asymmetric(1,0.3,0.2)", asymmetric_annulus(1.0, 0.3, {0.2, 0.0})}};
    for (const auto& [name, dom] : tables) {
        const VectorFunctional f = [&](const PhasePoint& z) -> std::optional<std::vector<double>> {
            if (auto rho = rotation_functional(dom, z, n)) return std::vector<double>{*rho};
            return std::nullopt;
        };
        const auto samples = mc_evaluate(dom, f, m, 606);
        std::vector<double> rho;
        for (const auto& v : samples.values) rho.push_back(v[0]);
        const auto test = symmetry_test(rho, 1999, 606);
        ok = ok && test.passed();
        detail += std::string(detail.empty() ? "" : "; ") + name +
                  fmt(" D = %.4f, 99.9%% null threshold %.4f, p = %.3f", test.statistic, test.threshold, test.p_value);
    }
    return {ok, detail};
}

Outcome stadium_concentration() {
    const auto dom = stadium_table(2.0, 1.0);
    const std::size_t n = 1000000;
    double lo = 1.0, hi = 0.0;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng = substream(seed, 0);
        const auto est = rotation_number(dom, sample(dom, rng), n);
        ok = ok && !est.terminated_singular && est.rho >= 0.48 && est.rho <= 0.52;
        lo = std::min(lo, est.rho);
        hi = std::max(hi, est.rho);
    }
    return {ok, fmt("rho_N over 10 seeds in [%.5f, %.5f] (required [0.48, 0.52])", lo, hi)};
}

Outcome annulus_oracle() {
    const auto dom = concentric_annulus(1.0, 0.5);
    const oracle::AnnulusOracle ref(1.0, 0.5);
    double worst_step = 0.0, worst_xi = 0.0, worst_rho = 0.0;
    Rng rng = substream(808, 0);
    for (int i = 0; i < 20; ++i) {
        const auto z = sample(dom, rng);
        const oracle::AnnulusOracle::State w{static_cast<int>(z.component), z.s, z.theta()};
        const auto out = step(dom, z);
        const auto w1 = ref.step(w);
        if (!out.regular() || static_cast<int>(out.next().component) != w1.component) return {false, "step mismatch"};
        const double p = ref.perimeter(w1.component);
        double ds = std::abs(out.next().s - w1.s);
        ds = std::min(ds, p - ds);
        worst_step = std::max({worst_step, ds, std::abs(out.next().theta() - w1.theta)});
        if (w1.component == w.component) {
            double xi = std::fmod(w1.s - w.s, p);
            if (xi < 0) xi += p;
            worst_xi = std::max(worst_xi, std::abs(footpoint_increment(dom, z, out.next()) - xi));
        }
        const auto v = rotation_vector(dom, z, 10000);
        const auto expected = ref.rotation_vector(w, 10000);
        for (std::size_t a = 0; a < 2; ++a)
            worst_rho = std::max(worst_rho, std::abs(v.components[a].rho - expected[a]));
    }
    const bool ok = worst_step <= 1e-9 && worst_xi <= 1e-9 && worst_rho <= 1e-9;
    return {ok, fmt("max deviation: step %.3g, increment %.3g, rotation vector %.3g (tol 1e-9)", worst_step, worst_xi,
                    worst_rho)};
}

Outcome shift_invariance() {
    const std::size_t n = 10000, k = 10;
    const double tol = static_cast<double>(k) / static_cast<double>(n) + 1e-9;
    const char* names[] = {"circle", "ellipse", "polygon", "stadium", "concentric_annulus", "asymmetric_annulus"};
    bool ok = true;
    std::string detail;
    for (const char* name : names) {
        const auto dom = builtin(name, {});
        double worst = 0.0;
        for (std::size_t i = 0; i < 20; ++i) {
            PhasePoint shifted;
            const auto z = regular_point(dom, 909, i, [&](const PhasePoint& p) {
                const auto head = orbit(dom, p, k);
                if (head.termination) return false;
                shifted = head.last;
                return !rotation_vector(dom, p, n).terminated_singular &&
                       !rotation_vector(dom, shifted, n).terminated_singular;
            });
            const double a = *rotation_functional(dom, z, n);
            const double b = *rotation_functional(dom, shifted, n);
            worst = std::max(worst, std::abs(a - b));
        }
        ok = ok && worst <= tol;
        detail += std::string(detail.empty() ? "" : "; ") + name + fmt(" %.3g", worst);
    }
    return {ok, "max |rho_N(z) - rho_N(phi^10 z)|: " + detail + fmt(" (tol %.6g)", tol)};
}

}  // namespace

int main() {
    run(1, "circle closed form", circle_closed_form);
    run(2, "involutions", involutions);
    run(3, "reversal identity", reversal);
    run(4, "mean rotation number", mean_rotation_number);
    run(5, "mean rotation vector", mean_rotation_vector);
    run(6, "distribution symmetry", symmetry);
    run(7, "stadium concentration", stadium_concentration);
    run(8, "annulus oracle equivalence", annulus_oracle);
    run(9, "shift invariance", shift_invariance);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
