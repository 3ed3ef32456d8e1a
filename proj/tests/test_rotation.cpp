#include <cmath>

#include "doctest.h"

#include "billiard/liouville.hpp"
#include "billiard/rotation.hpp"
#include "oracles.hpp"

using namespace billiard;

TEST_CASE("footpoint_increment examples") {
    const auto circle = circle_table(1.0);
    const auto next = step(circle, phase_point(0, 0.0, kPi / 3)).next();
    CHECK(footpoint_increment(circle, phase_point(0, 0.0, kPi / 3), next) ==
          doctest::Approx(oracle::circle_step(1.0, {0.0, kPi / 3}).s));
    CHECK(footpoint_increment(circle, phase_point(0, 1.0, 1.0), phase_point(0, 1.0, 2.0)) == 0.0);
    CHECK(footpoint_increment(unit_square(), phase_point(0, 3.5, 1.0), phase_point(0, 0.5, 1.0)) == 1.0);
    const auto annulus = concentric_annulus(1.0, 0.5);
    CHECK_THROWS_AS(footpoint_increment(annulus, phase_point(0, 0.0, 1.0), phase_point(1, 0.0, 1.0)),
                    ContractViolation);
}

TEST_CASE("arclength_gap range") {
    CHECK(arclength_gap(3.5, 0.5, 4.0) == 1.0);
    CHECK(arclength_gap(0.5, 3.5, 4.0) == 3.0);
    CHECK(arclength_gap(1.0, 1.0, 4.0) == 0.0);
    const double g = arclength_gap(1.0, 1.0 - 1e-17, 4.0);
    CHECK(g >= 0.0);
    CHECK(g < 4.0);
}

TEST_CASE("rotation_number on the circle") {
    const auto circle = circle_table(1.0);
    for (std::size_t n : {1u, 2u, 7u, 100u}) {
        const auto est = rotation_number(circle, phase_point(0, 2.0, kPi / 3), n);
        CHECK(std::abs(est.rho - 1.0 / 3.0) < 1e-12);
        CHECK(est.steps == n);
        CHECK_FALSE(est.terminated_singular);
    }
    CHECK(std::abs(rotation_number(circle, phase_point(0, 0.0, kHalfPi), 10).rho - 0.5) < 1e-12);

    // Closed form rho = theta / pi for random phase points.
    Rng rng = substream(31, 0);
    for (int i = 0; i < 100; ++i) {
        const auto z = sample(circle, rng);
        CHECK(std::abs(rotation_number(circle, z, 1000).rho - z.theta() / kPi) < 1e-9);
    }
    CHECK_THROWS_AS(rotation_number(circle, phase_point(0, 0.0, 1.0), 0), ContractViolation);
    CHECK_THROWS_AS(rotation_number(concentric_annulus(1.0, 0.5), phase_point(0, 0.0, 1.0), 10),
                    ContractViolation);
}

TEST_CASE("singular orbits are averaged over completed steps") {
    const auto square = unit_square();
    const auto f = square.locate(0, 3.5);
    const Vec2 to_corner = Point2{1.0, 0.0} - f.point;
    const double theta = std::atan2(dot(to_corner, f.inward_normal.vec()), dot(to_corner, f.tangent.vec()));
    const auto est = rotation_number(square, phase_point(0, 3.5, theta), 100);
    CHECK(est.terminated_singular);
    REQUIRE(est.termination);
    CHECK(est.termination->reason == Singularity::corner_hit);
    CHECK(est.steps == 0);
    CHECK(est.rho == 0.0);
}

TEST_CASE("half-width indicator") {
    const auto circle = circle_table(1.0);
    CHECK(rotation_number(circle, phase_point(0, 0.0, 1.0), 1).half_width == 0.0);
    CHECK(rotation_number(circle, phase_point(0, 0.0, 1.0), 100).half_width < 1e-12);
    const auto stadium = stadium_table(2.0, 1.0);
    const auto est = rotation_number(stadium, phase_point(0, 0.3, 1.2), 10000);
    CHECK(est.half_width > 0.0);
    CHECK(est.half_width < 0.1);
}

TEST_CASE("rotation_vector on the concentric annulus") {
    const auto annulus = concentric_annulus(1.0, 0.5);
    // Chord at pi/4 from the outer wall passes the centre at distance sqrt(2)/2 > 0.5.
    const auto v = rotation_vector(annulus, phase_point(0, 0.0, kPi / 4), 1000);
    REQUIRE(v.components.size() == 2);
    CHECK(std::abs(v.components[0].rho - 0.25) < 1e-12);
    CHECK(v.components[1].rho == 0.0);
    CHECK(v.components[1].visits == 0);
    CHECK(v.components[0].visits == 1001);
    CHECK(rotation_number_total(v) == doctest::Approx(0.25));
}

TEST_CASE("rotation_vector collapses to rotation_number when q = 1") {
    for (const auto& dom : {ellipse_table(2.0, 1.0), stadium_table(2.0, 1.0)}) {
        const auto z = phase_point(0, 0.4, 1.1);
        const auto v = rotation_vector(dom, z, 500);
        const auto r = rotation_number(dom, z, 500);
        REQUIRE(v.components.size() == 1);
        CHECK(v.components[0].rho == r.rho);
        CHECK(rotation_number_total(v) == r.rho);
    }
}

TEST_CASE("annulus estimates match the independent oracle") {
    const auto annulus = concentric_annulus(1.0, 0.5);
    const oracle::AnnulusOracle ref(1.0, 0.5);
    Rng rng = substream(41, 0);
    for (int i = 0; i < 20; ++i) {
        const auto z = sample(annulus, rng);
        const oracle::AnnulusOracle::State w{static_cast<int>(z.component), z.s, z.theta()};

        const auto out = step(annulus, z);
        REQUIRE(out.regular());
        const auto w1 = ref.step(w);
        CHECK(static_cast<int>(out.next().component) == w1.component);
        double ds = std::abs(out.next().s - w1.s);
        ds = std::min(ds, ref.perimeter(w1.component) - ds);
        CHECK(ds < 1e-9);
        CHECK(std::abs(out.next().theta() - w1.theta) < 1e-9);
        if (w1.component == w.component) {
            double xi = std::fmod(w1.s - w.s, ref.perimeter(w.component));
            if (xi < 0) xi += ref.perimeter(w.component);
            CHECK(std::abs(footpoint_increment(annulus, z, out.next()) - xi) < 1e-9);
        }

        const auto v = rotation_vector(annulus, z, 10000);
        const auto expected = ref.rotation_vector(w, 10000);
        CHECK(std::abs(v.components[0].rho - expected[0]) < 1e-9);
        CHECK(std::abs(v.components[1].rho - expected[1]) < 1e-9);
    }
}

TEST_CASE("oracle match for a start aimed through the obstacle") {
    const auto annulus = concentric_annulus(1.0, 0.5);
    const oracle::AnnulusOracle ref(1.0, 0.5);
    const auto z = phase_point(0, 0.3, kHalfPi - 0.2);
    const auto v = rotation_vector(annulus, z, 10000);
    const auto expected = ref.rotation_vector({0, 0.3, kHalfPi - 0.2}, 10000);
    CHECK(v.components[1].visits > 0);
    CHECK(std::abs(v.components[0].rho - expected[0]) < 1e-9);
    CHECK(std::abs(v.components[1].rho - expected[1]) < 1e-9);
}

TEST_CASE("estimate bounds") {
    const Domain tables[] = {ellipse_table(2.0, 1.0), asymmetric_annulus(1.0, 0.3, {0.2, 0.0}),
                             concentric_annulus(1.0, 0.5)};
    for (const auto& dom : tables) {
        Rng rng = substream(51, 0);
        for (int i = 0; i < 30; ++i) {
            const auto v = rotation_vector(dom, sample(dom, rng), 300);
            std::size_t visits = 0;
            for (std::size_t a = 0; a < v.components.size(); ++a) {
                const auto& c = v.components[a];
                CHECK(c.upsilon >= 0.0);
                CHECK(c.upsilon <= dom.perimeter(a));
                CHECK(c.rho >= 0.0);
                CHECK(c.rho <= 1.0);
                CHECK(c.rho == c.upsilon / dom.perimeter(a));
                visits += c.visits;
            }
            CHECK(visits <= v.steps + 1);
        }
    }
}

TEST_CASE("reversal identity") {
    const auto circle = circle_table(1.0);
    const auto c = reversed_estimate_check(circle, phase_point(0, 0.0, kPi / 3), 30);
    CHECK(std::abs(c.rho_forward - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(c.rho_reversed - 2.0 / 3.0) < 1e-12);
    const auto d = reversed_estimate_check(circle, phase_point(0, 0.0, kHalfPi), 30);
    CHECK(std::abs(d.rho_forward - 0.5) < 1e-12);
    CHECK(std::abs(d.rho_reversed - 0.5) < 1e-12);

    const auto ellipse = ellipse_table(2.0, 1.0);
    Rng rng = substream(61, 0);
    for (int i = 0; i < 5; ++i) {
        const auto r = reversed_estimate_check(ellipse, sample(ellipse, rng), 10000);
        CHECK(r.passed());
    }
}

TEST_CASE("reversal of a singular orbit is an error") {
    const auto square = unit_square();
    const auto f = square.locate(0, 3.5);
    const Vec2 to_corner = Point2{1.0, 0.0} - f.point;
    const double theta = std::atan2(dot(to_corner, f.inward_normal.vec()), dot(to_corner, f.tangent.vec()));
    CHECK_THROWS_AS(reversed_estimate_check(square, phase_point(0, 3.5, theta), 10), SingularOrbitError);
}

TEST_CASE("visit-frequency identity on multiply connected tables") {
    const Domain tables[] = {concentric_annulus(1.0, 0.5), asymmetric_annulus(1.0, 0.3, {0.2, 0.0})};
    for (const auto& dom : tables) {
        Rng rng = substream(71, 0);
        for (int i = 0; i < 10; ++i) {
            const auto z = sample(dom, rng);
            const std::size_t n = 5000;
            const auto fwd = rotation_vector(dom, z, n);
            REQUIRE_FALSE(fwd.terminated_singular);
            const auto rev = reversed_rotation_vector(dom, z, n);
            for (std::size_t a = 0; a < dom.component_count(); ++a) {
                const double p = dom.perimeter(a);
                const double lhs = fwd.components[a].upsilon + rev.components[a].upsilon;
                const double rhs = p * static_cast<double>(fwd.components[a].visits) / n;
                CHECK(std::abs(lhs - rhs) <= 2.0 * p / n);
                CHECK(rev.components[a].visits == fwd.components[a].visits);
            }
        }
    }
}

TEST_CASE("shift invariance") {
    const Domain tables[] = {circle_table(1.0), ellipse_table(2.0, 1.0), stadium_table(2.0, 1.0)};
    const std::size_t n = 10000, k = 10;
    for (const auto& dom : tables) {
        Rng rng = substream(81, 0);
        for (int i = 0; i < 5; ++i) {
            const auto z = sample(dom, rng);
            const auto shifted = orbit(dom, z, k);
            REQUIRE(shifted.steps_completed == k);
            const double a = rotation_number(dom, z, n).rho;
            const double b = rotation_number(dom, shifted.last, n).rho;
            CHECK(std::abs(a - b) <= static_cast<double>(k) / n + 1e-9);
        }
    }
}
