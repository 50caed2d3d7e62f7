#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bistab/errors.hpp"
#include "bistab/model.hpp"
#include "oracles.hpp"

using namespace bistab;

namespace {
const double kCs[] = {4.5, 5.0, 6.0, 8.0, 10.0};
}  // namespace

TEST_CASE("g at reference points") {
    CHECK(g_eval(5, 0) == 0.0);
    CHECK(g_eval(5, kSqrt3) == doctest::Approx(-kSqrt3 * 7.0 / 2.0).epsilon(1e-14));
    const double x2 = oracle::critical_points(5).x2;
    CHECK(g_eval(5, x2) == doctest::Approx(-5.948274204443681).epsilon(1e-12));
    for (double c : kCs)
        for (double x = -3; x <= 6; x += 0.37) CHECK(g_eval(c, x) == doctest::Approx(oracle::g(c, x)).epsilon(1e-14));
}

TEST_CASE("g derivatives") {
    CHECK(g_derivs(5, 0).d1 == doctest::Approx(-11.0));
    for (double c : kCs) CHECK(std::abs(g_derivs(c, kSqrt3).d2) < 1e-12);

    const double h = 1e-5;
    const Derivs d = g_derivs(5, 1.0);
    const double fd1 = (g_eval(5, 1 + h) - g_eval(5, 1 - h)) / (2 * h);
    const double fd2 = (g_derivs(5, 1 + h).d1 - g_derivs(5, 1 - h).d1) / (2 * h);
    const double fd3 = (g_derivs(5, 1 + h).d2 - g_derivs(5, 1 - h).d2) / (2 * h);
    CHECK(d.d1 == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(d.d2 == doctest::Approx(fd2).epsilon(1e-6));
    CHECK(d.d3 == doctest::Approx(fd3).epsilon(1e-6));
}

TEST_CASE("gbar branches and smoothness at the origin") {
    CHECK(gbar_eval(5, -1) == doctest::Approx(12.0));
    CHECK(gbar_eval(5, 2) == g_eval(5, 2));
    for (double c : kCs) {
        const double h = 1e-6;
        CHECK(std::abs(gbar_eval(c, 1e-12) - gbar_eval(c, -1e-12)) < 1e-8);
        CHECK(gbar_deriv(c, 0.0) == doctest::Approx(-(1 + 2 * c)));
        const double left1 = (gbar_eval(c, 0) - gbar_eval(c, -h)) / h;
        const double right1 = (gbar_eval(c, h) - gbar_eval(c, 0)) / h;
        CHECK(std::abs(left1 - right1) < 1e-8);
        CHECK(std::abs(gbar_derivs(c, -1e-11).d2 - gbar_derivs(c, 1e-11).d2) < 1e-8);
    }
}

TEST_CASE("curvature sign pattern and the d-concavity band") {
    const double lo = std::sqrt(3 - 2 * std::numbers::sqrt2), hi = std::sqrt(3 + 2 * std::numbers::sqrt2);
    for (double c : kCs) {
        for (double x = 0.01; x < 6; x += 0.01) {
            const Derivs d = g_derivs(c, x);
            if (x < kSqrt3 - 1e-9) CHECK(d.d2 > 0);
            if (x > kSqrt3 + 1e-9) CHECK(d.d2 < 0);
            if (x > lo + 1e-9 && x < hi - 1e-9) CHECK(d.d3 < 0);
            if (x < lo - 1e-9 || x > hi + 1e-9) CHECK(d.d3 > 0);
        }
    }
}

TEST_CASE("saddle-node points against bisection of g'") {
    for (double c : kCs) {
        const auto cp = oracle::critical_points(c);
        CHECK(x1_of(c) == doctest::Approx(cp.x1).epsilon(1e-12));
        CHECK(x2_of(c) == doctest::Approx(cp.x2).epsilon(1e-12));
        CHECK(lambda1_of(c) == doctest::Approx(-oracle::g(c, cp.x2)).epsilon(1e-12));
        CHECK(lambda2_of(c) == doctest::Approx(-oracle::g(c, cp.x1)).epsilon(1e-12));
    }
}

TEST_CASE("diagnostics at c = 5") {
    // 30-digit references.
    const auto d = diagnostics(5);
    CHECK(d.x1_v() == doctest::Approx(1.328131026104055105).epsilon(1e-13));
    CHECK(d.x2_v() == doctest::Approx(2.497212040956832664).epsilon(1e-13));
    CHECK(d.lam1_v() == doctest::Approx(5.948274204443680919).epsilon(1e-13));
    CHECK(d.lam2_v() == doctest::Approx(6.133354220061800315).epsilon(1e-13));
    CHECK(d.cshift == doctest::Approx(6.062177826491070527).epsilon(1e-13));
    CHECK(d.lam3 == doctest::Approx(3.949747468305833).epsilon(1e-9));
    CHECK(d.lam4 == doctest::Approx(5.949747468305833).epsilon(1e-9));
    CHECK(std::abs(d.lam4 - d.lam3 - 2.0) < 1e-12);
    CHECK(d.h4_v() == doctest::Approx(d.lam4 - d.lam1_v()));
    CHECK(d.h4_v() > 0);
    CHECK(d.dfrak == doctest::Approx(0.25));
}

TEST_CASE("band thresholds are values of -g at the band ends") {
    for (double c : kCs) {
        CHECK(lambda3_of(c) == doctest::Approx(-oracle::g(c, std::numbers::sqrt2 - 1)).epsilon(1e-13));
        CHECK(lambda4_of(c) == doctest::Approx(-oracle::g(c, std::numbers::sqrt2 + 1)).epsilon(1e-13));
    }
}

TEST_CASE("diagnostics at c = 4 collapse") {
    const auto d = diagnostics(4);
    CHECK(d.x1_v() == doctest::Approx(kSqrt3).epsilon(1e-9));
    CHECK(d.x2_v() == doctest::Approx(kSqrt3).epsilon(1e-9));
    CHECK(d.lam1_v() == doctest::Approx(std::sqrt(27.0)).epsilon(1e-9));
    CHECK(d.lam2_v() == doctest::Approx(std::sqrt(27.0)).epsilon(1e-9));
    CHECK(std::abs(d.h1_v()) < 1e-10);
    CHECK(std::abs(d.h2_v()) < 1e-10);
    CHECK(std::abs(d.h3_v()) < 1e-10);
}

TEST_CASE("diagnostics below c = 4") {
    const auto d = diagnostics(3);
    CHECK_FALSE(d.has_saddle_nodes());
    CHECK_THROWS_AS(d.x1_v(), DomainError);
    CHECK_THROWS_AS(x1_of(3), DomainError);
    CHECK(std::isfinite(d.lam3));
    CHECK_THROWS_AS(diagnostics(0), ValidationError);
    CHECK_THROWS_AS(diagnostics(-1), ValidationError);
}

TEST_CASE("diagnostic invariants over the c grid") {
    double prev_x1 = 10, prev_x2 = 0, prev_l1 = 0, prev_l2 = 0;
    for (double c = 4.0; c <= 10.0 + 1e-9; c += 0.05) {
        const auto d = diagnostics(c);
        if (c > 4.0 + 1e-9) {
            CHECK(0 < d.x1_v());
            CHECK(d.x1_v() < kSqrt3);
            CHECK(kSqrt3 < d.x2_v());
            CHECK(0 < d.lam1_v());
            CHECK(d.lam1_v() < d.lam2_v());
            CHECK(d.h1_v() > d.h2_v());
            CHECK(d.h2_v() > d.h3_v());
            CHECK(d.h3_v() > 0);
            CHECK(d.x1_v() < prev_x1);
            CHECK(d.x2_v() > prev_x2);
            CHECK(d.lam1_v() > prev_l1);
            CHECK(d.lam2_v() > prev_l2);
            if (c < 2 + 2 * std::numbers::sqrt2) {
                CHECK(d.band_lo < d.x1_v());
                CHECK(d.x2_v() < d.band_hi);
            }
        }
        prev_x1 = d.x1_v();
        prev_x2 = d.x2_v();
        prev_l1 = d.lam1_v();
        prev_l2 = d.lam2_v();
        CHECK(std::abs(d.lam4 - d.lam3 - 2.0) < 1e-12);
    }
}

TEST_CASE("shifted nonlinearity") {
    CHECK(std::abs(mg_eval(5, 0)) < 1e-12);
    CHECK(std::abs(mg_deriv(5, 0)) < 1e-12);
    CHECK(mg_eval(5, 1) < 0);
    CHECK(mg_minus(5, -0.5) == 0.0);
    CHECK(mg_plus(5, -0.5) == mg_eval(5, -0.5));
    CHECK(mg_minus(5, 0.5) == mg_eval(5, 0.5));
    CHECK(mg_plus(5, 0.5) == 0.0);
    CHECK_THROWS_AS(mg_eval(3, 0), DomainError);

    for (double c : kCs) {
        const double d = dfrak_of(c);
        CHECK(d * 1e3 + mg_eval(c, 1e3) < 0);
        CHECK(d * -1e3 + mg_eval(c, -1e3) > 0);
        for (double z = -3; z <= 3; z += 0.25) {
            CHECK(mg_eval(c, z) ==
                  doctest::Approx(oracle::gbar(c, z + kSqrt3) + kSqrt3 * (c + 2) / 2 - d * z).epsilon(1e-12));
        }
        double prev = INFINITY;
        for (double z = 0; z + 0.01 <= 10; z += 0.01) {
            const double slope = (mg_eval(c, z + 0.01) - mg_eval(c, z)) / 0.01;
            CHECK(slope <= prev + 1e-9);
            prev = slope;
        }
        prev = -INFINITY;
        for (double z = -10; z + 0.01 <= 0; z += 0.01) {
            const double slope = (mg_eval(c, z + 0.01) - mg_eval(c, z)) / 0.01;
            CHECK(slope >= prev - 1e-9);
            prev = slope;
        }
    }
}

TEST_CASE("autonomous equilibria") {
    const auto eq = equilibria(5, 6);
    const auto ref = oracle::equilibria(5, 6);
    REQUIRE(eq.size() == 3);
    REQUIRE(ref.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(eq[i].x == doctest::Approx(ref[i]).epsilon(1e-12));
    CHECK(eq[0].stability == EquilibriumStability::Attractive);
    CHECK(eq[1].stability == EquilibriumStability::Repulsive);
    CHECK(eq[2].stability == EquilibriumStability::Attractive);

    const auto zero = equilibria(5, 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].x == 0.0);

    bool tagged = false;
    for (const auto& e : equilibria(5, lambda1_of(5))) tagged |= e.stability == EquilibriumStability::NonHyperbolic;
    CHECK(tagged);

    CHECK(equilibria(5, 7).size() == 1);
    CHECK(equilibria(3, 1).size() == 1);
}
