#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bistab/criteria.hpp"
#include "bistab/errors.hpp"
#include "oracles.hpp"

using namespace bistab;

namespace {

TrigSumSignal harmonic(double a, double theta = 1.0) { return TrigSumSignal{0.0, {{a, theta, 0.0}}, false}; }

SignalBounds range_bounds(double lo, double hi) { return SignalBounds{hi, lo, true}; }

const IntervalEstimate* find(const std::vector<IntervalEstimate>& v, const std::string& name, IntervalKind kind) {
    for (const auto& iv : v)
        if (iv.name == name && iv.kind == kind) return &iv;
    return nullptr;
}

}  // namespace

TEST_CASE("I1 endpoints") {
    const auto d = diagnostics(5);
    const auto iv = interval_I1(d, range_bounds(0, 0));
    CHECK(iv.lower == doctest::Approx(5.9483).epsilon(1e-5));
    CHECK(iv.upper == doctest::Approx(6.1334).epsilon(1e-5));
    CHECK_FALSE(iv.empty);
    CHECK(iv.basis == "thm-3.2");

    CHECK(interval_I1(d, range_bounds(0, d.h1_v())).empty);
    const auto narrow = interval_I1(d, range_bounds(-0.05, 0.05));
    CHECK(narrow.upper - narrow.lower == doctest::Approx(d.h1_v() - 0.1).epsilon(1e-12));
    CHECK(narrow.upper - narrow.lower == doctest::Approx(0.0851).epsilon(1e-3));
    CHECK_THROWS_AS(interval_I1(diagnostics(3), range_bounds(0, 0)), DomainError);
}

TEST_CASE("mu bounds") {
    const auto d5 = diagnostics(5);
    const auto zero = mu_bounds(d5, WeightedBounds{0, 0, d5.dfrak, true});
    CHECK(zero.mu_minus == doctest::Approx(6.062178).epsilon(1e-7));
    CHECK(zero.mu_plus == zero.mu_minus);

    const auto d8 = diagnostics(8);
    REQUIRE(d8.dfrak == 1.0);
    const auto w = weighted_bounds(harmonic(1), d8.dfrak);
    const auto mu = mu_bounds(d8, w);
    CHECK(mu.mu_minus == doctest::Approx(std::sqrt(3.0) * 5 + 1 / std::numbers::sqrt2).epsilon(1e-12));
    CHECK(mu.mu_plus == doctest::Approx(std::sqrt(3.0) * 5 - 1 / std::numbers::sqrt2).epsilon(1e-12));
    for (double a : {0.01, 0.3, 2.0}) {
        const auto m = mu_bounds(d5, weighted_bounds(harmonic(a, 0.7), d5.dfrak));
        CHECK(m.mu_plus <= m.mu_minus);
    }
}

TEST_CASE("weighted-extremes criterion") {
    const auto d5 = diagnostics(5);
    const auto z = check_thm_4_6(d5, range_bounds(0, 0), WeightedBounds{0, 0, d5.dfrak, true});
    CHECK(z.holds);
    CHECK(z.slacks.at("thm-4.6:h2") == doctest::Approx(d5.h2_v()));
    CHECK(z.slacks.at("thm-4.6:h3") == doctest::Approx(d5.h3_v()));
    const auto* outer = find(z.intervals, "I2", IntervalKind::OuterBound);
    REQUIRE(outer);
    CHECK(outer->lower == doctest::Approx(d5.lam1_v()));
    CHECK(outer->upper == doctest::Approx(d5.lam2_v()));

    // For a cos t with d = 1 both sides equal a (1 + 1/sqrt 2); h3 < h2 binds.
    const auto d8 = diagnostics(8);
    const double edge = d8.h3_v() / (1 + 1 / std::numbers::sqrt2);
    for (double f : {1 - 1e-9, 1 + 1e-9}) {
        const auto y = harmonic(edge * f);
        const auto chk = check_thm_4_6(d8, bounds(y), weighted_bounds(y, d8.dfrak));
        CHECK(chk.holds == (f < 1));
        CHECK((chk.slacks.at("thm-4.6:h3") > 0) == (f < 1));
    }
    const auto wide = harmonic(d8.h2_v());
    const auto bad = check_thm_4_6(d8, bounds(wide), weighted_bounds(wide, d8.dfrak));
    CHECK_FALSE(bad.holds);
    CHECK(bad.intervals.empty());
}

TEST_CASE("small-range corollary and its polynomial") {
    const auto d5 = diagnostics(5);
    CHECK(d5.h3_v() == doctest::Approx(0.0712).epsilon(1e-3));
    CHECK(check_cor_4_7(d5, range_bounds(-0.025, 0.025)).holds);
    CHECK_FALSE(check_cor_4_7(d5, range_bounds(-0.05, 0.05)).holds);
    auto p = [](double c) { return c * c * c * c - 456 * c * c * c - 24 * c * c - 1504 * c + 336; };
    CHECK(cor_4_7_polynomial(456) <= 0);
    CHECK(cor_4_7_polynomial(457) > 0);
    for (double c : {4.5, 100.0, 456.0, 457.0}) CHECK(cor_4_7_polynomial(c) == doctest::Approx(p(c)));
}

TEST_CASE("uniform stability outside the band") {
    const auto d5 = diagnostics(5);
    CHECK(d5.h4_v() == doctest::Approx(0.001473).epsilon(1e-3));
    CHECK_THROWS_AS(check_thm_6_1(d5, range_bounds(0, 0)), DomainError);
    const auto d = diagnostics(4.8);
    CHECK(d.band_lo < d.x1_v());
    CHECK(d.x2_v() < d.band_hi);
    const auto ok = check_thm_6_1(d, range_bounds(0, 0));
    CHECK(ok.holds);
    REQUIRE(find(ok.intervals, "I3", IntervalKind::OuterBound));
    const double big = std::min(d.h1_v(), d.h4_v()) * 1.01;
    CHECK_FALSE(check_thm_6_1(d, range_bounds(0, big)).holds);
}

TEST_CASE("classify examples") {
    const auto r3 = classify(3, 1, harmonic(0.3));
    CHECK(r3.regime == Regime::UniformStability);
    CHECK(r3.fired_rule == "prop-3.1");

    const auto r6 = classify(5, 6.0, ConstantSignal{0});
    CHECK(r6.regime == Regime::Bistability);
    CHECK(r6.fired_rule == "thm-3.2");

    const auto r7 = classify(5, 7.0, ConstantSignal{0});
    CHECK(r7.regime == Regime::UniformStability);
    CHECK(r7.fired_rule == "rem-3.3");

    CHECK_THROWS_AS(classify(5, -0.5, harmonic(0.2)), ValidationError);
    CHECK_NOTHROW(classify(5, 0.2, harmonic(0.2)));

    const auto r4 = classify(4, lambda1_of(4), harmonic(0.01));
    CHECK(r4.regime == Regime::Indeterminate);
    CHECK(r4.fired_rule.empty());
}

TEST_CASE("closed I1 endpoints for non-constant periodic inputs") {
    const auto d = diagnostics(5);
    const double a = 0.02;
    const double lam = d.lam1_v() + a;
    const auto periodic = classify(5, lam, harmonic(a));
    CHECK(periodic.regime == Regime::Bistability);
    CHECK(periodic.intervals.front().closed);

    // Same extremes, but the flag is off and the signal has no common period.
    const TrigSumSignal qp{0.0, {{a / 2, 1, 0}, {a / 2, std::numbers::sqrt2, 0}}, true};
    const auto open = classify(5, lam, qp);
    CHECK_FALSE(open.intervals.front().closed);
    CHECK(open.fired_rule != "thm-3.2");
    ClassifyOptions flag;
    flag.hull_excludes_constants = true;
    CHECK(classify(5, lam, qp, flag).fired_rule == "thm-3.2");
}

TEST_CASE("constant inputs agree with the autonomous equilibrium count") {
    for (double c : {3.0, 4.5, 5.0, 8.0}) {
        for (double a0 : {0.0, 0.7, -0.4}) {
            for (double lam = std::max(0.0, -a0); lam < 12; lam += 0.01) {
                if (c > 4) {
                    const double s = lam + a0;
                    if (std::abs(s - lambda1_of(c)) < 1e-6 || std::abs(s - lambda2_of(c)) < 1e-6) continue;
                }
                const auto n = oracle::equilibria(c, lam + a0).size();
                const auto cert = classify(c, lam, ConstantSignal{a0});
                if (n == 3) CHECK(cert.regime == Regime::Bistability);
                if (n == 1) CHECK(cert.regime == Regime::UniformStability);
            }
        }
    }
}

TEST_CASE("bistability certificates are monotone in lambda within I1") {
    const auto y = harmonic(0.03, 2.0);
    const auto iv = classify(5, 6.0, y).intervals.front();
    int first = -1, last = -1;
    const int n = 400;
    std::vector<bool> bi(n);
    for (int i = 0; i < n; ++i) {
        const double lam = iv.lower + (iv.upper - iv.lower) * i / (n - 1.0);
        bi[i] = classify(5, lam, y).regime == Regime::Bistability;
        if (bi[i]) {
            if (first < 0) first = i;
            last = i;
        }
    }
    REQUIRE(first >= 0);
    for (int i = first; i <= last; ++i) CHECK(bi[i]);
}

TEST_CASE("I1 sits inside the outer bound of I2") {
    for (double c : {4.5, 5.0, 6.0, 8.0}) {
        const auto d = diagnostics(c);
        for (double a : {0.001, 0.01, 0.03}) {
            const auto y = harmonic(a, 1.3);
            const auto b = bounds(y);
            if (b.range() >= d.h1_v()) continue;
            const auto chk = check_thm_4_6(d, b, weighted_bounds(y, d.dfrak));
            if (!chk.holds) continue;
            const auto* outer = find(chk.intervals, "I2", IntervalKind::OuterBound);
            REQUIRE(outer);
            const auto i1 = interval_I1(d, b);
            CHECK(outer->lower <= i1.lower);
            CHECK(i1.upper <= outer->upper);
        }
    }
}

TEST_CASE("regime flips across the recorded slack boundary") {
    const auto d = diagnostics(5);
    const double lam = 0.5 * (d.lam1_v() + d.lam2_v());
    const double a_edge = d.h1_v() / 2;
    const auto inside = classify(5, lam, harmonic(a_edge * (1 - 1e-6)));
    const auto outside = classify(5, lam, harmonic(a_edge * (1 + 1e-6)));
    CHECK(inside.slacks.at("thm-3.2:h1") > 0);
    CHECK(outside.slacks.at("thm-3.2:h1") < 0);
    CHECK(inside.regime == Regime::Bistability);
    CHECK(outside.regime == Regime::Indeterminate);

    const auto below = classify(5, 5.0, harmonic(0.1));
    CHECK(below.fired_rule == "rem-3.3");
    CHECK(below.slacks.at("rem-3.3:below-lam1") == doctest::Approx(d.lam1_v() - 5.1));
}

TEST_CASE("uniform stability right of the band for small c") {
    const double c = 4.8;
    const auto d = diagnostics(c);
    const auto y = harmonic(0.0004);
    const double edge = std::max(d.lam2_v(), d.lam4) + 0.0004;
    const auto cert = classify(c, edge + 1e-3, y);
    CHECK(cert.regime == Regime::UniformStability);
}
