#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bistab/dynamics.hpp"
#include "bistab/errors.hpp"
#include "bistab/model.hpp"
#include "oracles.hpp"

using namespace bistab;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

TrigSumSignal harmonic(double a, double theta) { return TrigSumSignal{0.0, {{a, theta, 0.0}}, false}; }

std::function<double(double, double)> full_rhs(double c, double lambda, double a, double theta) {
    return [=](double t, double x) { return lambda + a * std::cos(theta * t) + oracle::gbar(c, x); };
}

}  // namespace

TEST_CASE("equilibrium at the saddle-node stays put") {
    const double c = 5;
    const OdeSpec spec{c, lambda1_of(c), ConstantSignal{0}, RhsKind::Full};
    const double x2 = x2_of(c);
    const auto tr = integrate(spec, 0, x2, 100);
    for (double v : tr.values) CHECK(std::abs(v - x2) < 1e-8);
    CHECK(std::abs(finite_time_exponent(spec, tr)) < 1e-8);
}

TEST_CASE("decay to zero with lambda = 0") {
    const OdeSpec spec{5, 0, ConstantSignal{0}, RhsKind::Full};
    const auto tr = integrate(spec, 0, 1, 20);
    for (std::size_t i = 1; i < tr.values.size(); ++i) {
        CHECK(tr.values[i] <= tr.values[i - 1] + tr.atol);
        CHECK(tr.times[i] > tr.times[i - 1]);
    }
    CHECK(tr.values.back() < 1e-6);
    CHECK(tr.values.back() >= 0);
}

TEST_CASE("linear part of the concave-linear equation against variation of constants") {
    const double c = 5, lambda = 5, a = 0.1, th = 1.7, z0 = -1;
    const double d = dfrak_of(c), K = lambda - cshift_of(c);
    const OdeSpec spec{c, lambda, harmonic(a, th), RhsKind::ConcaveLinear};
    const double A = -a * d / (th * th + d * d), B = a * th / (th * th + d * d);
    auto exact = [&](double t) {
        return (z0 - A + K / d) * std::exp(d * t) + A * std::cos(th * t) + B * std::sin(th * t) - K / d;
    };
    const auto tr = integrate(spec, 0, z0, 5);
    for (std::size_t i = 0; i < tr.times.size(); ++i) CHECK(tr.values[i] == doctest::Approx(exact(tr.times[i])).epsilon(1e-8));
    // Dense output is fourth order, so between steps it is looser than at the steps.
    for (double t = 0.05; t < 5; t += 0.173) CHECK(tr.at(t) == doctest::Approx(exact(t)).epsilon(1e-6));
    CHECK(tr.values.back() < 0);

    const auto back = integrate(spec, 5, exact(5), 0);
    CHECK(back.values.back() == doctest::Approx(z0).epsilon(1e-7));
    CHECK(back.at(2.5) == doctest::Approx(exact(2.5)).epsilon(1e-6));
}

TEST_CASE("full equation against fixed-step RK4") {
    const double c = 5, lambda = 6, a = 0.3, th = 2.0;
    const OdeSpec spec{c, lambda, harmonic(a, th), RhsKind::Full};
    const auto f = full_rhs(c, lambda, a, th);
    for (double x0 : {-0.5, 0.2, 2.0, 4.0}) {
        const auto tr = integrate(spec, 0, x0, 3);
        for (double t : {0.7, 1.9, 3.0}) CHECK(tr.at(t) == doctest::Approx(oracle::rk4(f, 0, x0, t, 1e-4)).epsilon(1e-7));
    }
}

TEST_CASE("period map at equilibria") {
    const double c = 5, lambda = 6;
    const OdeSpec spec{c, lambda, ConstantSignal{0}, RhsKind::Full};
    const auto roots = oracle::equilibria(c, lambda);
    REQUIRE(roots.size() == 3);
    std::vector<double> mults;
    for (double x : roots) {
        const auto m = poincare_map(spec, 1.0, x);
        CHECK(m.x_end == doctest::Approx(x).epsilon(1e-9));
        CHECK(m.multiplier == doctest::Approx(std::exp(oracle::gbar_p(c, x))).epsilon(1e-8));
        mults.push_back(m.multiplier);
    }
    CHECK(mults[0] < 1);
    CHECK(mults[1] > 1);
    CHECK(mults[2] < 1);
}

TEST_CASE("multiplier equals the derivative of the period map") {
    const double c = 5, lambda = 6;
    const OdeSpec spec{c, lambda, harmonic(0.2, kTwoPi), RhsKind::Full};
    const double h = 1e-5;
    for (double x0 : {0.3, 1.0, 1.9, 2.5, 3.4}) {
        const auto m = poincare_map(spec, 1.0, x0);
        const double fd = (poincare_map(spec, 1.0, x0 + h).x_end - poincare_map(spec, 1.0, x0 - h).x_end) / (2 * h);
        CHECK(m.multiplier == doctest::Approx(fd).epsilon(1e-4));
        CHECK(m.log_multiplier == doctest::Approx(std::log(m.multiplier)).epsilon(1e-12));
    }
}

TEST_CASE("census for constant inputs") {
    auto check_roots = [](double c, double lambda) {
        const OdeSpec spec{c, lambda, ConstantSignal{0}, RhsKind::Full};
        const auto census = find_periodic_solutions(spec, 1.0);
        const auto ref = oracle::equilibria(c, lambda);
        REQUIRE(census.solutions.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) CHECK(census.solutions[i].fixed_point == doctest::Approx(ref[i]).epsilon(1e-9));
        return census;
    };
    const auto three = check_roots(5, 6);
    CHECK(three.solutions[0].kind == SolutionKind::Attractive);
    CHECK(three.solutions[1].kind == SolutionKind::Repulsive);
    CHECK(three.solutions[2].kind == SolutionKind::Attractive);
    check_roots(5, 7);
    check_roots(3, 1);
    check_roots(8, 9);
}

TEST_CASE("fixed-point counts follow the autonomous root count") {
    const double c = 5;
    const double l1 = lambda1_of(c), l2 = lambda2_of(c);
    for (double lam = 5.5; lam <= 6.6; lam += 0.02) {
        if (std::abs(lam - l1) < 1e-6 || std::abs(lam - l2) < 1e-6) continue;
        CensusOptions co;
        co.keep_samples = false;
        const auto census = find_periodic_solutions(OdeSpec{c, lam, ConstantSignal{0}, RhsKind::Full}, 1.0, co);
        CHECK(census.solutions.size() == oracle::equilibria(c, lam).size());
    }
}

TEST_CASE("periodic solutions under periodic forcing") {
    const double c = 5, lambda = 6;
    const OdeSpec spec{c, lambda, harmonic(0.04, 1.0), RhsKind::Full};
    const auto census = find_periodic_solutions(spec, kTwoPi);
    REQUIRE(census.solutions.size() == 3);
    const auto f = full_rhs(c, lambda, 0.04, 1.0);
    for (const auto& s : census.solutions) {
        CHECK(s.residual < 1e-6);
        CHECK(std::abs(s.samples.at(kTwoPi) - s.samples.at(0)) < 1e-6);
        const bool attractive = s.multiplier < 1 - 1e-4;
        CHECK(attractive == (s.kind == SolutionKind::Attractive));
    }
    CHECK(census.solutions[1].kind == SolutionKind::Repulsive);

    // Forward bisection on P(x) - x reaches the repulsive orbit found backward in time.
    const auto& rep = census.solutions[1];
    double lo = census.solutions[0].fixed_point + 0.05, hi = census.solutions[2].fixed_point - 0.05;
    auto F = [&](double x) { return oracle::rk4(f, 0, x, kTwoPi, 1e-3) - x; };
    const double xb = oracle::bisect(F, lo, hi, 100);
    CHECK(std::abs(xb - rep.fixed_point) < 1e-6);
    for (double t = 0; t <= kTwoPi; t += kTwoPi / 16)
        CHECK(std::abs(oracle::rk4(f, 0, xb, t, 1e-3) - rep.samples.at(t)) < 1e-6);
}

TEST_CASE("finite-time exponents") {
    const double c = 5;
    const double x = 3.5;
    const OdeSpec spec{c, -g_eval(c, x), ConstantSignal{0}, RhsKind::Full};
    const auto tr = integrate(spec, 0, x, 10);
    CHECK(finite_time_exponent(spec, tr) < 0);
    CHECK(finite_time_exponent(spec, tr) == doctest::Approx(oracle::gbar_p(c, x)).epsilon(1e-6));
    Trajectory bare = tr;
    bare.log_mult.clear();
    CHECK(finite_time_exponent(spec, bare) == doctest::Approx(oracle::gbar_p(c, x)).epsilon(1e-4));
}

TEST_CASE("positivity and monotonicity in lambda") {
    const double c = 5;
    const auto y = harmonic(0.5, 1.3);
    for (double x0 : {0.0, 0.5, 3.0}) {
        const OdeSpec spec{c, 0.5, y, RhsKind::Full};
        const auto tr = integrate(spec, 0, x0, 30);
        for (double v : tr.values) CHECK(v >= -1e-9);
    }
    std::vector<double> prev;
    for (double lam = 0.5; lam <= 8; lam += 0.5) {
        const OdeSpec spec{c, lam, y, RhsKind::Full};
        const auto tr = integrate(spec, 0, 1.0, 20);
        std::vector<double> cur;
        for (double t = 0; t <= 20; t += 0.5) cur.push_back(tr.at(t));
        if (!prev.empty())
            for (std::size_t i = 0; i < cur.size(); ++i) CHECK(cur[i] >= prev[i] - 1e-9);
        prev = cur;
    }
}

TEST_CASE("errors") {
    const OdeSpec spec{5, 6, ConstantSignal{0}, RhsKind::Full};
    CHECK_THROWS_AS(integrate(spec, 0, -10, -5), FiniteEscape);
    try {
        integrate(spec, 0, -10, -5);
    } catch (const FiniteEscape& e) {
        CHECK(e.direction() == -1);
        CHECK(e.time() < 0);
    }
    CHECK_THROWS_AS(OdeSpec({3, 1, ConstantSignal{0}, RhsKind::ConcaveLinear}).validate(), DomainError);
    CHECK_THROWS_AS(integrate(OdeSpec{5, NAN, ConstantSignal{0}, RhsKind::Full}, 0, 1, 1), ValidationError);
    TrigSumSignal qp{0.0, {{1, 1, 0}, {1, std::numbers::sqrt2, 0}}, true};
    CHECK_THROWS_AS(census_period(qp), ValidationError);
    CHECK(census_period(ConstantSignal{0}) == 1.0);
}

TEST_CASE("lambda_- and lambda_+ for constant input") {
    for (double c : {5.0, 8.0}) {
        LambdaPmOptions o;
        o.tol = 1e-6;
        const auto pm = estimate_lambda_pm(c, ConstantSignal{0}, o);
        CHECK(pm.lambda_minus == doctest::Approx(lambda1_of(c)).epsilon(1e-6));
        CHECK(pm.lambda_plus == doctest::Approx(lambda2_of(c)).epsilon(1e-6));
        CHECK(pm.bracket_minus <= o.tol);
        CHECK(pm.bracket_plus <= o.tol);
    }
}

TEST_CASE("lambda_- and lambda_+ for small periodic input") {
    const double c = 5;
    LambdaPmOptions o;
    o.tol = 1e-5;
    const auto pm = estimate_lambda_pm(c, TrigSumSignal{0.0, {{0.01, 1.0, -std::numbers::pi / 2}}, false}, o);
    CHECK(pm.lambda_minus >= lambda1_of(c) - 0.01);
    CHECK(pm.lambda_minus <= lambda1_of(c) + 0.01);
    CHECK(pm.lambda_plus >= lambda2_of(c) - 0.01);
    CHECK(pm.lambda_plus <= lambda2_of(c) + 0.01);
    CHECK(pm.lambda_minus < pm.lambda_plus);
}

TEST_CASE("scan ceiling bounds every bounded solution") {
    for (double c : {3.0, 5.0, 8.0}) {
        for (double lam : {0.0, 6.0, 12.0}) {
            const double top = scan_ceiling(c, lam, 0.3);
            CHECK(lam + 0.3 + oracle::gbar(c, top) < 0);
        }
    }
}
