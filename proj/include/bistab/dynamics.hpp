#pragma once

// Direct integration of x' = lambda + y(t) + gbar(x) and of its concave-linear
// and linear-convex comparison equations, Poincare maps for periodic inputs,
// and the census of periodic solutions.

#include <string>
#include <utility>
#include <vector>

#include "bistab/signals.hpp"

namespace bistab {

enum class RhsKind {
    Full,           // x' = lambda + y + gbar(x)
    ConcaveLinear,  // z' = lambda + y - cshift + dfrak z + mg_minus(z)
    LinearConvex,   // z' = lambda + y - cshift + dfrak z + mg_plus(z)
};

const char* to_string(RhsKind k);

struct OdeSpec {
    double c = 5.0;
    double lambda = 0.0;
    SignalSpec signal = ConstantSignal{};
    RhsKind kind = RhsKind::Full;

    /// Throws ValidationError (bad signal, non-finite values) or DomainError
    /// (comparison kinds with c <= 4).
    void validate() const;

    double rhs(double t, double x) const;
    /// Partial derivative of rhs in x.
    double rhs_dx(double x) const;
};

struct IntegratorOptions {
    double atol = 1e-10;
    double rtol = 1e-8;
    double escape_bound = 1e6;
    long max_steps = 20'000'000;
    /// Keep every accepted step with its dense-output coefficients.
    bool record = true;
};

/// Accepted steps of an adaptive run.  `log_mult[i]` is the integral of
/// rhs_dx along the solution from times.front() to times[i].
class Trajectory {
public:
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> log_mult;
    double atol = 0.0;
    double rtol = 0.0;

    /// Dense-output value at t inside the covered time range.
    double at(double t) const;
    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }

    /// Five continuous-extension coefficients per step.
    std::vector<double> dense;
};

/// Dormand-Prince 5(4) with error control on both x and the log-multiplier.
/// t1 < t0 integrates backward.  Throws FiniteEscape when |x| exceeds
/// opts.escape_bound and ComputationError when the step budget is exhausted.
Trajectory integrate(const OdeSpec& spec, double t0, double x0, double t1, const IntegratorOptions& opts = {});

struct MapResult {
    double x_end = 0.0;
    double log_multiplier = 0.0;
    double multiplier = 0.0;
};

/// Endpoint of the solution from (t0, x0) to t1 and exp of the integral of
/// rhs_dx along it; no dense output is stored.
MapResult flow_map(const OdeSpec& spec, double t0, double x0, double t1, const IntegratorOptions& opts = {});

/// x(T; 0, x0) and the derivative of the period map, integrated as an
/// augmented log-multiplier state.
MapResult poincare_map(const OdeSpec& spec, double T, double x0, const IntegratorOptions& opts = {});

enum class SolutionKind { Attractive, Repulsive, NonHyperbolic };
const char* to_string(SolutionKind k);

struct PeriodicSolution {
    double period = 0.0;
    double fixed_point = 0.0;
    double multiplier = 0.0;
    double log_multiplier = 0.0;
    SolutionKind kind = SolutionKind::Attractive;
    /// |x(T) - x(0)| along the stored samples.
    double residual = 0.0;
    Trajectory samples;
};

struct CensusOptions {
    int initial_grid = 512;
    int max_grid = 8192;
    double x_tol = 1e-10;
    /// |multiplier - 1| below this is labelled non-hyperbolic.
    double hyperbolicity_tol = 1e-4;
    IntegratorOptions integrator{};
    /// Worker threads for the grid scan; 0 or 1 runs inline.
    int jobs = 1;
    /// Store a dense trajectory over one period for each solution.
    bool keep_samples = true;
};

struct Census {
    std::vector<PeriodicSolution> solutions;
    std::vector<std::string> warnings;
    double scan_lo = 0.0;
    double scan_hi = 0.0;
    double rho = 0.0;
    int grid_points = 0;
};

/// Period used for the census: the signal's period, or 1 for constants.
/// Throws ValidationError for signals without a known period.
double census_period(const SignalSpec& signal);

/// Upper end of the scan: the smallest value past x2(c) (past 0 for c <= 4)
/// on a 0.05 grid where gbar <= -max(lambda2, lambda + sup y) - 1.
double scan_ceiling(double c, double lambda, double sup_y);

/// Scan range [lo, hi] in the coordinate of `spec` containing every bounded
/// solution's initial value.
std::pair<double, double> scan_range(const OdeSpec& spec, const SignalBounds& b);

/// Fixed points of the period-T map on scan_range, by a doubling grid scan,
/// bisection of sign changes, and Newton polishing (backward in time for
/// repulsive solutions), sorted by fixed point.
Census find_periodic_solutions(const OdeSpec& spec, double T, const CensusOptions& opts = {});

/// (1 / (t1 - t0)) * integral of rhs_dx along the trajectory.
double finite_time_exponent(const OdeSpec& spec, const Trajectory& traj);

struct LambdaPmOptions {
    double tol = 1e-6;
    /// Minimum distance between fixed points counted as separated.
    double separation = 1e-4;
    CensusOptions census{};
};

struct LambdaPm {
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    double bracket_minus = 0.0;
    double bracket_plus = 0.0;
    /// Sandwich: lam1 - sup <= lambda_- <= lam1 - inf, and likewise for lambda_+ with lam2.
    std::pair<double, double> sandwich_minus;
    std::pair<double, double> sandwich_plus;
    int census_calls = 0;
};

/// Bisection in lambda on "the concave-linear (resp. linear-convex) equation
/// has two separated periodic solutions".  Requires c > 4 and a periodic or
/// constant signal.  Throws BracketError when a seed bracket does not change
/// the predicate.
LambdaPm estimate_lambda_pm(double c, const SignalSpec& signal, const LambdaPmOptions& opts = {});

}  // namespace bistab
