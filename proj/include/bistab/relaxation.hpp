#pragma once

// Slow sinusoidal forcing y_eps(t) = alpha + (beta + eps^r) sin(eps t) with
// lambda = 0, its periodic solutions, and the singular hysteresis curve Gamma.

#include <string>
#include <utility>
#include <vector>

#include "bistab/dynamics.hpp"
#include "bistab/signals.hpp"

namespace bistab {

struct RelaxationSpec {
    double c = 5.0;
    double eps = 0.01;
    double r = 1.0;

    /// c > 4, eps in (0, 1), r > 0 and lambda1(c) - eps^r >= 0.
    void validate() const;
    double amplitude() const;  // beta + eps^r
    double period() const;     // 2 pi / eps
    TrigSumSignal signal() const;
};

double y_eps(const RelaxationSpec& spec, double t);

struct CrossingTimes {
    double tbar_minus = 0.0;  // y_eps = lambda2 on (0, pi / (2 eps))
    double t_minus = 0.0;     // y_eps = lambda1, descending
    double t_plus = 0.0;      // y_eps = lambda1, ascending
};

CrossingTimes crossing_times(const RelaxationSpec& spec);

/// 2 sqrt(2 / beta) eps^(r / 2): leading term of eps (t_plus - t_minus).
double crossing_gap_leading(const RelaxationSpec& spec);

using Point = std::pair<double, double>;  // (lambda, x)
using Polyline = std::vector<Point>;

/// Lower stable branch lambda1 -> lambda2, jump up at lambda2, upper stable
/// branch lambda2 -> lambda1, jump down at lambda1; closed.  n_points per branch.
Polyline gamma_curve(double c, int n_points);

/// Absolute shoelace area of a closed polygon (closing edge implied).
double loop_area(const Polyline& loop);

/// Symmetric Hausdorff distance between polylines, with point-to-segment
/// distances from the vertices of each to the segments of the other.
double hausdorff_distance(const Polyline& a, const Polyline& b);

enum class LoopRegime { Bistable, Relaxation, Boundary };
const char* to_string(LoopRegime r);

struct LoopResult {
    RelaxationSpec spec;
    Polyline loop;
    double area = 0.0;
    double hausdorff_to_gamma = 0.0;
    double gamma_area = 0.0;
    int n_fixed_points = 0;
    LoopRegime regime = LoopRegime::Boundary;
    std::vector<PeriodicSolution> solutions;
    std::vector<std::string> warnings;
};

struct RelaxationOptions {
    CensusOptions census{};
    int loop_samples = 4096;
    int gamma_points = 2048;
    /// Skip the loop, area and Hausdorff computations.
    bool census_only = false;
};

LoopResult run_analysis(const RelaxationSpec& spec, const RelaxationOptions& opts = {});

struct ThresholdResult {
    double r = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    /// Regime observed at r_lo and r_hi.
    LoopRegime regime_lo = LoopRegime::Boundary;
    LoopRegime regime_hi = LoopRegime::Boundary;
    int evaluations = 0;
};

/// Bisection in r on the regime of run_analysis until the bracket is <= tol.
/// Throws BracketError when both ends give the same regime.
ThresholdResult r_threshold(double c, double eps, double tol, double r_lo = 0.5, double r_hi = 2.0,
                            const RelaxationOptions& opts = {});

}  // namespace bistab
