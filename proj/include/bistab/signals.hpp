#pragma once

// Input signals y(t) and their plain and exponentially weighted extremes.
//
// The weighted average of y seen from time r is
//     W(r) = d * integral_0^inf exp(-d s) y(r + s) ds ,
// a convex combination of future values, so inf y <= W(r) <= sup y.

#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace bistab {

struct ConstantSignal {
    double a0 = 0.0;
};

/// One term a cos(theta t + phi); theta in rad per unit time.
struct TrigTerm {
    double amplitude = 0.0;
    double frequency = 1.0;
    double phase = 0.0;
};

/// y(t) = a0 + sum_n a_n cos(theta_n t + phi_n).
struct TrigSumSignal {
    double a0 = 0.0;
    std::vector<TrigTerm> terms;
    /// Caller's assertion that the frequencies are rationally independent.
    /// Numerically undecidable, so it is never inferred.
    bool rationally_independent = false;
};

/// The N-th Cesaro mean of a 2 pi-periodic Fourier series,
///   a0 + (1/N) sum_{n=1}^{N-1} (N - n) (a_n cos nt + b_n sin nt).
/// a[k] and b[k] hold the coefficients of harmonic k + 1.
struct FourierCesaroSignal {
    double a0 = 0.0;
    std::vector<double> a;
    std::vector<double> b;
    int order = 2;
};

/// Periodic signal known by samples on [0, period); linearly interpolated
/// with wrap-around.
struct SampledPeriodicSignal {
    double period = 1.0;
    std::vector<std::pair<double, double>> samples;  // (t, value), sorted by t
};

using SignalSpec = std::variant<ConstantSignal, TrigSumSignal, FourierCesaroSignal, SampledPeriodicSignal>;

/// Throws ValidationError when a variant's invariants are violated.
void validate(const SignalSpec& signal);

struct SignalBounds {
    double sup = 0.0;
    double inf = 0.0;
    bool exact = false;

    double range() const { return sup - inf; }
};

struct WeightedBounds {
    double sup_w = 0.0;
    double inf_w = 0.0;
    double dfrak = 0.0;
    bool exact = false;
};

/// Numerical controls for grid-based extremization and quadrature.
struct ExtremaOptions {
    int points_per_period = 4096;
    /// Minimum grid points per period of the fastest component.
    int points_per_fastest_cycle = 32;
    double refine_tol = 1e-10;
    /// Local grid maxima refined by golden section (best first).
    int refine_candidates = 8;
    /// Horizon in multiples of the slowest period for signals without a common period.
    double aperiodic_window = 50.0;
    double quad_tol = 1e-12;
};

double eval(const SignalSpec& signal, double t);

/// Common period when one is known: the exact period for sampled and
/// Fourier-Cesaro inputs, the least common period of commensurate
/// frequencies for trig sums.  Empty for constants and incommensurate sums.
std::optional<double> period_of(const SignalSpec& signal);

/// True when the signal is periodic and not constant.
bool is_nonconstant_periodic(const SignalSpec& signal);

/// sup |y|, exact for closed forms and an upper bound for trig sums.
double sup_abs_bound(const SignalSpec& signal);

SignalBounds bounds(const SignalSpec& signal, const ExtremaOptions& opts = {});

/// d * integral_0^inf exp(-d s) y(r + s) ds; closed form for trigonometric
/// inputs, adaptive quadrature otherwise.  Throws ValidationError if d <= 0.
double weighted_average(const SignalSpec& signal, double dfrak, double r, const ExtremaOptions& opts = {});

/// Same quantity by truncated adaptive Simpson quadrature regardless of type.
double weighted_average_quadrature(const SignalSpec& signal, double dfrak, double r,
                                   const ExtremaOptions& opts = {});

/// Extremes over r of weighted_average.  Uses the time-shifts of y in place
/// of its hull, which coincide for periodic and finite trigonometric inputs.
WeightedBounds weighted_bounds(const SignalSpec& signal, double dfrak, const ExtremaOptions& opts = {});

/// sum_n |a_n| (1 + d / sqrt(d^2 + theta_n^2)): an upper bound for both
/// sup W - inf y and sup y - inf W, attained for independent frequencies.
double series_bound(std::span<const TrigTerm> terms, double dfrak);

/// The same bound for the N-th Cesaro mean of a Fourier series.
double cesaro_bound(std::span<const double> a, std::span<const double> b, double dfrak, int order);

/// Rewrites a Fourier-Cesaro signal as an equivalent trig sum.
TrigSumSignal to_trig_sum(const FourierCesaroSignal& signal);

/// a0 + amp sin(omega t), the sine convention used by the slow forcing.
TrigSumSignal sine_signal(double a0, double amplitude, double omega);

}  // namespace bistab
