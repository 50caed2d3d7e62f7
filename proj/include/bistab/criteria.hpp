#pragma once

// Sufficient conditions for uniform stability and bistability of
// x' = lambda + y(t) + gbar(x), and the regime certificate built from them.
//
// Rule tags ("prop-3.1", "rem-3.3", "thm-3.2", "thm-4.6", "cor-4.7",
// "prop-4.3", "thm-6.1", "prop-6.3") name the result each verdict rests on.

#include <map>
#include <string>
#include <vector>

#include "bistab/model.hpp"
#include "bistab/signals.hpp"

namespace bistab {

enum class Regime { UniformStability, Bistability, Indeterminate };
enum class IntervalKind { Exact, OuterBound, InnerBound };

const char* to_string(Regime r);
const char* to_string(IntervalKind k);

struct IntervalEstimate {
    std::string name;
    double lower = 0.0;
    double upper = 0.0;
    IntervalKind kind = IntervalKind::Exact;
    std::string basis;
    bool empty = false;
    /// Endpoints included.
    bool closed = false;

    bool contains(double v) const;
};

struct RegimeCertificate {
    Regime regime = Regime::Indeterminate;
    std::string fired_rule;  // empty when indeterminate
    std::vector<IntervalEstimate> intervals;
    /// Margin of each checked strict inequality (positive means it holds).
    std::map<std::string, double> slacks;
    std::vector<std::string> notes;
};

struct MuBounds {
    double mu_minus = 0.0;
    double mu_plus = 0.0;
};

/// Result of evaluating one theorem's hypotheses.
struct CriterionCheck {
    bool holds = false;
    std::vector<IntervalEstimate> intervals;
    std::map<std::string, double> slacks;
    std::vector<std::string> notes;
};

/// (lam1 - inf y, lam2 - sup y), empty when sup - inf >= h1.  Requires c > 4.
IntervalEstimate interval_I1(const ScalarDiagnostics& diag, const SignalBounds& b);

/// mu_- = cshift - inf_w and mu_+ = cshift - sup_w.  Requires c > 4.
MuBounds mu_bounds(const ScalarDiagnostics& diag, const WeightedBounds& w);

CriterionCheck check_thm_4_6(const ScalarDiagnostics& diag, const SignalBounds& b, const WeightedBounds& w);

/// sup - inf < h3 together with mu_- >= -inf y.  Pass the weighted bounds when
/// available; without them only the range condition is evaluated.
CriterionCheck check_cor_4_7(const ScalarDiagnostics& diag, const SignalBounds& b,
                             const WeightedBounds* w = nullptr);

/// p(c) = c^4 - 456 c^3 - 24 c^2 - 1504 c + 336; non-positive on (4, 456].
double cor_4_7_polynomial(double c);

/// Requires 4 < c < 2 + 2 sqrt 2.
CriterionCheck check_thm_6_1(const ScalarDiagnostics& diag, const SignalBounds& b);

struct ClassifyOptions {
    /// Assert that the constant maps inf y and sup y are not limits of
    /// time-shifts of y.  Implied for non-constant periodic signals.
    bool hull_excludes_constants = false;
    ExtremaOptions extrema{};
};

/// Applies the rules in priority order and reports the first that fires.
/// Throws ValidationError when lambda < -inf y.
RegimeCertificate classify(double c, double lambda, const SignalSpec& signal, const ClassifyOptions& opts = {});

}  // namespace bistab
