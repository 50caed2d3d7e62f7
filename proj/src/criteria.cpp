#include "bistab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bistab/errors.hpp"

namespace bistab {

namespace {

void require_c_above_4(const ScalarDiagnostics& diag, const char* what) {
    if (!(diag.c > 4.0)) {
        throw DomainError(std::string(what) + " requires c > 4 (got c=" + std::to_string(diag.c) + ")");
    }
}

IntervalEstimate make_interval(std::string name, double lo, double hi, IntervalKind kind, std::string basis,
                               bool closed = false) {
    IntervalEstimate iv;
    iv.name = std::move(name);
    iv.lower = lo;
    iv.upper = hi;
    iv.kind = kind;
    iv.basis = std::move(basis);
    iv.closed = closed;
    iv.empty = closed ? !(lo <= hi) : !(lo < hi);
    return iv;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

template <class T>
void append(std::vector<T>& dst, const std::vector<T>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::UniformStability: return "uniform-stability";
        case Regime::Bistability: return "bistability";
        case Regime::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

const char* to_string(IntervalKind k) {
    switch (k) {
        case IntervalKind::Exact: return "exact";
        case IntervalKind::OuterBound: return "outer-bound";
        case IntervalKind::InnerBound: return "inner-bound";
    }
    return "unknown";
}

bool IntervalEstimate::contains(double v) const {
    if (empty) return false;
    return closed ? (lower <= v && v <= upper) : (lower < v && v < upper);
}

IntervalEstimate interval_I1(const ScalarDiagnostics& diag, const SignalBounds& b) {
    require_c_above_4(diag, "I1");
    IntervalEstimate iv =
        make_interval("I1", diag.lam1_v() - b.inf, diag.lam2_v() - b.sup, IntervalKind::Exact, "thm-3.2");
    if (b.range() >= diag.h1_v()) iv.empty = true;
    return iv;
}

MuBounds mu_bounds(const ScalarDiagnostics& diag, const WeightedBounds& w) {
    require_c_above_4(diag, "mu bounds");
    return MuBounds{diag.cshift - w.inf_w, diag.cshift - w.sup_w};
}

CriterionCheck check_thm_4_6(const ScalarDiagnostics& diag, const SignalBounds& b, const WeightedBounds& w) {
    require_c_above_4(diag, "thm-4.6");
    CriterionCheck out;
    const MuBounds mu = mu_bounds(diag, w);
    const double s_h2 = diag.h2_v() - (w.sup_w - b.inf);
    const double s_h3 = diag.h3_v() - (b.sup - w.inf_w);
    const double s_mu = mu.mu_minus + b.inf;
    out.slacks["thm-4.6:h2"] = s_h2;
    out.slacks["thm-4.6:h3"] = s_h3;
    out.slacks["thm-4.6:mu"] = s_mu;
    out.holds = s_h2 > 0.0 && s_h3 > 0.0 && s_mu >= 0.0;
    if (!out.holds) {
        out.notes.push_back("thm-4.6 hypotheses fail; no I2 claim");
        return out;
    }
    const double exact_margin = diag.lam1_v() - b.range();
    out.slacks["thm-4.6:exact"] = exact_margin;
    const bool exact = exact_margin >= 0.0;
    const double outer_lo = exact ? diag.lam1_v() - b.sup : std::max(diag.lam1_v() - b.sup, -b.inf);
    out.intervals.push_back(
        make_interval("I2", outer_lo, diag.lam2_v() - b.inf, IntervalKind::OuterBound, "prop-4.3"));
    IntervalEstimate inner = make_interval("I2", diag.lam1_v() - b.inf, diag.lam2_v() - b.sup,
                                           IntervalKind::InnerBound, "prop-4.3");
    if (!inner.empty) out.intervals.push_back(inner);
    out.intervals.push_back(
        make_interval("I2-mu", mu.mu_plus, mu.mu_minus, IntervalKind::InnerBound, "thm-4.6", true));
    out.notes.push_back(exact ? "I2 = (lambda_-, lambda_+) since sup y - inf y <= lambda1"
                              : "I2 = (lambda_-, lambda_+) intersected with [-inf y, lambda_+)");
    return out;
}

double cor_4_7_polynomial(double c) { return (((c - 456.0) * c - 24.0) * c - 1504.0) * c + 336.0; }

CriterionCheck check_cor_4_7(const ScalarDiagnostics& diag, const SignalBounds& b, const WeightedBounds* w) {
    require_c_above_4(diag, "cor-4.7");
    CriterionCheck out;
    const double s_h3 = diag.h3_v() - b.range();
    out.slacks["cor-4.7:h3"] = s_h3;
    bool mu_ok = true;
    if (w) {
        const double s_mu = mu_bounds(diag, *w).mu_minus + b.inf;
        out.slacks["cor-4.7:mu"] = s_mu;
        mu_ok = s_mu >= 0.0;
    }
    out.holds = s_h3 > 0.0 && mu_ok;
    if (out.holds) {
        if (cor_4_7_polynomial(diag.c) <= 0.0) {
            out.notes.push_back("cor-4.7: I2 = (lambda_-, lambda_+) guaranteed since p(c) <= 0");
        } else {
            out.notes.push_back("cor-4.7: p(c) > 0, exactness of I2 not guaranteed by the corollary");
        }
    }
    return out;
}

CriterionCheck check_thm_6_1(const ScalarDiagnostics& diag, const SignalBounds& b) {
    if (!(diag.c > 4.0 && diag.c < kBandCmax)) {
        throw DomainError("thm-6.1 requires 4 < c < 2 + 2 sqrt 2 (got c=" + std::to_string(diag.c) + ")");
    }
    CriterionCheck out;
    const double range = b.range();
    const double s_band = 2.0 - range;
    const double s_min = std::min(diag.h1_v(), diag.h4_v()) - range;
    out.slacks["thm-6.1:band"] = s_band;
    out.slacks["thm-6.1:min-h1-h4"] = s_min;
    if (s_band > 0.0) {
        out.intervals.push_back(
            make_interval("band", diag.lam3 - b.inf, diag.lam4 - b.sup, IntervalKind::Exact, "thm-6.1"));
    }
    out.holds = s_band > 0.0 && s_min > 0.0;
    if (!out.holds) {
        out.notes.push_back("thm-6.1 hypotheses fail; no I3 claim");
        return out;
    }
    const double upper = std::max(diag.lam2_v(), diag.lam4) - b.inf;
    out.intervals.push_back(make_interval("I3", diag.lam3 - b.sup, upper, IntervalKind::OuterBound, "prop-6.3"));
    IntervalEstimate inner = make_interval("I3", diag.lam1_v() - b.inf, diag.lam2_v() - b.sup,
                                           IntervalKind::InnerBound, "prop-6.3");
    if (!inner.empty) out.intervals.push_back(inner);
    return out;
}

RegimeCertificate classify(double c, double lambda, const SignalSpec& signal, const ClassifyOptions& opts) {
    ModelParams{c}.validate();
    if (!std::isfinite(lambda)) throw ValidationError("lambda must be finite");
    validate(signal);
    const SignalBounds b = bounds(signal, opts.extrema);
    const double slack_tol = 1e-12 * std::max(1.0, std::abs(b.inf));
    if (lambda < -b.inf - slack_tol) {
        throw ValidationError("lambda=" + fmt(lambda) + " is below -inf y=" + fmt(-b.inf) +
                              "; the half-line x >= 0 is not invariant");
    }

    RegimeCertificate cert;
    auto fire = [&](Regime regime, const char* rule) {
        cert.regime = regime;
        cert.fired_rule = rule;
        return cert;
    };

    if (c < 4.0) {
        cert.notes.push_back("0 < c < 4: the autonomous nonlinearity is strictly decreasing");
        return fire(Regime::UniformStability, "prop-3.1");
    }

    const ScalarDiagnostics diag = diagnostics(c);
    const double lo = lambda + b.inf;
    const double hi = lambda + b.sup;
    cert.slacks["rem-3.3:below-lam1"] = diag.lam1_v() - hi;
    cert.slacks["rem-3.3:above-lam2"] = lo - diag.lam2_v();
    if (hi < diag.lam1_v()) {
        cert.notes.push_back("lambda + y(t) stays in [0, lambda1)");
        return fire(Regime::UniformStability, "rem-3.3");
    }
    if (lo > diag.lam2_v()) {
        cert.notes.push_back("lambda + y(t) stays in (lambda2, inf)");
        return fire(Regime::UniformStability, "rem-3.3");
    }

    if (c == 4.0) {
        cert.notes.push_back("c = 4: lambda1 = lambda2, so no interval of bistability exists; "
                             "uniform stability is not certified by any rule");
        return cert;
    }

    IntervalEstimate i1 = interval_I1(diag, b);
    cert.slacks["thm-3.2:h1"] = diag.h1_v() - b.range();
    const bool closed_ok = opts.hull_excludes_constants || is_nonconstant_periodic(signal);
    if (closed_ok && b.range() < diag.h1_v()) {
        i1.closed = true;
        i1.empty = false;
    }
    cert.intervals.push_back(i1);

    CriterionCheck t46;
    bool have_t46 = false;
    try {
        const WeightedBounds w = weighted_bounds(signal, diag.dfrak, opts.extrema);
        t46 = check_thm_4_6(diag, b, w);
        have_t46 = true;
        const CriterionCheck c47 = check_cor_4_7(diag, b, &w);
        append(cert.intervals, t46.intervals);
        cert.slacks.insert(t46.slacks.begin(), t46.slacks.end());
        cert.slacks.insert(c47.slacks.begin(), c47.slacks.end());
        append(cert.notes, t46.notes);
        append(cert.notes, c47.notes);
    } catch (const ComputationError& e) {
        cert.notes.push_back(std::string("weighted bounds unavailable: ") + e.what());
    }

    CriterionCheck t61;
    const bool in_band_range = c < kBandCmax;
    if (in_band_range) {
        t61 = check_thm_6_1(diag, b);
        append(cert.intervals, t61.intervals);
        cert.slacks.insert(t61.slacks.begin(), t61.slacks.end());
        append(cert.notes, t61.notes);
    }

    if (i1.contains(lambda)) {
        if (i1.closed) cert.notes.push_back("closed endpoints of I1 apply");
        return fire(Regime::Bistability, "thm-3.2");
    }
    if (have_t46 && t46.holds) {
        for (const auto& iv : t46.intervals) {
            if (iv.name == "I2-mu" && iv.contains(lambda)) return fire(Regime::Bistability, "thm-4.6");
        }
    }
    if (in_band_range && t61.holds) {
        for (const auto& iv : t61.intervals) {
            if (iv.name == "I3" && iv.kind == IntervalKind::OuterBound && lambda > iv.upper) {
                cert.notes.push_back("lambda exceeds the upper bound for the right endpoint of I3");
                return fire(Regime::UniformStability, "thm-6.1");
            }
        }
    }
    cert.notes.push_back("lambda lies between the inner and outer bounds of the bistability interval; "
                         "use the numerical census (poincare / estimate of lambda_-, lambda_+) to resolve it");
    return cert;
}

}  // namespace bistab
