#include "bistab/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bistab/errors.hpp"
#include "bistab/model.hpp"

namespace bistab {

namespace {

// Root of lambda = -g(x) on [lo, hi] where -g is increasing.
double invert_branch(double c, double lambda, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (-g_eval(c, mid) < lambda) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double flo = std::abs(lambda + g_eval(c, lo));
    const double fhi = std::abs(lambda + g_eval(c, hi));
    return flo <= fhi ? lo : hi;
}

double point_segment(const Point& p, const Point& a, const Point& b) {
    const double vx = b.first - a.first;
    const double vy = b.second - a.second;
    const double wx = p.first - a.first;
    const double wy = p.second - a.second;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? (wx * vx + wy * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(wx - t * vx, wy - t * vy);
}

double directed_hausdorff(const Polyline& from, const Polyline& to) {
    double worst = 0.0;
    for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        if (to.size() == 1) {
            best = std::hypot(p.first - to[0].first, p.second - to[0].second);
        } else {
            for (std::size_t j = 0; j + 1 < to.size(); ++j) {
                best = std::min(best, point_segment(p, to[j], to[j + 1]));
                if (best == 0.0) break;
            }
        }
        worst = std::max(worst, best);
    }
    return worst;
}

LoopRegime regime_of(const Census& census) {
    for (const auto& s : census.solutions) {
        if (s.kind == SolutionKind::NonHyperbolic) return LoopRegime::Boundary;
    }
    if (census.solutions.size() == 3) return LoopRegime::Bistable;
    if (census.solutions.size() == 1) return LoopRegime::Relaxation;
    return LoopRegime::Boundary;
}

}  // namespace

void RelaxationSpec::validate() const {
    if (!(c > 4.0) || !std::isfinite(c)) throw DomainError("relaxation analysis requires c > 4");
    if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("r must be positive");
    if (lambda1_of(c) - std::pow(eps, r) < 0.0) {
        throw ValidationError("lambda1(c) - eps^r must be non-negative");
    }
}

double RelaxationSpec::amplitude() const { return 0.5 * (lambda2_of(c) - lambda1_of(c)) + std::pow(eps, r); }

double RelaxationSpec::period() const { return 2.0 * std::numbers::pi / eps; }

TrigSumSignal RelaxationSpec::signal() const {
    return sine_signal(0.5 * (lambda1_of(c) + lambda2_of(c)), amplitude(), eps);
}

const char* to_string(LoopRegime r) {
    switch (r) {
        case LoopRegime::Bistable: return "bistable";
        case LoopRegime::Relaxation: return "relaxation";
        case LoopRegime::Boundary: return "boundary";
    }
    return "unknown";
}

double y_eps(const RelaxationSpec& spec, double t) {
    spec.validate();
    return 0.5 * (lambda1_of(spec.c) + lambda2_of(spec.c)) + spec.amplitude() * std::sin(spec.eps * t);
}

CrossingTimes crossing_times(const RelaxationSpec& spec) {
    spec.validate();
    const double beta = 0.5 * (lambda2_of(spec.c) - lambda1_of(spec.c));
    const double e = std::pow(spec.eps, spec.r);
    // delta = arccos(beta / (beta + e)), in a form accurate for small e.
    const double delta = std::atan2(std::sqrt(e * (2.0 * beta + e)), beta);
    const double pi = std::numbers::pi;
    CrossingTimes ct;
    ct.tbar_minus = (0.5 * pi - delta) / spec.eps;
    ct.t_minus = (1.5 * pi - delta) / spec.eps;
    ct.t_plus = (1.5 * pi + delta) / spec.eps;
    return ct;
}

double crossing_gap_leading(const RelaxationSpec& spec) {
    spec.validate();
    const double beta = 0.5 * (lambda2_of(spec.c) - lambda1_of(spec.c));
    return 2.0 * std::sqrt(2.0 / beta) * std::pow(spec.eps, 0.5 * spec.r);
}

Polyline gamma_curve(double c, int n_points) {
    if (!(c > 4.0)) throw DomainError("Gamma curve requires c > 4");
    if (n_points < 2) throw ValidationError("Gamma curve needs at least 2 points per branch");
    const double l1 = lambda1_of(c);
    const double l2 = lambda2_of(c);
    const double xa = x1_of(c);
    const double xb = x2_of(c);
    Polyline out;
    out.reserve(2 * static_cast<std::size_t>(n_points) + 1);
    for (int i = 0; i < n_points; ++i) {
        const double lam = l1 + (l2 - l1) * static_cast<double>(i) / static_cast<double>(n_points - 1);
        const double x = (i == n_points - 1) ? xa : invert_branch(c, lam, 0.0, xa);
        out.emplace_back(lam, x);
    }
    for (int i = 0; i < n_points; ++i) {
        const double lam = l2 - (l2 - l1) * static_cast<double>(i) / static_cast<double>(n_points - 1);
        const double x = (i == n_points - 1) ? xb : invert_branch(c, lam, xb, std::max(lam, xb) + 1.0);
        out.emplace_back(lam, x);
    }
    out.push_back(out.front());
    return out;
}

double loop_area(const Polyline& loop) {
    if (loop.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto& p = loop[i];
        const auto& q = loop[(i + 1) % loop.size()];
        twice += p.first * q.second - q.first * p.second;
    }
    return 0.5 * std::abs(twice);
}

double hausdorff_distance(const Polyline& a, const Polyline& b) {
    if (a.empty() || b.empty()) throw ValidationError("Hausdorff distance needs non-empty polylines");
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

LoopResult run_analysis(const RelaxationSpec& spec, const RelaxationOptions& opts) {
    spec.validate();
    LoopResult res;
    res.spec = spec;
    const double T = spec.period();
    const OdeSpec ode{spec.c, 0.0, spec.signal(), RhsKind::Full};
    CensusOptions co = opts.census;
    co.keep_samples = !opts.census_only;
    Census census = find_periodic_solutions(ode, T, co);
    res.warnings = census.warnings;
    res.n_fixed_points = static_cast<int>(census.solutions.size());
    res.regime = regime_of(census);
    res.solutions = std::move(census.solutions);
    if (opts.census_only) return res;

    const PeriodicSolution* top = nullptr;
    for (const auto& s : res.solutions) {
        if (s.kind == SolutionKind::Attractive) top = &s;
    }
    if (!top) {
        res.warnings.push_back("no attractive periodic solution; loop not computed");
        return res;
    }
    const int n = std::max(opts.loop_samples, 4);
    res.loop.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k < n; ++k) {
        const double t = T * static_cast<double>(k) / static_cast<double>(n);
        res.loop.emplace_back(y_eps(spec, t), top->samples.at(t));
    }
    res.loop.push_back(res.loop.front());
    const Polyline gamma = gamma_curve(spec.c, opts.gamma_points);
    res.area = loop_area(res.loop);
    res.gamma_area = loop_area(gamma);
    res.hausdorff_to_gamma = hausdorff_distance(res.loop, gamma);
    return res;
}

ThresholdResult r_threshold(double c, double eps, double tol, double r_lo, double r_hi,
                            const RelaxationOptions& opts) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (!(r_lo < r_hi)) throw ValidationError("r bracket must satisfy r_lo < r_hi");
    ThresholdResult out;
    RelaxationOptions ro = opts;
    ro.census_only = true;
    auto regime = [&](double r) {
        ++out.evaluations;
        const RelaxationSpec spec{c, eps, r};
        LoopRegime g = run_analysis(spec, ro).regime;
        if (g == LoopRegime::Boundary) {
            RelaxationOptions fine = ro;
            fine.census.initial_grid *= 4;
            fine.census.max_grid = std::max(fine.census.max_grid, fine.census.initial_grid) * 4;
            g = run_analysis(spec, fine).regime;
            if (g == LoopRegime::Boundary) {
                throw ComputationError("ambiguous fixed-point count at r=" + std::to_string(r) +
                                       " after grid refinement");
            }
        }
        return g;
    };
    out.regime_lo = regime(r_lo);
    out.regime_hi = regime(r_hi);
    if (out.regime_lo == out.regime_hi) {
        throw BracketError(std::string("both ends of the r bracket give regime ") + to_string(out.regime_lo));
    }
    while (r_hi - r_lo > tol) {
        const double mid = 0.5 * (r_lo + r_hi);
        if (regime(mid) == out.regime_lo) {
            r_lo = mid;
        } else {
            r_hi = mid;
        }
    }
    out.r_lo = r_lo;
    out.r_hi = r_hi;
    out.r = 0.5 * (r_lo + r_hi);
    return out;
}

}  // namespace bistab
