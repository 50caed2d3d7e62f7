#include "bistab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bistab/errors.hpp"
#include "bistab/model.hpp"
#include "bistab/parallel.hpp"

namespace bistab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension of order 4.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct State {
    double x;
    double L;
};

struct Deriv {
    double fx;
    double fL;
};

Deriv eval_rhs(const OdeSpec& spec, double t, double x) { return {spec.rhs(t, x), spec.rhs_dx(x)}; }

bool finite(const Deriv& d) { return std::isfinite(d.fx) && std::isfinite(d.fL); }

double initial_step(const OdeSpec& spec, double t0, double x0, double span, const Deriv& f0,
                    const IntegratorOptions& o) {
    const double sc = o.atol + o.rtol * std::abs(x0);
    const double dd0 = std::abs(x0) / sc;
    const double dd1 = std::max(std::abs(f0.fx) / sc, std::abs(f0.fL) / (o.atol));
    double h0 = (dd0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * dd0 / dd1;
    h0 = std::min(h0, std::abs(span));
    const double dir = span >= 0.0 ? 1.0 : -1.0;
    const Deriv f1 = eval_rhs(spec, t0 + dir * h0, x0 + dir * h0 * f0.fx);
    const double dd2 = finite(f1) ? std::abs(f1.fx - f0.fx) / sc / h0 : 1e12;
    const double m = std::max(dd1, dd2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    return std::min({100.0 * h0, h1, std::abs(span)});
}

// Core stepper.  Returns the final state; fills `rec` when non-null.
State run(const OdeSpec& spec, double t0, double x0, double t1, const IntegratorOptions& o, Trajectory* rec) {
    if (!std::isfinite(x0) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw ValidationError("integration endpoints and initial value must be finite");
    }
    State y{x0, 0.0};
    if (rec) {
        rec->times.assign(1, t0);
        rec->values.assign(1, x0);
        rec->log_mult.assign(1, 0.0);
        rec->dense.clear();
        rec->atol = o.atol;
        rec->rtol = o.rtol;
    }
    const double span = t1 - t0;
    if (span == 0.0) return y;
    const double dir = span > 0.0 ? 1.0 : -1.0;
    double t = t0;
    Deriv k1 = eval_rhs(spec, t, y.x);
    if (!finite(k1)) throw ComputationError("non-finite right-hand side at the initial point");
    double h = initial_step(spec, t0, x0, span, k1, o);
    long steps = 0;
    bool last_rejected = false;

    while (dir * (t1 - t) > 0.0) {
        if (++steps > o.max_steps) throw ComputationError("step budget exhausted");
        bool final_step = false;
        if (h >= std::abs(t1 - t)) {
            h = std::abs(t1 - t);
            final_step = true;
        }
        const double hs = dir * h;
        auto stage = [&](double ct, double dx) { return eval_rhs(spec, t + ct * hs, y.x + hs * dx); };
        const Deriv k2 = stage(c2, a21 * k1.fx);
        const Deriv k3 = stage(c3, a31 * k1.fx + a32 * k2.fx);
        const Deriv k4 = stage(c4, a41 * k1.fx + a42 * k2.fx + a43 * k3.fx);
        const Deriv k5 = stage(c5, a51 * k1.fx + a52 * k2.fx + a53 * k3.fx + a54 * k4.fx);
        const Deriv k6 =
            stage(1.0, a61 * k1.fx + a62 * k2.fx + a63 * k3.fx + a64 * k4.fx + a65 * k5.fx);
        const double xn = y.x + hs * (a71 * k1.fx + a73 * k3.fx + a74 * k4.fx + a75 * k5.fx + a76 * k6.fx);
        const double Ln = y.L + hs * (a71 * k1.fL + a73 * k3.fL + a74 * k4.fL + a75 * k5.fL + a76 * k6.fL);
        const double tn = final_step ? t1 : t + hs;
        const Deriv k7 = eval_rhs(spec, tn, xn);

        const bool ok = finite(k2) && finite(k3) && finite(k4) && finite(k5) && finite(k6) && finite(k7) &&
                        std::isfinite(xn) && std::isfinite(Ln);
        if (!ok) {
            h *= 0.25;
            last_rejected = true;
            if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                throw FiniteEscape(t, y.x, y.x >= 0.0 ? 1 : -1);
            }
            continue;
        }
        const double ex =
            hs * (e1 * k1.fx + e3 * k3.fx + e4 * k4.fx + e5 * k5.fx + e6 * k6.fx + e7 * k7.fx);
        const double eL =
            hs * (e1 * k1.fL + e3 * k3.fL + e4 * k4.fL + e5 * k5.fL + e6 * k6.fL + e7 * k7.fL);
        const double sx = o.atol + o.rtol * std::max(std::abs(y.x), std::abs(xn));
        const double sL = o.atol + o.rtol * std::max(std::abs(y.L), std::abs(Ln));
        const double err = std::max(std::abs(ex) / sx, std::abs(eL) / sL);

        if (err <= 1.0) {
            if (rec) {
                const double r2 = xn - y.x;
                const double r3 = hs * k1.fx - r2;
                const double r4 = r2 - hs * k7.fx - r3;
                const double r5 =
                    hs * (d1 * k1.fx + d3 * k3.fx + d4 * k4.fx + d5 * k5.fx + d6 * k6.fx + d7 * k7.fx);
                rec->dense.insert(rec->dense.end(), {y.x, r2, r3, r4, r5});
                rec->times.push_back(tn);
                rec->values.push_back(xn);
                rec->log_mult.push_back(Ln);
            }
            t = tn;
            y = {xn, Ln};
            k1 = k7;
            if (std::abs(y.x) > o.escape_bound) throw FiniteEscape(t, y.x, y.x > 0.0 ? 1 : -1);
            double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
            fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
            h *= fac;
            last_rejected = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            last_rejected = true;
            if (h < 1e-14 * std::max(1.0, std::abs(t))) throw ComputationError("step size underflow");
        }
    }
    return y;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

const char* to_string(RhsKind k) {
    switch (k) {
        case RhsKind::Full: return "full";
        case RhsKind::ConcaveLinear: return "concave-linear";
        case RhsKind::LinearConvex: return "linear-convex";
    }
    return "unknown";
}

const char* to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::Attractive: return "attractive";
        case SolutionKind::Repulsive: return "repulsive";
        case SolutionKind::NonHyperbolic: return "non-hyperbolic";
    }
    return "unknown";
}

void OdeSpec::validate() const {
    ModelParams{c}.validate();
    if (!std::isfinite(lambda)) throw ValidationError("lambda must be finite");
    bistab::validate(signal);
    if (kind != RhsKind::Full && !(c > 4.0)) {
        throw DomainError(std::string(to_string(kind)) + " equation requires c > 4");
    }
}

double OdeSpec::rhs(double t, double x) const {
    const double forcing = lambda + eval(signal, t);
    switch (kind) {
        case RhsKind::Full: return forcing + gbar_eval(c, x);
        case RhsKind::ConcaveLinear:
            return x >= 0.0 ? forcing + gbar_eval(c, x + kSqrt3) : forcing - cshift_of(c) + dfrak_of(c) * x;
        case RhsKind::LinearConvex:
            return x <= 0.0 ? forcing + gbar_eval(c, x + kSqrt3) : forcing - cshift_of(c) + dfrak_of(c) * x;
    }
    return 0.0;
}

double OdeSpec::rhs_dx(double x) const {
    switch (kind) {
        case RhsKind::Full: return gbar_deriv(c, x);
        case RhsKind::ConcaveLinear: return x >= 0.0 ? gbar_deriv(c, x + kSqrt3) : dfrak_of(c);
        case RhsKind::LinearConvex: return x <= 0.0 ? gbar_deriv(c, x + kSqrt3) : dfrak_of(c);
    }
    return 0.0;
}

double Trajectory::at(double t) const {
    if (times.empty()) throw ValidationError("empty trajectory");
    if (times.size() == 1) return values.front();
    const bool forward = times.back() > times.front();
    std::size_t i;
    if (forward) {
        if (t < times.front() || t > times.back()) throw ValidationError("time outside trajectory range");
        i = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
    } else {
        if (t > times.front() || t < times.back()) throw ValidationError("time outside trajectory range");
        i = static_cast<std::size_t>(
            std::upper_bound(times.begin(), times.end(), t, std::greater<double>()) - times.begin());
    }
    if (i == 0) i = 1;
    if (i >= times.size()) i = times.size() - 1;
    const std::size_t s = i - 1;
    const double th = (t - times[s]) / (times[i] - times[s]);
    if (dense.size() < 5 * (s + 1)) return values[s] + th * (values[i] - values[s]);
    const double* r = &dense[5 * s];
    const double th1 = 1.0 - th;
    return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
}

Trajectory integrate(const OdeSpec& spec, double t0, double x0, double t1, const IntegratorOptions& opts) {
    spec.validate();
    Trajectory traj;
    if (opts.record) {
        run(spec, t0, x0, t1, opts, &traj);
    } else {
        const State s = run(spec, t0, x0, t1, opts, nullptr);
        traj.times = {t0, t1};
        traj.values = {x0, s.x};
        traj.log_mult = {0.0, s.L};
        traj.atol = opts.atol;
        traj.rtol = opts.rtol;
    }
    return traj;
}

MapResult flow_map(const OdeSpec& spec, double t0, double x0, double t1, const IntegratorOptions& opts) {
    const State s = run(spec, t0, x0, t1, opts, nullptr);
    return MapResult{s.x, s.L, std::exp(s.L)};
}

MapResult poincare_map(const OdeSpec& spec, double T, double x0, const IntegratorOptions& opts) {
    spec.validate();
    if (!(T > 0.0)) throw ValidationError("period must be positive");
    return flow_map(spec, 0.0, x0, T, opts);
}

double census_period(const SignalSpec& signal) {
    if (auto p = period_of(signal)) return *p;
    const SignalBounds b = bounds(signal);
    if (b.sup == b.inf) return 1.0;
    throw ValidationError("a periodic signal is required (no common period found)");
}

double scan_ceiling(double c, double lambda, double sup_y) {
    double target = -(lambda + sup_y) - 1.0;
    double x = 0.0;
    if (c > 4.0) {
        target = std::min(target, -lambda2_of(c) - 1.0);
        x = x2_of(c);
    }
    const double start = x;
    for (long k = 1; k < 100'000'000; ++k) {
        x = start + 0.05 * static_cast<double>(k);
        if (gbar_eval(c, x) <= target) return x;
    }
    throw ComputationError("scan ceiling not found");
}

namespace {

// Largest grid value below `start` (step 0.05) where gbar >= target.
double scan_floor(double c, double start, double target) {
    for (long k = 1; k < 100'000'000; ++k) {
        const double x = start - 0.05 * static_cast<double>(k);
        if (gbar_eval(c, x) >= target) return x;
    }
    throw ComputationError("scan floor not found");
}

}  // namespace

std::pair<double, double> scan_range(const OdeSpec& spec, const SignalBounds& b) {
    const double c = spec.c;
    const double lam = spec.lambda;
    switch (spec.kind) {
        case RhsKind::Full: {
            const double hi = scan_ceiling(c, lam, b.sup);
            const double lo = (lam + b.inf >= 0.0) ? 0.0 : scan_floor(c, 0.0, -(lam + b.inf) + 1.0);
            return {lo, hi};
        }
        case RhsKind::ConcaveLinear: {
            const double hi = scan_ceiling(c, lam, b.sup) - kSqrt3;
            const double lo = std::min(0.0, (cshift_of(c) - lam - b.sup) / dfrak_of(c)) - 1.0;
            return {lo, hi};
        }
        case RhsKind::LinearConvex: {
            const double hi = std::max(0.0, (cshift_of(c) - lam - b.inf) / dfrak_of(c)) + 1.0;
            const double lo = scan_floor(c, kSqrt3, -(lam + b.inf) + 1.0) - kSqrt3;
            return {lo, hi};
        }
    }
    return {0.0, 0.0};
}

namespace {

struct Bracket {
    double a;
    double b;
    double fa;
    double fb;
};

class Scanner {
public:
    Scanner(const OdeSpec& spec, double T, const CensusOptions& opts) : spec_(spec), T_(T), opts_(opts) {}

    // T(x) - x, or +-inf when the solution escapes.
    double F(double x) const {
        try {
            return flow_map(spec_, 0.0, x, T_, opts_.integrator).x_end - x;
        } catch (const FiniteEscape& e) {
            return e.direction() > 0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
        }
    }

    std::vector<double> evaluate(const std::vector<double>& xs) const {
        std::vector<double> out(xs.size());
        parallel_for(xs.size(), opts_.jobs, [&](std::size_t i) { out[i] = F(xs[i]); });
        return out;
    }

    // Sign changes plus pairs of roots hidden inside one cell near a tangency.
    std::vector<Bracket> brackets(const std::vector<double>& xs, const std::vector<double>& fs) const {
        std::vector<Bracket> out;
        const std::size_t n = xs.size();
        const double spacing = xs[1] - xs[0];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const int s0 = sign_of(fs[i]);
            const int s1 = sign_of(fs[i + 1]);
            if (s0 == 0) {
                out.push_back({xs[i], xs[i], 0.0, 0.0});
            } else if (s1 != 0 && s0 != s1) {
                out.push_back({xs[i], xs[i + 1], fs[i], fs[i + 1]});
            }
        }
        if (n > 0 && sign_of(fs[n - 1]) == 0) out.push_back({xs[n - 1], xs[n - 1], 0.0, 0.0});

        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double f = fs[i];
            if (!std::isfinite(f) || f == 0.0) continue;
            if (sign_of(fs[i - 1]) != sign_of(f) || sign_of(fs[i + 1]) != sign_of(f)) continue;
            if (!(std::abs(f) <= std::abs(fs[i - 1]) && std::abs(f) <= std::abs(fs[i + 1]))) continue;
            if (std::abs(f) >= 4.0 * spacing) continue;
            const double s = f > 0.0 ? 1.0 : -1.0;
            double a = xs[i - 1];
            double b = xs[i + 1];
            // Golden-section minimisation of s * F.
            const double gr = 0.6180339887498949;
            double u = b - gr * (b - a);
            double v = a + gr * (b - a);
            double fu = s * F(u);
            double fv = s * F(v);
            for (int it = 0; it < 80 && (b - a) > opts_.x_tol; ++it) {
                if (fu < 0.0 || fv < 0.0) break;
                if (fu < fv) {
                    b = v;
                    v = u;
                    fv = fu;
                    u = b - gr * (b - a);
                    fu = s * F(u);
                } else {
                    a = u;
                    u = v;
                    fu = fv;
                    v = a + gr * (b - a);
                    fv = s * F(v);
                }
            }
            const double xm = fu < fv ? u : v;
            const double fm = std::min(fu, fv);
            if (fm < 0.0) {
                out.push_back({xs[i - 1], xm, fs[i - 1], s * fm});
                out.push_back({xm, xs[i + 1], s * fm, fs[i + 1]});
            }
        }
        std::sort(out.begin(), out.end(), [](const Bracket& p, const Bracket& q) { return p.a < q.a; });
        return out;
    }

    double bisect(Bracket br) const {
        if (br.a == br.b) return br.a;
        for (int it = 0; it < 200; ++it) {
            const double tol = opts_.x_tol * std::max(1.0, std::abs(br.a));
            if (br.b - br.a <= tol) break;
            const double m = 0.5 * (br.a + br.b);
            const double fm = F(m);
            if (fm == 0.0) return m;
            if (sign_of(fm) == sign_of(br.fa)) {
                br.a = m;
                br.fa = fm;
            } else {
                br.b = m;
                br.fb = fm;
            }
        }
        return 0.5 * (br.a + br.b);
    }

private:
    const OdeSpec& spec_;
    double T_;
    const CensusOptions& opts_;
};

SolutionKind label(double log_mult, double tol) {
    if (std::abs(std::expm1(log_mult)) < tol) return SolutionKind::NonHyperbolic;
    return log_mult < 0.0 ? SolutionKind::Attractive : SolutionKind::Repulsive;
}

// Forward Newton on T(x) - x for solutions whose map slope is below 1,
// backward Newton on the inverse map otherwise.
PeriodicSolution polish(const OdeSpec& spec, double T, double x, bool repulsive, const CensusOptions& opts) {
    PeriodicSolution sol;
    sol.period = T;
    IntegratorOptions io = opts.integrator;
    io.record = false;
    const double t_from = repulsive ? T : 0.0;
    const double t_to = repulsive ? 0.0 : T;
    for (int it = 0; it < 8; ++it) {
        const MapResult m = flow_map(spec, t_from, x, t_to, io);
        const double slope = std::exp(m.log_multiplier);
        if (!(std::abs(slope - 1.0) > 1e-3)) break;
        const double step = (m.x_end - x) / (slope - 1.0);
        if (!std::isfinite(step) || std::abs(step) > 1e-6 * std::max(1.0, std::abs(x))) break;
        x -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    io.record = opts.keep_samples;
    Trajectory traj;
    if (io.record) {
        run(spec, t_from, x, t_to, io, &traj);
    } else {
        const State s = run(spec, t_from, x, t_to, io, nullptr);
        traj.times = {t_from, t_to};
        traj.values = {x, s.x};
        traj.log_mult = {0.0, s.L};
    }
    const double L = traj.log_mult.back();
    sol.fixed_point = x;
    sol.log_multiplier = repulsive ? -L : L;
    sol.multiplier = std::exp(sol.log_multiplier);
    sol.residual = std::abs(traj.values.back() - x);
    sol.kind = label(sol.log_multiplier, opts.hyperbolicity_tol);
    if (opts.keep_samples) sol.samples = std::move(traj);
    return sol;
}

}  // namespace

Census find_periodic_solutions(const OdeSpec& spec, double T, const CensusOptions& opts) {
    spec.validate();
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("period must be positive");
    if (opts.initial_grid < 2 || opts.max_grid < opts.initial_grid) {
        throw ValidationError("census grid sizes must satisfy 2 <= initial <= max");
    }
    Census census;
    const SignalBounds b = bounds(spec.signal);
    const auto [lo, hi] = scan_range(spec, b);
    census.scan_lo = lo;
    census.scan_hi = hi;
    census.rho = spec.kind == RhsKind::Full ? hi : hi + kSqrt3;

    const Scanner scanner(spec, T, opts);
    auto grid = [&](int n) {
        std::vector<double> xs(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
        return xs;
    };

    int n = opts.initial_grid;
    std::vector<double> xs = grid(n);
    std::vector<double> fs = scanner.evaluate(xs);
    std::vector<Bracket> brs = scanner.brackets(xs, fs);
    while (2 * n <= opts.max_grid) {
        const int n2 = 2 * n;
        std::vector<double> xs2 = grid(n2);
        std::vector<double> mids;
        mids.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) mids.push_back(xs2[2 * i + 1]);
        const std::vector<double> fm = scanner.evaluate(mids);
        std::vector<double> fs2(xs2.size());
        for (int i = 0; i <= n; ++i) fs2[2 * i] = fs[i];
        for (int i = 0; i < n; ++i) fs2[2 * i + 1] = fm[i];
        std::vector<Bracket> brs2 = scanner.brackets(xs2, fs2);
        const bool stable = brs2.size() == brs.size();
        n = n2;
        xs = std::move(xs2);
        fs = std::move(fs2);
        brs = std::move(brs2);
        if (stable) break;
    }
    census.grid_points = n + 1;

    struct Root {
        double x;
        bool repulsive;
    };
    std::vector<Root> roots;
    for (const auto& br : brs) {
        const double x = scanner.bisect(br);
        // F decreasing through the root means the map slope is below 1.
        const bool repulsive = br.a != br.b && br.fa < 0.0 && br.fb > 0.0;
        roots.push_back({x, repulsive});
    }
    std::sort(roots.begin(), roots.end(), [](const Root& p, const Root& q) { return p.x < q.x; });
    std::vector<Root> unique;
    for (const auto& r : roots) {
        if (!unique.empty() && std::abs(r.x - unique.back().x) <= opts.x_tol * std::max(1.0, std::abs(r.x))) {
            continue;
        }
        unique.push_back(r);
    }
    for (std::size_t i = 1; i < unique.size(); ++i) {
        const double gap = unique[i].x - unique[i - 1].x;
        if (gap < 10.0 * opts.x_tol * std::max(1.0, std::abs(unique[i].x))) {
            census.warnings.push_back("fixed points " + fmt(unique[i - 1].x) + " and " + fmt(unique[i].x) +
                                      " are closer than 10x the bisection tolerance (possible saddle-node)");
        }
    }
    for (const auto& r : unique) {
        census.solutions.push_back(polish(spec, T, r.x, r.repulsive, opts));
        const auto& s = census.solutions.back();
        if (s.kind == SolutionKind::NonHyperbolic) {
            census.warnings.push_back("fixed point " + fmt(s.fixed_point) + " has multiplier " +
                                      fmt(s.multiplier) + " within tolerance of 1 (non-hyperbolic)");
        }
    }
    return census;
}

double finite_time_exponent(const OdeSpec& spec, const Trajectory& traj) {
    if (traj.times.size() < 2) throw ValidationError("trajectory needs at least two samples");
    const double dt = traj.times.back() - traj.times.front();
    if (dt == 0.0) throw ValidationError("trajectory spans zero time");
    if (traj.log_mult.size() == traj.times.size()) {
        return (traj.log_mult.back() - traj.log_mult.front()) / dt;
    }
    double total = 0.0;
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        total += 0.5 * (spec.rhs_dx(traj.values[i - 1]) + spec.rhs_dx(traj.values[i])) *
                 (traj.times[i] - traj.times[i - 1]);
    }
    return total / dt;
}

namespace {

bool two_separated(const Census& census, double separation) {
    if (census.solutions.size() < 2) return false;
    int groups = 1;
    double last = census.solutions.front().fixed_point;
    for (std::size_t i = 1; i < census.solutions.size(); ++i) {
        const double x = census.solutions[i].fixed_point;
        if (x - last > separation) {
            ++groups;
            last = x;
        }
    }
    return groups >= 2;
}

}  // namespace

LambdaPm estimate_lambda_pm(double c, const SignalSpec& signal, const LambdaPmOptions& opts) {
    if (!(c > 4.0)) throw DomainError("estimate of lambda_-, lambda_+ requires c > 4");
    if (!(opts.tol > 0.0)) throw ValidationError("tolerance must be positive");
    validate(signal);
    const double T = census_period(signal);
    const SignalBounds b = bounds(signal);
    const ScalarDiagnostics diag = diagnostics(c);
    CensusOptions co = opts.census;
    co.keep_samples = false;

    LambdaPm out;
    auto predicate = [&](RhsKind kind, double lambda) {
        OdeSpec spec{c, lambda, signal, kind};
        ++out.census_calls;
        return two_separated(find_periodic_solutions(spec, T, co), opts.separation);
    };
    // `true_above` says on which side of the bifurcation the predicate holds.
    auto solve = [&](RhsKind kind, double lo, double hi, bool true_above, double* width) {
        const bool plo = predicate(kind, lo);
        const bool phi = predicate(kind, hi);
        if (plo == phi || phi != true_above) {
            throw BracketError(std::string("predicate does not change on the seed bracket for the ") +
                               to_string(kind) + " equation: [" + fmt(lo) + ", " + fmt(hi) + "]");
        }
        while (hi - lo > opts.tol) {
            const double mid = 0.5 * (lo + hi);
            if (predicate(kind, mid) == true_above) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        *width = hi - lo;
        return 0.5 * (lo + hi);
    };
    const double h1 = diag.h1_v();
    out.lambda_minus = solve(RhsKind::ConcaveLinear, diag.lam1_v() - b.sup - h1, diag.lam1_v() - b.inf + h1, true,
                             &out.bracket_minus);
    out.lambda_plus = solve(RhsKind::LinearConvex, diag.lam2_v() - b.sup - h1, diag.lam2_v() - b.inf + h1, false,
                            &out.bracket_plus);
    out.sandwich_minus = {diag.lam1_v() - b.sup, diag.lam1_v() - b.inf};
    out.sandwich_plus = {diag.lam2_v() - b.sup, diag.lam2_v() - b.inf};
    return out;
}

}  // namespace bistab
