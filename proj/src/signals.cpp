#include "bistab/signals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "bistab/errors.hpp"

namespace bistab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGolden = 0.6180339887498948482;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive_dfrak(double dfrak) {
    if (!(dfrak > 0.0) || !std::isfinite(dfrak)) {
        throw ValidationError("weight rate d must be positive (got " + std::to_string(dfrak) + ")");
    }
}

double eval_trig(const TrigSumSignal& s, double t) {
    double v = s.a0;
    for (const auto& term : s.terms) v += term.amplitude * std::cos(term.frequency * t + term.phase);
    return v;
}

double eval_sampled(const SampledPeriodicSignal& s, double t) {
    const auto& pts = s.samples;
    double tau = std::fmod(t, s.period);
    if (tau < 0.0) tau += s.period;
    // First sample strictly after tau.
    auto it = std::upper_bound(pts.begin(), pts.end(), tau,
                               [](double v, const std::pair<double, double>& p) { return v < p.first; });
    double t0, v0, t1, v1;
    if (it == pts.begin()) {
        t0 = pts.back().first - s.period;
        v0 = pts.back().second;
        t1 = pts.front().first;
        v1 = pts.front().second;
    } else if (it == pts.end()) {
        t0 = pts.back().first;
        v0 = pts.back().second;
        t1 = pts.front().first + s.period;
        v1 = pts.front().second;
    } else {
        t0 = std::prev(it)->first;
        v0 = std::prev(it)->second;
        t1 = it->first;
        v1 = it->second;
    }
    const double w = (tau - t0) / (t1 - t0);
    return v0 + w * (v1 - v0);
}

// Best rational approximation p/q of x with q <= max_den, by continued fractions.
std::optional<std::pair<long long, long long>> rationalize(double x, long long max_den, double rel_tol) {
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        const double a_f = std::floor(v);
        if (a_f > 1e12) break;
        const long long a = static_cast<long long>(a_f);
        const long long h2 = a * h1 + h0;
        const long long k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double approx = static_cast<double>(h1) / static_cast<double>(k1);
        if (std::abs(approx - x) <= rel_tol * std::abs(x)) return std::make_pair(h1, k1);
        const double frac = v - a_f;
        if (frac <= 0.0) break;
        v = 1.0 / frac;
    }
    return std::nullopt;
}

std::optional<double> trig_period(const TrigSumSignal& s) {
    if (s.terms.empty()) return std::nullopt;
    if (s.terms.size() == 1) return kTwoPi / s.terms.front().frequency;
    if (s.rationally_independent) return std::nullopt;
    const double ref = s.terms.front().frequency;
    std::vector<std::pair<long long, long long>> ratios;
    long long lcm_den = 1;
    for (const auto& term : s.terms) {
        auto r = rationalize(term.frequency / ref, 10000, 1e-11);
        if (!r) return std::nullopt;
        ratios.push_back(*r);
        lcm_den = std::lcm(lcm_den, r->second);
        if (lcm_den > 1000000) return std::nullopt;
    }
    long long g = 0;
    for (const auto& [p, q] : ratios) g = std::gcd(g, p * (lcm_den / q));
    if (g <= 0) return std::nullopt;
    const double base = ref * static_cast<double>(g) / static_cast<double>(lcm_den);
    return kTwoPi / base;
}

double max_frequency(const TrigSumSignal& s) {
    double m = 0.0;
    for (const auto& term : s.terms) m = std::max(m, term.frequency);
    return m;
}

double min_frequency(const TrigSumSignal& s) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& term : s.terms) m = std::min(m, term.frequency);
    return m;
}

double golden_maximize(const std::function<double(double)>& f, double a, double b, double tol, double* arg) {
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        }
    }
    if (f1 >= f2) {
        if (arg) *arg = x1;
        return f1;
    }
    if (arg) *arg = x2;
    return f2;
}

// Maximum of f over a window sampled on n uniform points, with the top local
// maxima refined by golden section.  `periodic` wraps neighbours around.
double grid_maximize(const std::function<double(double)>& f, double window, long n, bool periodic,
                     const ExtremaOptions& opts) {
    const double h = window / static_cast<double>(n);
    const long count = periodic ? n : n + 1;
    std::vector<double> vals(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) vals[static_cast<std::size_t>(i)] = f(h * static_cast<double>(i));

    std::vector<long> peaks;
    for (long i = 0; i < count; ++i) {
        const long ip = i - 1;
        const long in = i + 1;
        const double left = (ip >= 0) ? vals[ip] : (periodic ? vals[count - 1] : -std::numeric_limits<double>::infinity());
        const double right = (in < count) ? vals[in] : (periodic ? vals[0] : -std::numeric_limits<double>::infinity());
        if (vals[i] >= left && vals[i] >= right) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(), [&](long a, long b) { return vals[a] > vals[b]; });
    if (peaks.size() > static_cast<std::size_t>(opts.refine_candidates)) peaks.resize(opts.refine_candidates);

    double best = *std::max_element(vals.begin(), vals.end());
    for (long i : peaks) {
        double a = h * static_cast<double>(i - 1);
        double b = h * static_cast<double>(i + 1);
        if (!periodic) {
            a = std::max(a, 0.0);
            b = std::min(b, window);
        }
        best = std::max(best, golden_maximize(f, a, b, opts.refine_tol, nullptr));
    }
    return best;
}

struct Window {
    double length = 0.0;
    long points = 0;
    bool periodic = true;
};

Window trig_window(const TrigSumSignal& s, const ExtremaOptions& opts) {
    Window w;
    const double fmax = max_frequency(s);
    if (auto p = trig_period(s)) {
        w.length = *p;
        w.periodic = true;
    } else {
        w.length = opts.aperiodic_window * kTwoPi / min_frequency(s);
        w.periodic = false;
    }
    const double cycles = w.length * fmax / kTwoPi;
    const double pts = std::max<double>(opts.points_per_period, opts.points_per_fastest_cycle * cycles);
    w.points = static_cast<long>(std::min(pts, 4.0e7));
    return w;
}

SignalBounds trig_bounds(const TrigSumSignal& s, const ExtremaOptions& opts) {
    SignalBounds b;
    if (s.terms.empty()) {
        b.sup = b.inf = s.a0;
        b.exact = true;
        return b;
    }
    if (s.terms.size() == 1 || s.rationally_independent) {
        double total = 0.0;
        for (const auto& term : s.terms) total += std::abs(term.amplitude);
        b.sup = s.a0 + total;
        b.inf = s.a0 - total;
        b.exact = true;
        return b;
    }
    const Window w = trig_window(s, opts);
    auto f = [&](double t) { return eval_trig(s, t); };
    auto neg = [&](double t) { return -eval_trig(s, t); };
    b.sup = grid_maximize(f, w.length, w.points, w.periodic, opts);
    b.inf = -grid_maximize(neg, w.length, w.points, w.periodic, opts);
    b.exact = false;
    return b;
}

double trig_weighted(const TrigSumSignal& s, double d, double r) {
    double v = s.a0;
    for (const auto& term : s.terms) {
        const double psi = term.frequency * r + term.phase;
        const double th = term.frequency;
        v += term.amplitude * (d * d * std::cos(psi) - th * d * std::sin(psi)) / (d * d + th * th);
    }
    return v;
}

// Trig sum whose value at r is the weighted average of s seen from r.
TrigSumSignal weighted_trig(const TrigSumSignal& s, double d) {
    TrigSumSignal out;
    out.a0 = s.a0;
    out.rationally_independent = s.rationally_independent;
    out.terms.reserve(s.terms.size());
    for (const auto& term : s.terms) {
        const double norm = std::hypot(d, term.frequency);
        out.terms.push_back({term.amplitude * d / norm, term.frequency, term.phase + std::atan2(term.frequency, d)});
    }
    return out;
}

double simpson_adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_panel(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_adaptive(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Breakpoints in s for the weighted-average integral: panel edges at most
// `width` apart, plus the interpolation knots of a sampled signal.
std::vector<double> quadrature_breaks(const SignalSpec& signal, double r, double s_max, double width) {
    std::vector<double> br;
    const long n = std::max<long>(1, static_cast<long>(std::ceil(s_max / width)));
    br.reserve(static_cast<std::size_t>(n + 1));
    for (long i = 0; i <= n; ++i) br.push_back(s_max * static_cast<double>(i) / static_cast<double>(n));
    if (const auto* sp = std::get_if<SampledPeriodicSignal>(&signal)) {
        const double P = sp->period;
        const double first_cycle = std::floor(r / P);
        for (double cyc = first_cycle; cyc * P - r <= s_max + P; cyc += 1.0) {
            for (const auto& [t, v] : sp->samples) {
                const double s = cyc * P + t - r;
                if (s > 0.0 && s < s_max) br.push_back(s);
            }
        }
        std::sort(br.begin(), br.end());
        br.erase(std::unique(br.begin(), br.end()), br.end());
    }
    return br;
}

double characteristic_time(const SignalSpec& signal) {
    return std::visit(overloaded{
                          [](const ConstantSignal&) { return std::numeric_limits<double>::infinity(); },
                          [](const TrigSumSignal& s) {
                              return s.terms.empty() ? std::numeric_limits<double>::infinity()
                                                     : kTwoPi / max_frequency(s);
                          },
                          [](const FourierCesaroSignal& s) {
                              return kTwoPi / static_cast<double>(std::max(1, s.order - 1));
                          },
                          [](const SampledPeriodicSignal& s) { return s.period; },
                      },
                      signal);
}

}  // namespace

void validate(const SignalSpec& signal) {
    std::visit(overloaded{
                   [](const ConstantSignal& s) {
                       if (!std::isfinite(s.a0)) throw ValidationError("constant signal: a0 must be finite");
                   },
                   [](const TrigSumSignal& s) {
                       if (!std::isfinite(s.a0)) throw ValidationError("trig signal: a0 must be finite");
                       for (const auto& term : s.terms) {
                           if (!(term.frequency > 0.0) || !std::isfinite(term.frequency)) {
                               throw ValidationError("trig signal: frequencies must be strictly positive");
                           }
                           if (!std::isfinite(term.amplitude) || !std::isfinite(term.phase)) {
                               throw ValidationError("trig signal: amplitudes and phases must be finite");
                           }
                       }
                   },
                   [](const FourierCesaroSignal& s) {
                       if (s.order < 2) throw ValidationError("fourier_cesaro signal: N must be >= 2");
                       for (double v : s.a)
                           if (!std::isfinite(v)) throw ValidationError("fourier_cesaro signal: non-finite a_n");
                       for (double v : s.b)
                           if (!std::isfinite(v)) throw ValidationError("fourier_cesaro signal: non-finite b_n");
                   },
                   [](const SampledPeriodicSignal& s) {
                       if (!(s.period > 0.0) || !std::isfinite(s.period)) {
                           throw ValidationError("sampled signal: period must be positive");
                       }
                       if (s.samples.size() < 4) throw ValidationError("sampled signal: at least 4 samples required");
                       for (std::size_t i = 0; i < s.samples.size(); ++i) {
                           const auto& [t, v] = s.samples[i];
                           if (!(t >= 0.0 && t < s.period)) {
                               throw ValidationError("sampled signal: sample times must lie in [0, period)");
                           }
                           if (!std::isfinite(v)) throw ValidationError("sampled signal: non-finite value");
                           if (i > 0 && !(t > s.samples[i - 1].first)) {
                               throw ValidationError("sampled signal: sample times must be strictly increasing");
                           }
                       }
                   },
               },
               signal);
}

TrigSumSignal to_trig_sum(const FourierCesaroSignal& s) {
    TrigSumSignal out;
    out.a0 = s.a0;
    const int N = s.order;
    for (int n = 1; n <= N - 1; ++n) {
        const double w = static_cast<double>(N - n) / static_cast<double>(N);
        const double an = (static_cast<std::size_t>(n) <= s.a.size()) ? s.a[n - 1] : 0.0;
        const double bn = (static_cast<std::size_t>(n) <= s.b.size()) ? s.b[n - 1] : 0.0;
        if (an != 0.0) out.terms.push_back({w * an, static_cast<double>(n), 0.0});
        if (bn != 0.0) out.terms.push_back({w * bn, static_cast<double>(n), -std::numbers::pi / 2.0});
    }
    return out;
}

TrigSumSignal sine_signal(double a0, double amplitude, double omega) {
    TrigSumSignal s;
    s.a0 = a0;
    s.terms.push_back({amplitude, omega, -std::numbers::pi / 2.0});
    return s;
}

double eval(const SignalSpec& signal, double t) {
    return std::visit(overloaded{
                          [](const ConstantSignal& s) { return s.a0; },
                          [t](const TrigSumSignal& s) { return eval_trig(s, t); },
                          [t](const FourierCesaroSignal& s) {
                              double v = s.a0;
                              const int N = s.order;
                              for (int n = 1; n <= N - 1; ++n) {
                                  const double w = static_cast<double>(N - n) / static_cast<double>(N);
                                  const double an = (static_cast<std::size_t>(n) <= s.a.size()) ? s.a[n - 1] : 0.0;
                                  const double bn = (static_cast<std::size_t>(n) <= s.b.size()) ? s.b[n - 1] : 0.0;
                                  v += w * (an * std::cos(n * t) + bn * std::sin(n * t));
                              }
                              return v;
                          },
                          [t](const SampledPeriodicSignal& s) { return eval_sampled(s, t); },
                      },
                      signal);
}

std::optional<double> period_of(const SignalSpec& signal) {
    return std::visit(overloaded{
                          [](const ConstantSignal&) -> std::optional<double> { return std::nullopt; },
                          [](const TrigSumSignal& s) { return trig_period(s); },
                          [](const FourierCesaroSignal& s) -> std::optional<double> {
                              auto t = to_trig_sum(s);
                              if (t.terms.empty()) return std::nullopt;
                              return trig_period(t);
                          },
                          [](const SampledPeriodicSignal& s) -> std::optional<double> { return s.period; },
                      },
                      signal);
}

bool is_nonconstant_periodic(const SignalSpec& signal) {
    if (!period_of(signal)) return false;
    const SignalBounds b = bounds(signal);
    return b.sup > b.inf;
}

double sup_abs_bound(const SignalSpec& signal) {
    return std::visit(overloaded{
                          [](const ConstantSignal& s) { return std::abs(s.a0); },
                          [](const TrigSumSignal& s) {
                              double v = std::abs(s.a0);
                              for (const auto& term : s.terms) v += std::abs(term.amplitude);
                              return v;
                          },
                          [](const FourierCesaroSignal& s) {
                              double v = std::abs(s.a0);
                              for (const auto& term : to_trig_sum(s).terms) v += std::abs(term.amplitude);
                              return v;
                          },
                          [](const SampledPeriodicSignal& s) {
                              double v = 0.0;
                              for (const auto& p : s.samples) v = std::max(v, std::abs(p.second));
                              return v;
                          },
                      },
                      signal);
}

SignalBounds bounds(const SignalSpec& signal, const ExtremaOptions& opts) {
    validate(signal);
    return std::visit(overloaded{
                          [](const ConstantSignal& s) { return SignalBounds{s.a0, s.a0, true}; },
                          [&](const TrigSumSignal& s) { return trig_bounds(s, opts); },
                          [&](const FourierCesaroSignal& s) {
                              SignalBounds b = trig_bounds(to_trig_sum(s), opts);
                              b.exact = b.exact && to_trig_sum(s).terms.size() <= 1;
                              return b;
                          },
                          [](const SampledPeriodicSignal& s) {
                              SignalBounds b;
                              b.sup = -std::numeric_limits<double>::infinity();
                              b.inf = std::numeric_limits<double>::infinity();
                              for (const auto& p : s.samples) {
                                  b.sup = std::max(b.sup, p.second);
                                  b.inf = std::min(b.inf, p.second);
                              }
                              b.exact = false;
                              return b;
                          },
                      },
                      signal);
}

double weighted_average_quadrature(const SignalSpec& signal, double dfrak, double r, const ExtremaOptions& opts) {
    require_positive_dfrak(dfrak);
    validate(signal);
    const double ymax = std::max(sup_abs_bound(signal), opts.quad_tol);
    // Tail beyond s_max contributes at most |y|_inf exp(-d s_max) = tol.
    const double s_max = std::max(std::log(ymax / opts.quad_tol), 1.0) / dfrak;
    const double width = std::min(1.0 / dfrak, characteristic_time(signal) / 4.0);
    const auto breaks = quadrature_breaks(signal, r, s_max, width);
    auto f = [&](double s) { return dfrak * std::exp(-dfrak * s) * eval(signal, r + s); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        total += integrate_panel(f, a, b, opts.quad_tol * (b - a) / s_max);
    }
    return total;
}

double weighted_average(const SignalSpec& signal, double dfrak, double r, const ExtremaOptions& opts) {
    require_positive_dfrak(dfrak);
    return std::visit(overloaded{
                          [](const ConstantSignal& s) { return s.a0; },
                          [&](const TrigSumSignal& s) { return trig_weighted(s, dfrak, r); },
                          [&](const FourierCesaroSignal& s) { return trig_weighted(to_trig_sum(s), dfrak, r); },
                          [&](const SampledPeriodicSignal&) {
                              return weighted_average_quadrature(signal, dfrak, r, opts);
                          },
                      },
                      signal);
}

WeightedBounds weighted_bounds(const SignalSpec& signal, double dfrak, const ExtremaOptions& opts) {
    require_positive_dfrak(dfrak);
    validate(signal);
    WeightedBounds w;
    w.dfrak = dfrak;
    auto from_trig = [&](const TrigSumSignal& s) {
        const SignalBounds b = trig_bounds(weighted_trig(s, dfrak), opts);
        w.sup_w = b.sup;
        w.inf_w = b.inf;
        w.exact = b.exact;
    };
    std::visit(overloaded{
                   [&](const ConstantSignal& s) {
                       w.sup_w = w.inf_w = s.a0;
                       w.exact = true;
                   },
                   [&](const TrigSumSignal& s) { from_trig(s); },
                   [&](const FourierCesaroSignal& s) {
                       const auto t = to_trig_sum(s);
                       from_trig(t);
                       w.exact = w.exact && t.terms.size() <= 1;
                   },
                   [&](const SampledPeriodicSignal& s) {
                       const long n = std::max<long>(512, std::min<long>(opts.points_per_period,
                                                                        8 * static_cast<long>(s.samples.size())));
                       auto f = [&](double r) { return weighted_average_quadrature(signal, dfrak, r, opts); };
                       auto neg = [&](double r) { return -weighted_average_quadrature(signal, dfrak, r, opts); };
                       ExtremaOptions local = opts;
                       local.refine_tol = std::max(opts.refine_tol, 1e-8 * s.period);
                       w.sup_w = grid_maximize(f, s.period, n, true, local);
                       w.inf_w = -grid_maximize(neg, s.period, n, true, local);
                       w.exact = false;
                   },
               },
               signal);
    return w;
}

double series_bound(std::span<const TrigTerm> terms, double dfrak) {
    require_positive_dfrak(dfrak);
    double total = 0.0;
    for (const auto& term : terms) {
        total += std::abs(term.amplitude) * (1.0 + dfrak / std::hypot(dfrak, term.frequency));
    }
    return total;
}

double cesaro_bound(std::span<const double> a, std::span<const double> b, double dfrak, int order) {
    require_positive_dfrak(dfrak);
    if (order < 2) throw ValidationError("Cesaro order N must be >= 2");
    double total = 0.0;
    for (int n = 1; n <= order - 1; ++n) {
        const double an = (static_cast<std::size_t>(n) <= a.size()) ? a[n - 1] : 0.0;
        const double bn = (static_cast<std::size_t>(n) <= b.size()) ? b[n - 1] : 0.0;
        const double weight = static_cast<double>(order - n);
        total += weight * (std::abs(an) + std::abs(bn)) * (1.0 + dfrak / std::hypot(dfrak, static_cast<double>(n)));
    }
    return total / static_cast<double>(order);
}

}  // namespace bistab
