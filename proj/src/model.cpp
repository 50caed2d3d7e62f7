#include "bistab/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bistab/errors.hpp"

namespace bistab {

namespace {

void require_c_at_least_4(double c, const char* what) {
    if (!(c >= 4.0)) {
        throw DomainError(std::string(what) + " requires c >= 4 (got c=" + std::to_string(c) + ")");
    }
}

void require_c_above_4(double c, const char* what) {
    if (!(c > 4.0)) {
        throw DomainError(std::string(what) + " requires c > 4 (got c=" + std::to_string(c) + ")");
    }
}

// sqrt(c (c - 4)); exactly zero at c = 4.
double root_c_cm4(double c) { return std::sqrt(c * (c - 4.0)); }

// Bisection on a monotone bracket [lo, hi] of f(x) = lambda + g(x).
double bisect_equilibrium(double c, double lambda, double lo, double hi) {
    double flo = lambda + g_eval(c, lo);
    if (flo == 0.0) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = lambda + g_eval(c, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void ModelParams::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw ValidationError("material constant c must be positive and finite");
    }
}

double g_eval(double c, double x) { return -x - 2.0 * c * x / (1.0 + x * x); }

Derivs g_derivs(double c, double x) {
    const double x2 = x * x;
    const double q = 1.0 + x2;
    Derivs d;
    d.d1 = (-1.0 - 2.0 * c + 2.0 * (c - 1.0) * x2 - x2 * x2) / (q * q);
    d.d2 = -4.0 * c * x * (x2 - 3.0) / (q * q * q);
    d.d3 = 12.0 * c * (x2 - 3.0 - 2.0 * kSqrt2) * (x2 - 3.0 + 2.0 * kSqrt2) / (q * q * q * q);
    return d;
}

double gbar_eval(double c, double x) {
    if (x >= 0.0) return g_eval(c, x);
    return -(1.0 + 2.0 * c) * x - x * x * x;
}

double gbar_deriv(double c, double x) {
    if (x > 0.0) return g_derivs(c, x).d1;
    // Both branches share -(1 + 2c) at the origin.
    return -(1.0 + 2.0 * c) - 3.0 * x * x;
}

Derivs gbar_derivs(double c, double x) {
    if (x >= 0.0) return g_derivs(c, x);
    return Derivs{-(1.0 + 2.0 * c) - 3.0 * x * x, -6.0 * x, -6.0};
}

double x1_of(double c) {
    require_c_at_least_4(c, "x1");
    return std::sqrt(c - 1.0 - root_c_cm4(c));
}

double x2_of(double c) {
    require_c_at_least_4(c, "x2");
    return std::sqrt(c - 1.0 + root_c_cm4(c));
}

double lambda1_of(double c) {
    require_c_at_least_4(c, "lambda1");
    const double s = std::sqrt(c * (c - 4.0) * (c - 4.0) * (c - 4.0));
    return std::sqrt((c * c + 10.0 * c - 2.0 - s) / 2.0);
}

double lambda2_of(double c) {
    require_c_at_least_4(c, "lambda2");
    const double s = std::sqrt(c * (c - 4.0) * (c - 4.0) * (c - 4.0));
    return std::sqrt((c * c + 10.0 * c - 2.0 + s) / 2.0);
}

double lambda3_of(double c) { return kBandLo * ((1.0 + kSqrt2 / 2.0) * c + 1.0); }

double lambda4_of(double c) { return kBandHi * ((1.0 - kSqrt2 / 2.0) * c + 1.0); }

double cshift_of(double c) { return kSqrt3 * (c + 2.0) / 2.0; }

double dfrak_of(double c) { return c / 4.0 - 1.0; }

#define BISTAB_DIAG_ACCESSOR(name, field)                                               \
    double ScalarDiagnostics::name() const {                                            \
        if (!field) throw DomainError(#field " is undefined for c=" + std::to_string(c)); \
        return *field;                                                                  \
    }

BISTAB_DIAG_ACCESSOR(x1_v, x1)
BISTAB_DIAG_ACCESSOR(x2_v, x2)
BISTAB_DIAG_ACCESSOR(lam1_v, lam1)
BISTAB_DIAG_ACCESSOR(lam2_v, lam2)
BISTAB_DIAG_ACCESSOR(h1_v, h1)
BISTAB_DIAG_ACCESSOR(h2_v, h2)
BISTAB_DIAG_ACCESSOR(h3_v, h3)
BISTAB_DIAG_ACCESSOR(h4_v, h4)

#undef BISTAB_DIAG_ACCESSOR

ScalarDiagnostics diagnostics(double c) {
    ModelParams{c}.validate();
    ScalarDiagnostics d;
    d.c = c;
    d.lam3 = lambda3_of(c);
    d.lam4 = lambda4_of(c);
    d.dfrak = dfrak_of(c);
    d.cshift = cshift_of(c);
    if (c >= 4.0) {
        d.x1 = x1_of(c);
        d.x2 = x2_of(c);
        d.lam1 = lambda1_of(c);
        d.lam2 = lambda2_of(c);
        d.h1 = *d.lam2 - *d.lam1;
        d.h2 = d.cshift - *d.lam1;
        d.h3 = *d.lam2 - d.cshift;
        d.h4 = d.lam4 - *d.lam1;
        d.alpha = 0.5 * (*d.lam1 + *d.lam2);
        d.beta = 0.5 * (*d.lam2 - *d.lam1);
    }
    return d;
}

double mg_eval(double c, double z) {
    require_c_above_4(c, "mg");
    return gbar_eval(c, z + kSqrt3) + cshift_of(c) - dfrak_of(c) * z;
}

double mg_minus(double c, double z) {
    require_c_above_4(c, "mg_minus");
    return z >= 0.0 ? mg_eval(c, z) : 0.0;
}

double mg_plus(double c, double z) {
    require_c_above_4(c, "mg_plus");
    return z <= 0.0 ? mg_eval(c, z) : 0.0;
}

double mg_deriv(double c, double z) {
    require_c_above_4(c, "mg");
    return gbar_deriv(c, z + kSqrt3) - dfrak_of(c);
}

double mg_minus_deriv(double c, double z) {
    require_c_above_4(c, "mg_minus");
    return z >= 0.0 ? mg_deriv(c, z) : 0.0;
}

double mg_plus_deriv(double c, double z) {
    require_c_above_4(c, "mg_plus");
    return z <= 0.0 ? mg_deriv(c, z) : 0.0;
}

std::vector<Equilibrium> equilibria(double c, double lambda, double hyperbolicity_tol) {
    ModelParams{c}.validate();
    // -g is strictly increasing on each piece between its critical points and
    // -g(x) >= x, so every non-negative root lies in [0, max(lambda, 0)].
    std::vector<double> cuts{0.0};
    if (c > 4.0) {
        cuts.push_back(x1_of(c));
        cuts.push_back(x2_of(c));
    }
    cuts.push_back(std::max(lambda, cuts.back()) + 1.0);

    std::vector<double> roots;
    const double scale = std::max(1.0, std::abs(lambda));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        const double flo = lambda + g_eval(c, lo);
        const double fhi = lambda + g_eval(c, hi);
        const double eps = 1e-14 * scale;
        if (std::abs(flo) <= eps) {
            roots.push_back(lo);
        } else if (std::abs(fhi) <= eps) {
            roots.push_back(hi);
        } else if ((flo > 0.0) != (fhi > 0.0)) {
            roots.push_back(bisect_equilibrium(c, lambda, lo, hi));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }),
                roots.end());

    std::vector<Equilibrium> out;
    out.reserve(roots.size());
    for (double x : roots) {
        Equilibrium e;
        e.x = x;
        e.slope = g_derivs(c, x).d1;
        if (std::abs(e.slope) <= hyperbolicity_tol) {
            e.stability = EquilibriumStability::NonHyperbolic;
        } else {
            e.stability = e.slope < 0.0 ? EquilibriumStability::Attractive : EquilibriumStability::Repulsive;
        }
        out.push_back(e);
    }
    return out;
}

const char* to_string(EquilibriumStability s) {
    switch (s) {
        case EquilibriumStability::Attractive: return "attractive";
        case EquilibriumStability::Repulsive: return "repulsive";
        case EquilibriumStability::NonHyperbolic: return "non-hyperbolic";
    }
    return "unknown";
}

}  // namespace bistab
