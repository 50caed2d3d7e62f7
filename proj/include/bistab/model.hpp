#pragma once

// Closed-form pieces of the driven fluorescence model x' = lambda + y(t) + gbar(x).
//
// g(x) = -x - 2 c x / (1 + x^2) is concave-convex on x >= 0 with inflection at
// sqrt(3).  gbar extends g to x < 0 by the cubic -(1 + 2c) x - x^3 so that the
// extension is C^2 and convex on (-inf, sqrt(3)].

#include <optional>
#include <vector>

namespace bistab {

inline constexpr double kSqrt3 = 1.7320508075688772935;
inline constexpr double kSqrt2 = 1.4142135623730950488;
/// Endpoints of the band where g' is strictly concave: sqrt(3 -+ 2 sqrt 2) = sqrt2 -+ 1.
inline constexpr double kBandLo = kSqrt2 - 1.0;
inline constexpr double kBandHi = kSqrt2 + 1.0;
/// Upper end of the material range on which [x1, x2] sits inside the band.
inline constexpr double kBandCmax = 2.0 + 2.0 * kSqrt2;

struct ModelParams {
    double c = 5.0;

    /// Throws ValidationError unless c > 0 and finite.
    void validate() const;
};

struct Derivs {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

double g_eval(double c, double x);
Derivs g_derivs(double c, double x);

double gbar_eval(double c, double x);
double gbar_deriv(double c, double x);
Derivs gbar_derivs(double c, double x);

// Critical points of gbar and the saddle-node values of the autonomous
// problem.  All four throw DomainError for c < 4.
double x1_of(double c);
double x2_of(double c);
double lambda1_of(double c);
double lambda2_of(double c);

/// -gbar at the lower/upper endpoint of the d-concavity band; linear in c.
double lambda3_of(double c);
double lambda4_of(double c);

/// sqrt(3) (c + 2) / 2, i.e. -gbar(sqrt 3).
double cshift_of(double c);
/// c / 4 - 1, the slope of gbar at the inflection point.
double dfrak_of(double c);

/// Scalars derived from c.  Fields that need c >= 4 are empty below it.
struct ScalarDiagnostics {
    double c = 0.0;
    std::optional<double> x1, x2;
    std::optional<double> lam1, lam2;
    double lam3 = 0.0;
    double lam4 = 0.0;
    std::optional<double> h1, h2, h3, h4;
    double dfrak = 0.0;
    double cshift = 0.0;
    std::optional<double> alpha, beta;
    double band_lo = kBandLo;
    double band_hi = kBandHi;

    bool has_saddle_nodes() const { return x1.has_value(); }

    /// Accessors for the c >= 4 fields; throw DomainError when absent.
    double x1_v() const;
    double x2_v() const;
    double lam1_v() const;
    double lam2_v() const;
    double h1_v() const;
    double h2_v() const;
    double h3_v() const;
    double h4_v() const;
};

ScalarDiagnostics diagnostics(double c);

// Shifted nonlinearity centred at the inflection point:
//   mg(z) = gbar(z + sqrt 3) + cshift - dfrak z,
// mg_minus keeps the concave half (z >= 0), mg_plus the convex half (z <= 0).
// All require c > 4 and throw DomainError otherwise.
double mg_eval(double c, double z);
double mg_minus(double c, double z);
double mg_plus(double c, double z);
double mg_deriv(double c, double z);
double mg_minus_deriv(double c, double z);
double mg_plus_deriv(double c, double z);

enum class EquilibriumStability { Attractive, Repulsive, NonHyperbolic };

struct Equilibrium {
    double x = 0.0;
    double slope = 0.0;  // g'(x)
    EquilibriumStability stability = EquilibriumStability::Attractive;
};

/// Non-negative equilibria of x' = lambda + g(x), sorted by x.  A root with
/// |g'(x)| <= hyperbolicity_tol is tagged non-hyperbolic.
std::vector<Equilibrium> equilibria(double c, double lambda, double hyperbolicity_tol = 1e-6);

const char* to_string(EquilibriumStability s);

}  // namespace bistab
