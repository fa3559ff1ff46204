#pragma once

// Standard normal tail machinery evaluated so that nothing passes through an
// underflowed probability: the Mills ratio is computed directly for large
// arguments and logs are taken of scaled quantities.

namespace qcouple {

/// Largest |x| accepted by psi/rho/r_remainder. Beyond it the functions throw
/// std::range_error instead of degrading.
inline constexpr double kNormalEnvelope = 200.0;

/// Everything the tail code knows about one abscissa.
struct NormalEval {
  double x = 0.0;
  double phi = 0.0;   // density
  double tail = 0.0;  // upper tail; 0 once it underflows (see psi)
  double psi = 0.0;   // -log tail
  double rho = 0.0;   // hazard rate phi / tail
  double r = 0.0;     // rho - x
};

/// Standard normal density.
double phi(double x);

/// Upper tail P{N(0,1) > x}. Underflows to 0 past x ~ 38.5; use psi there.
double upper_tail(double x);

/// Mills ratio upper_tail(x) / phi(x), finite for every finite x >= 0 and
/// for moderately negative x.
double mills_ratio(double x);

/// -log upper_tail(x), accurate to ~1e-15 relative for |x| <= 200.
double psi(double x);

/// Hazard rate phi(x) / upper_tail(x) = psi'(x).
double rho(double x);

/// rho(x) - x, positive and decreasing on the whole line. Evaluated without
/// the cancellation of forming rho first when x is large.
double r_remainder(double x);

NormalEval evaluate(double x);

/// Solves psi(x) = level by safeguarded Newton iteration (psi is convex).
/// Levels below log 2 are reflected through psi(-x) = -log(1 - exp(-psi(x))).
double inverse_psi(double level);

/// y - log(y)/y with y = sqrt(2 log(1/p)); the classical extreme-tail
/// quantile approximation, used as a Newton seed. Requires 0 < p < 0.1.
double inv_tail_asymptotic(double p);

/// Same as inv_tail_asymptotic but parameterised by L = -log p, so that
/// levels far beyond double underflow can be seeded.
double inv_tail_asymptotic_log(double level);

}  // namespace qcouple
