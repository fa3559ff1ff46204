#include "qcouple/normal_tail.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qcouple {
namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;  // 1/sqrt(2 pi)
constexpr double kHalfLog2Pi = 0.918938533204672741780329736406;  // log(2 pi)/2
constexpr double kLn2 = std::numbers::ln2;

// Above this abscissa the continued fraction is used instead of erfc.
constexpr double kFractionSeam = 5.0;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": non-finite argument");
  }
}

void require_envelope(double x, const char* what) {
  require_finite(x, what);
  if (std::fabs(x) > kNormalEnvelope) {
    throw std::range_error(std::string(what) + ": |x| exceeds the validated envelope of 200");
  }
}

// x + a/(x + (a+1)/(x + (a+2)/(x + ...))), modified Lentz. With a = 1 this is
// 1 / mills_ratio(x) = rho(x); with a = 2 it is 1 / r(x).
double hazard_fraction(double x, double first) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-17;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int j = 0; j < 5000; ++j) {
    const double a = first + j;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < eps) return f;
  }
  throw std::logic_error("hazard_fraction: continued fraction failed to converge");
}

}  // namespace

double phi(double x) {
  require_finite(x, "phi");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double mills_ratio(double x) {
  require_finite(x, "mills_ratio");
  if (x >= kFractionSeam) return 1.0 / hazard_fraction(x, 1.0);
  return 0.5 * std::erfc(x / std::numbers::sqrt2) / phi(x);
}

double upper_tail(double x) {
  require_finite(x, "upper_tail");
  if (x >= kFractionSeam) return phi(x) / hazard_fraction(x, 1.0);
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double psi(double x) {
  require_envelope(x, "psi");
  if (x >= kFractionSeam) {
    return 0.5 * x * x + kHalfLog2Pi + std::log(hazard_fraction(x, 1.0));
  }
  if (x >= 0.0) return -std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
  // Near 1: log1p of the (small) lower tail keeps relative accuracy.
  return -std::log1p(-upper_tail(-x));
}

double rho(double x) {
  require_envelope(x, "rho");
  if (x >= kFractionSeam) return hazard_fraction(x, 1.0);
  if (x >= 0.0) return 1.0 / mills_ratio(x);
  return phi(x) / (1.0 - upper_tail(-x));
}

double r_remainder(double x) {
  require_envelope(x, "r_remainder");
  if (x >= kFractionSeam) return 1.0 / hazard_fraction(x, 2.0);
  return rho(x) - x;
}

NormalEval evaluate(double x) {
  NormalEval e;
  e.x = x;
  e.phi = phi(x);
  e.tail = upper_tail(x);
  e.psi = psi(x);
  e.rho = rho(x);
  e.r = r_remainder(x);
  return e;
}

double inv_tail_asymptotic(double p) {
  if (!(p > 0.0 && p < 0.1)) {
    throw std::domain_error("inv_tail_asymptotic: p must lie in (0, 0.1)");
  }
  return inv_tail_asymptotic_log(-std::log(p));
}

double inv_tail_asymptotic_log(double level) {
  if (!(level > std::log(10.0)) || !std::isfinite(level)) {
    throw std::domain_error("inv_tail_asymptotic_log: level must exceed log 10");
  }
  const double y = std::sqrt(2.0 * level);
  return y - std::log(y) / y;
}

double inverse_psi(double level) {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw std::domain_error("inverse_psi: level must be positive and finite");
  }
  static const double top = psi(kNormalEnvelope);
  if (level > top) {
    throw std::range_error("inverse_psi: level beyond psi(200)");
  }
  if (level < kLn2) {
    // psi(x) = L with x < 0  <=>  psi(-x) = -log(1 - e^{-L}).
    return -inverse_psi(-std::log(-std::expm1(-level)));
  }
  if (level == kLn2) return 0.0;

  // psi(x) > x^2/2 + log 2 for x > 0, so the root is below sqrt(2L).
  double lo = 0.0;
  double hi = std::min(std::sqrt(2.0 * level) + 2.0, kNormalEnvelope);
  double x = level > std::log(10.0) ? inv_tail_asymptotic_log(level) : std::sqrt(2.0 * (level - kLn2));
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double f = psi(x) - level;
    if (f == 0.0) return x;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double next = x - f / rho(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - x);
    x = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x))) break;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) break;
  }
  return x;
}

}  // namespace qcouple
