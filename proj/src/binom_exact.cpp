#include "qcouple/binom_exact.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qcouple {
namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_n(std::int64_t n, std::int64_t ceiling, const char* what) {
  if (n < 1) throw std::domain_error(std::string(what) + ": n must be positive");
  if (n > ceiling) throw std::range_error(std::string(what) + ": n above supported ceiling");
}

void require_k(std::int64_t n, std::int64_t k, const char* what) {
  if (k < 0 || k > n) throw std::domain_error(std::string(what) + ": k outside [0, n]");
}

// log(value / 2^n) for 0 < value <= 2^n, given the complement 2^n - value
// when that is the more accurate route (value > 2^{n-1}).
double log_ratio_pow2(const mpz_class& value, const mpz_class& complement, std::int64_t n) {
  if (complement == 0) return 0.0;
  if (value > complement) {
    long e = 0;
    const double m = mpz_get_d_2exp(&e, complement.get_mpz_t());
    return std::log1p(-std::ldexp(m, static_cast<int>(e - n)));
  }
  long e = 0;
  const double m = mpz_get_d_2exp(&e, value.get_mpz_t());  // value = m 2^e, m in [1/2, 1)
  return std::log(2.0 * m) + static_cast<double>(e - 1 - n) * kLn2;
}

// Exact-integer factorial logs and Stirling corrections for n <= kMaxTableN,
// built once by a running product.
struct FactorialTable {
  std::vector<double> log_fact;
  std::vector<double> lambda;

  FactorialTable() : log_fact(kMaxTableN + 1), lambda(kMaxTableN + 1) {
    mpfr_t lf, ln, tmp, half_log_2pi;
    mpfr_inits2(256, lf, ln, tmp, half_log_2pi, static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(half_log_2pi, MPFR_RNDN);
    mpfr_mul_ui(half_log_2pi, half_log_2pi, 2, MPFR_RNDN);
    mpfr_log(half_log_2pi, half_log_2pi, MPFR_RNDN);
    mpfr_div_ui(half_log_2pi, half_log_2pi, 2, MPFR_RNDN);

    mpz_class fact = 1;
    log_fact[0] = 0.0;
    lambda[0] = 0.0;
    for (std::int64_t n = 1; n <= kMaxTableN; ++n) {
      fact *= static_cast<unsigned long>(n);
      mpfr_set_z(tmp, fact.get_mpz_t(), MPFR_RNDN);
      mpfr_log(lf, tmp, MPFR_RNDN);
      log_fact[n] = mpfr_get_d(lf, MPFR_RNDN);

      // lambda = log n! - (n + 1/2) log n + n - log(2 pi)/2
      mpfr_set_ui(ln, static_cast<unsigned long>(n), MPFR_RNDN);
      mpfr_log(ln, ln, MPFR_RNDN);
      mpfr_set_ui(tmp, static_cast<unsigned long>(2 * n + 1), MPFR_RNDN);
      mpfr_div_ui(tmp, tmp, 2, MPFR_RNDN);
      mpfr_mul(tmp, tmp, ln, MPFR_RNDN);
      mpfr_sub(lf, lf, tmp, MPFR_RNDN);
      mpfr_add_ui(lf, lf, static_cast<unsigned long>(n), MPFR_RNDN);
      mpfr_sub(lf, lf, half_log_2pi, MPFR_RNDN);
      lambda[n] = mpfr_get_d(lf, MPFR_RNDN);
    }
    mpfr_clears(lf, ln, tmp, half_log_2pi, static_cast<mpfr_ptr>(nullptr));
  }
};

const FactorialTable& factorial_table() {
  static const FactorialTable table;
  return table;
}

// 15-point Kronrod rule with its embedded 7-point Gauss rule.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
double gauss_kronrod(const F& f, double a, double b, double abs_tol, int depth) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (std::fabs(kronrod - gauss) <= abs_tol || depth >= 40) return kronrod;
  return gauss_kronrod(f, a, centre, 0.5 * abs_tol, depth + 1) +
         gauss_kronrod(f, centre, b, 0.5 * abs_tol, depth + 1);
}

// log of n!/((k-1)!(n-k)!) int_0^{1/2} t^{k-1} (1-t)^{n-k} dt.
double log_beta_tail(std::int64_t n, std::int64_t k) {
  const double big_k = static_cast<double>(k - 1);
  const double rest = static_cast<double>(n - k);
  auto log_integrand = [&](double t) {
    const double left = big_k == 0.0 ? 0.0 : big_k * std::log(t);
    const double right = rest == 0.0 ? 0.0 : rest * std::log1p(-t);
    return left + right;
  };

  // The integrand peaks at (k-1)/(n-1), clipped to the integration range.
  const double mode = n > 1 ? std::min(0.5, big_k / static_cast<double>(n - 1)) : 0.5;
  const double peak = log_integrand(mode);
  auto shifted = [&](double t) {
    if (t <= 0.0) return big_k == 0.0 ? std::exp(-peak) : 0.0;
    return std::exp(log_integrand(t) - peak);
  };

  // Break the range at multiples of the peak width so the adaptive rule
  // starts from panels that resolve it.
  const double curvature = big_k / (mode * mode) + rest / ((1 - mode) * (1 - mode));
  const double width = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : 0.5;
  std::vector<double> cuts = {0.0, 0.5, mode};
  for (double m : {1.0, 4.0, 16.0, 64.0}) {
    cuts.push_back(mode - m * width);
    cuts.push_back(mode + m * width);
  }
  std::vector<double> edges;
  for (double c : cuts) {
    if (c >= 0.0 && c <= 0.5) edges.push_back(c);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const double scale = std::min(0.5, 3.0 * width);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    integral += gauss_kronrod(shifted, edges[i], edges[i + 1], 1e-15 * scale, 0);
  }
  const auto& table = factorial_table();
  const double log_prefactor = table.log_fact[n] - table.log_fact[k - 1] - table.log_fact[n - k];
  return log_prefactor + peak + std::log(integral);
}

}  // namespace

double ExactTail::probability() const { return std::exp(log_prob); }

double log_big(const mpz_class& value) {
  if (value <= 0) throw std::domain_error("log_big: value must be positive");
  long e = 0;
  const double m = mpz_get_d_2exp(&e, value.get_mpz_t());
  return std::log(2.0 * m) + static_cast<double>(e - 1) * kLn2;
}

ExactTail log_tail_exact(std::int64_t n, std::int64_t k) {
  require_n(n, kMaxExactN, "log_tail_exact");
  require_k(n, k, "log_tail_exact");
  mpz_class total;
  mpz_ui_pow_ui(total.get_mpz_t(), 2, static_cast<unsigned long>(n));

  ExactTail out;
  out.n = n;
  out.k = k;
  mpz_class term = 1;
  mpz_class sum = 0;
  if (k > n / 2) {
    // sum_{j=k}^{n} C(n,j), walking down from C(n,n) = 1
    for (std::int64_t j = n; j >= k; --j) {
      sum += term;
      term *= static_cast<unsigned long>(j);
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(n - j + 1));
    }
    out.numerator = sum;
  } else {
    // 2^n - sum_{j=0}^{k-1} C(n,j), walking up from C(n,0) = 1
    for (std::int64_t j = 0; j < k; ++j) {
      sum += term;
      term *= static_cast<unsigned long>(n - j);
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(j + 1));
    }
    out.numerator = total - sum;
  }
  out.log_prob = log_ratio_pow2(out.numerator, total - out.numerator, n);
  return out;
}

std::vector<ExactTail> log_tail_batch(std::int64_t n) {
  require_n(n, kMaxTableN, "log_tail_batch");
  mpz_class total;
  mpz_ui_pow_ui(total.get_mpz_t(), 2, static_cast<unsigned long>(n));

  std::vector<ExactTail> out(static_cast<std::size_t>(n + 1));
  mpz_class term = 1;
  mpz_class sum = 0;
  for (std::int64_t j = n; j >= 0; --j) {
    sum += term;
    auto& rec = out[static_cast<std::size_t>(j)];
    rec.n = n;
    rec.k = j;
    rec.numerator = sum;
    rec.log_prob = log_ratio_pow2(sum, total - sum, n);
    term *= static_cast<unsigned long>(j);
    if (j > 0) {
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(n - j + 1));
    }
  }
  return out;
}

double log_tail_beta_integral(std::int64_t n, std::int64_t k) {
  require_n(n, kMaxTableN, "log_tail_beta_integral");
  if (k < 1 || k > n) {
    throw std::domain_error("log_tail_beta_integral: k must lie in [1, n]");
  }
  // P{X >= k} = 1 - P{X >= n - k + 1}; integrate the smaller of the two.
  const std::int64_t mirror = n - k + 1;
  if (k >= mirror) return log_beta_tail(n, k);
  return std::log1p(-std::exp(log_beta_tail(n, mirror)));
}

double lambda_stirling_series(std::int64_t n) {
  if (n < 1) throw std::domain_error("lambda_stirling_series: n must be positive");
  // Bernoulli-number coefficients B_{2j} / (2j (2j-1)).
  constexpr std::array<double, 6> coeff = {1.0 / 12.0,    -1.0 / 360.0,      1.0 / 1260.0,
                                           -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0};
  const double inv = 1.0 / static_cast<double>(n);
  const double inv2 = inv * inv;
  double acc = 0.0;
  for (std::size_t j = coeff.size(); j-- > 0;) acc = acc * inv2 + coeff[j];
  return acc * inv;
}

double log_factorial(std::int64_t n) {
  if (n < 0) throw std::domain_error("log_factorial: n must be nonnegative");
  if (n <= kMaxTableN) return factorial_table().log_fact[static_cast<std::size_t>(n)];
  const double x = static_cast<double>(n);
  return (x + 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + lambda_stirling_series(n);
}

StirlingLambda lambda_n(std::int64_t n) {
  if (n < 1) throw std::domain_error("lambda_n: n must be positive");
  if (n > kMaxExactN) throw std::range_error("lambda_n: n above supported ceiling");
  if (n <= kMaxTableN) return {n, factorial_table().lambda[static_cast<std::size_t>(n)]};
  return {n, lambda_stirling_series(n)};
}

}  // namespace qcouple
