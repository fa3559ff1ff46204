#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace qcouple {

/// Ceiling on n for exact tails and Stirling corrections.
inline constexpr std::int64_t kMaxExactN = std::int64_t{1} << 20;
/// Largest n for which factorials are taken from exact integers (and for
/// which the beta-integral cross-check and batch tables are offered).
inline constexpr std::int64_t kMaxTableN = 4096;

/// P{Bin(n, 1/2) >= k} as the exact integer numerator over 2^n.
struct ExactTail {
  std::int64_t n = 0;
  std::int64_t k = 0;
  mpz_class numerator;   // sum_{j=k}^{n} C(n, j)
  double log_prob = 0.0; // log(numerator) - n log 2

  double probability() const;
};

/// Natural log of a positive big integer, correct to the last bit of a double.
double log_big(const mpz_class& value);

/// Exact upper tail for one (n, k). Sums whichever side of the distribution
/// is shorter, so the cost is O(min(k, n - k)) big-integer steps.
ExactTail log_tail_exact(std::int64_t n, std::int64_t k);

/// All k = 0..n for one n via one pass of the binomial recurrence.
/// Requires n <= kMaxTableN.
std::vector<ExactTail> log_tail_batch(std::int64_t n);

/// log P{Bin(n, 1/2) >= k} from the beta-integral representation
///   n! / ((k-1)! (n-k)!) * int_0^{1/2} t^{k-1} (1-t)^{n-k} dt,
/// by adaptive Gauss-Kronrod quadrature in log-shifted form. When the
/// requested tail exceeds 1/2 the complementary tail is integrated instead
/// and the result returned through log1p. Requires 1 <= k <= n <= 4096.
double log_tail_beta_integral(std::int64_t n, std::int64_t k);

/// log n!, from the exact integer for n <= kMaxTableN and from the Stirling
/// series above.
double log_factorial(std::int64_t n);

/// Stirling correction: n! = sqrt(2 pi) exp((n + 1/2) log n - n + lambda).
struct StirlingLambda {
  std::int64_t n = 0;
  double lambda = 0.0;
};

StirlingLambda lambda_n(std::int64_t n);

/// The asymptotic series 1/(12n) - 1/(360n^3) + ... on its own; exposed so
/// tests can check it against the exact-factorial route.
double lambda_stirling_series(std::int64_t n);

}  // namespace qcouple
