#pragma once

#include <cstdint>
#include <optional>

#include "qcouple/binom_exact.hpp"

// Large-deviation expansion of symmetric Binomial tails and of the normal
// cutpoints, with the explicit upper/lower tail bounds it rests on.
//
// Throughout, for n/2 < k <= n - 1:
//   K = k - 1,  N = n - 1,  eps = (2K - N)/N,  x = eps sqrt(N).

namespace qcouple {

/// eps-boundary between the small-eps (tail-ratio) regime and the quadratic
/// sandwich regime: x = eps sqrt(N) below this uses no sandwich.
inline constexpr double kSmallEpsilonThreshold = 3.0;

/// [(1+e)log(1+e) + (1-e)log(1-e) - e^2] / (2 e^4), increasing on [0, 1]
/// from 1/12 to log 2 - 1/2. Series below eps = 0.8, closed form above.
double gamma_eps(double epsilon);
/// sum_r e^{2r} / ((2r+3)(2r+4)); converges slowly near 1.
double gamma_eps_series(double epsilon);
/// The closed form; loses digits to cancellation for small eps.
double gamma_eps_closed(double epsilon);

/// sqrt(1 + 2 eps^2 gamma(eps)).
double s_eps(double epsilon);

/// h(s) = H((1-s)/2) - H(1/2) with 2H(t) = (1+e)log t + (1-e)log(1-t).
double h_aux(double s, double epsilon);
/// h'''(s) = (1-e)/(1+s)^3 - (1+e)/(1-s)^3.
double h_third(double s, double epsilon);

struct LaplacePieces {
  double epsilon = 0.0;
  double h_gap = 0.0;         // H(1/2) - H(K/N) = -eps^2/2 - eps^4 gamma(eps)
  double h_gap_direct = 0.0;  // same quantity from H itself
  double lambda_sum = 0.0;    // lambda_N - lambda_K - lambda_{N-K}
  double delta = 0.0;         // log(1 + 1/N) + Lambda - log(1-eps^2)/2 - N eps^4 gamma
};

/// Requires n >= 3 and n/2 < k <= n - 1. Throws std::logic_error if the two
/// evaluations of h_gap disagree by more than 1e-12.
LaplacePieces laplace_pieces(std::int64_t n, std::int64_t k);

/// All expansion terms for one (n, k).
struct ApproxBreakdown {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double epsilon = 0.0;
  double x = 0.0;  // eps sqrt(N)
  double gamma = 0.0;
  double s_eps = 0.0;
  double lambda_sum = 0.0;
  double delta = 0.0;
  double an_main = 0.0;   // -N eps^4 gamma - log(1-eps^2)/2 - lambda_{n-k}
  double an_exact = 0.0;  // log tail + psi(x)
  double r_k = 0.0;       // an_exact - an_main
  double w_k = 0.0;
  double theta_k = 0.0;   // z_k - w_k
  double ell_n = 0.0;     // log(N)/N
  double eta = 0.0;
  double kappa_sq = 0.0;
};

/// Tail expansion P{X >= k} = Phi-bar(x) exp(A_n). Requires n >= 28 and
/// n/2 < k <= n - 1; the residual is r_k. Fills the tail-expansion subset of
/// the breakdown (no w_k, theta_k, eta, kappa).
ApproxBreakdown theorem1_breakdown(std::int64_t n, std::int64_t k, const ExactTail& exact);
ApproxBreakdown theorem1_breakdown(std::int64_t n, std::int64_t k, double log_tail);

/// Cutpoint expansion main term
///   x S + [log(1 - eps^2) + 2 lambda_{n-k}] / (2 x S).
double theorem2_w(std::int64_t n, std::int64_t k);
double theorem2_theta(std::int64_t n, std::int64_t k, double z);

/// Every field of the breakdown, given the exact log tail and its cutpoint.
ApproxBreakdown full_breakdown(std::int64_t n, std::int64_t k, double log_tail, double z);

/// Log-domain bracket on P{X >= k}:
///   upper = Delta - psi(x)
///   lower = Delta - log(kappa) - psi(x) + log(1 - exp(-N eps eta - N kappa^2 eta^2 / 2))
/// with eta the positive root of eta^2/2 + eta eps = log(N)/N.
struct TailBracket {
  double ell_n = 0.0;
  double eta = 0.0;
  double kappa_sq = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool eta_at_most_half = false;
  bool kappa_within_bound = false;  // kappa^2 <= 1 + 6 eta (eta + eps)
};

/// Requires n >= 28 and n/2 < k <= n - 1.
TailBracket lower_bound_11(std::int64_t n, std::int64_t k);

/// Quadratic sandwich x + delta2 <= z_k <= x + delta1, where
/// beta = psi(z_k) - psi(x), delta1 x + delta1^2/2 = beta and
/// delta2 rho(x) + delta2^2/2 = beta.
struct DeltaSandwich {
  double x = 0.0;
  double beta_shift = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double slack_lower = 0.0;  // z - (x + delta2)
  double slack_upper = 0.0;  // (x + delta1) - z
  double gap_bound = 0.0;    // 4 beta / x^3
  double slack_gap = 0.0;    // gap_bound - slack_upper
};

/// Empty in the small-eps regime (x < kSmallEpsilonThreshold) or when
/// beta <= 0. Requires n >= 28 and n/2 < k <= n - 1.
std::optional<DeltaSandwich> delta_sandwich(std::int64_t n, std::int64_t k, double z);

/// k - 1 <= beta_k <= 3n/2 - sqrt(2n(n - k)) for n/2 <= k <= n.
struct TusnadyCheck {
  bool holds_lower = false;
  bool holds_upper = false;
  double slack_lower = 0.0;
  double slack_upper = 0.0;
};

TusnadyCheck tusnady_bounds(std::int64_t n, std::int64_t k, double beta_k, double tolerance = 1e-9);

/// (1 + c) n / 2 - (1 + 2B) log(n) / (4c) with c = S(1) = sqrt(2 log 2):
/// the large-n form of beta_{n-B}.
double eq4_extreme(std::int64_t n, std::int64_t b);

/// Positive constants for
///   -C1/sqrt(n) + C2 |k-n/2|^3/n^2 <= beta_k - k + 1/2 <= C3 log(n)/sqrt(n) + C4 |k-n/2|^3/n^2.
struct Eq5Constants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

struct Eq5Check {
  double excess = 0.0;  // beta_k - k + 1/2
  double lower = 0.0;
  double upper = 0.0;
  double slack_lower = 0.0;
  double slack_upper = 0.0;
  bool holds = false;
};

Eq5Check eq5_bounds(std::int64_t n, std::int64_t k, double beta_k, const Eq5Constants& constants,
                    double tolerance = 0.0);

}  // namespace qcouple
