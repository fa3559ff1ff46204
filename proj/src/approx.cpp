#include "qcouple/approx.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qcouple/cutpoints.hpp"
#include "qcouple/normal_tail.hpp"

namespace qcouple {
namespace {

constexpr double kGammaSeam = 0.8;

void require_unit_epsilon(double epsilon, const char* what) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::domain_error(std::string(what) + ": epsilon outside [0, 1]");
  }
}

void require_interior(std::int64_t n, std::int64_t k, std::int64_t min_n, const char* what) {
  if (n < min_n) {
    throw std::domain_error(std::string(what) + ": n below " + std::to_string(min_n));
  }
  if (2 * k <= n || k > n - 1) {
    throw std::domain_error(std::string(what) + ": k must satisfy n/2 < k <= n - 1");
  }
}

double lambda_of(std::int64_t m) { return lambda_n(m).lambda; }

}  // namespace

double gamma_eps_series(double epsilon) {
  require_unit_epsilon(epsilon, "gamma_eps_series");
  const double e2 = epsilon * epsilon;
  double power = 1.0;
  double sum = 0.0;
  for (int r = 0; r < 10'000'000; ++r) {
    const double term = power / ((2.0 * r + 3.0) * (2.0 * r + 4.0));
    sum += term;
    if (term < 1e-17) break;
    power *= e2;
  }
  return sum;
}

double gamma_eps_closed(double epsilon) {
  require_unit_epsilon(epsilon, "gamma_eps_closed");
  if (epsilon == 0.0) throw std::domain_error("gamma_eps_closed: removable singularity at 0");
  const double e2 = epsilon * epsilon;
  const double up = (1.0 + epsilon) * std::log1p(epsilon);
  // (1 - e) log(1 - e) -> 0 as e -> 1
  const double down = epsilon == 1.0 ? 0.0 : (1.0 - epsilon) * std::log1p(-epsilon);
  return (up + down - e2) / (2.0 * e2 * e2);
}

double gamma_eps(double epsilon) {
  require_unit_epsilon(epsilon, "gamma_eps");
  return epsilon < kGammaSeam ? gamma_eps_series(epsilon) : gamma_eps_closed(epsilon);
}

double s_eps(double epsilon) { return std::sqrt(1.0 + 2.0 * epsilon * epsilon * gamma_eps(epsilon)); }

double h_aux(double s, double epsilon) {
  require_unit_epsilon(epsilon, "h_aux");
  if (!(s >= 0.0 && s < 1.0)) throw std::domain_error("h_aux: s outside [0, 1)");
  return 0.5 * ((1.0 + epsilon) * std::log1p(-s) + (1.0 - epsilon) * std::log1p(s));
}

double h_third(double s, double epsilon) {
  require_unit_epsilon(epsilon, "h_third");
  if (!(s >= 0.0 && s < 1.0)) throw std::domain_error("h_third: s outside [0, 1)");
  const double up = 1.0 + s;
  const double down = 1.0 - s;
  return (1.0 - epsilon) / (up * up * up) - (1.0 + epsilon) / (down * down * down);
}

LaplacePieces laplace_pieces(std::int64_t n, std::int64_t k) {
  require_interior(n, k, 3, "laplace_pieces");
  LaplacePieces out;
  const double eps = epsilon_of(n, k);
  const std::int64_t big_k = k - 1;
  const std::int64_t big_n = n - 1;
  const double g = gamma_eps(eps);
  out.epsilon = eps;
  out.h_gap = -0.5 * eps * eps - eps * eps * eps * eps * g;

  const double t_mode = static_cast<double>(big_k) / static_cast<double>(big_n);
  auto big_h = [eps](double t) { return 0.5 * ((1.0 + eps) * std::log(t) + (1.0 - eps) * std::log1p(-t)); };
  out.h_gap_direct = big_h(0.5) - big_h(t_mode);
  if (std::fabs(out.h_gap_direct - out.h_gap) > 1e-12) {
    throw std::logic_error("laplace_pieces: H(1/2) - H(K/N) identity violated");
  }

  out.lambda_sum = lambda_of(big_n) - lambda_of(big_k) - lambda_of(big_n - big_k);
  const auto nn = static_cast<double>(big_n);
  out.delta = std::log1p(1.0 / nn) + out.lambda_sum - 0.5 * std::log1p(-eps * eps) -
              nn * eps * eps * eps * eps * g;
  return out;
}

ApproxBreakdown theorem1_breakdown(std::int64_t n, std::int64_t k, const ExactTail& exact) {
  if (exact.n != n || exact.k != k) {
    throw std::invalid_argument("theorem1_breakdown: exact tail is for a different (n, k)");
  }
  return theorem1_breakdown(n, k, exact.log_prob);
}

ApproxBreakdown theorem1_breakdown(std::int64_t n, std::int64_t k, double log_tail) {
  require_interior(n, k, 28, "theorem1_breakdown");
  ApproxBreakdown b;
  b.n = n;
  b.k = k;
  const auto pieces = laplace_pieces(n, k);
  const auto nn = static_cast<double>(n - 1);
  b.epsilon = pieces.epsilon;
  b.x = b.epsilon * std::sqrt(nn);
  b.gamma = gamma_eps(b.epsilon);
  b.s_eps = s_eps(b.epsilon);
  b.lambda_sum = pieces.lambda_sum;
  b.delta = pieces.delta;
  const double e4 = b.epsilon * b.epsilon * b.epsilon * b.epsilon;
  b.an_main = -nn * e4 * b.gamma - 0.5 * std::log1p(-b.epsilon * b.epsilon) - lambda_of(n - k);
  b.an_exact = log_tail + psi(b.x);
  b.r_k = b.an_exact - b.an_main;
  b.ell_n = std::log(nn) / nn;
  return b;
}

double theorem2_w(std::int64_t n, std::int64_t k) {
  require_interior(n, k, 28, "theorem2_w");
  const double eps = epsilon_of(n, k);
  if (eps <= 0.0) throw std::domain_error("theorem2_w: epsilon must be positive");
  const double xs = eps * std::sqrt(static_cast<double>(n - 1)) * s_eps(eps);
  return xs + (std::log1p(-eps * eps) + 2.0 * lambda_of(n - k)) / (2.0 * xs);
}

double theorem2_theta(std::int64_t n, std::int64_t k, double z) { return z - theorem2_w(n, k); }

TailBracket lower_bound_11(std::int64_t n, std::int64_t k) {
  require_interior(n, k, 28, "lower_bound_11");
  const auto pieces = laplace_pieces(n, k);
  const double eps = pieces.epsilon;
  const auto nn = static_cast<double>(n - 1);
  const double x = eps * std::sqrt(nn);

  TailBracket out;
  out.ell_n = std::log(nn) / nn;
  // positive root of eta^2/2 + eps eta = ell, written without cancellation
  out.eta = 2.0 * out.ell_n / (eps + std::sqrt(eps * eps + 2.0 * out.ell_n));
  out.eta_at_most_half = out.eta <= 0.5;
  out.kappa_sq = 1.0 - out.eta * h_third(out.eta, eps) / 3.0;
  out.kappa_within_bound = out.eta_at_most_half && out.kappa_sq <= 1.0 + 6.0 * out.eta * (out.eta + eps);

  const double psi_x = psi(x);
  out.upper = pieces.delta - psi_x;
  const double exponent = -nn * eps * out.eta - 0.5 * nn * out.kappa_sq * out.eta * out.eta;
  out.lower = pieces.delta - 0.5 * std::log(out.kappa_sq) - psi_x + std::log1p(-std::exp(exponent));
  return out;
}

ApproxBreakdown full_breakdown(std::int64_t n, std::int64_t k, double log_tail, double z) {
  auto b = theorem1_breakdown(n, k, log_tail);
  b.w_k = theorem2_w(n, k);
  b.theta_k = z - b.w_k;
  const auto bracket = lower_bound_11(n, k);
  b.eta = bracket.eta;
  b.kappa_sq = bracket.kappa_sq;
  return b;
}

std::optional<DeltaSandwich> delta_sandwich(std::int64_t n, std::int64_t k, double z) {
  require_interior(n, k, 28, "delta_sandwich");
  const double eps = epsilon_of(n, k);
  const double x = eps * std::sqrt(static_cast<double>(n - 1));
  if (x < kSmallEpsilonThreshold) return std::nullopt;
  const double beta = psi(z) - psi(x);
  if (!(beta > 0.0)) return std::nullopt;

  DeltaSandwich out;
  out.x = x;
  out.beta_shift = beta;
  const double rho_x = rho(x);
  // delta = sqrt(t^2 + 2 beta) - t, in a cancellation-free form
  out.delta1 = 2.0 * beta / (std::sqrt(x * x + 2.0 * beta) + x);
  out.delta2 = 2.0 * beta / (std::sqrt(rho_x * rho_x + 2.0 * beta) + rho_x);

  const double q1 = out.delta1 * x + 0.5 * out.delta1 * out.delta1;
  const double q2 = out.delta2 * rho_x + 0.5 * out.delta2 * out.delta2;
  if (std::fabs(q1 - beta) > 1e-10 * std::max(1.0, beta) || std::fabs(q2 - beta) > 1e-10 * std::max(1.0, beta)) {
    throw std::logic_error("delta_sandwich: quadratic roots lost accuracy");
  }

  out.slack_lower = z - (x + out.delta2);
  out.slack_upper = (x + out.delta1) - z;
  out.gap_bound = 4.0 * beta / (x * x * x);
  out.slack_gap = out.gap_bound - out.slack_upper;
  return out;
}

TusnadyCheck tusnady_bounds(std::int64_t n, std::int64_t k, double beta_k, double tolerance) {
  if (2 * k < n || k > n) throw std::domain_error("tusnady_bounds: k must satisfy n/2 <= k <= n");
  const auto nd = static_cast<double>(n);
  TusnadyCheck out;
  out.slack_lower = beta_k - static_cast<double>(k - 1);
  out.slack_upper = 1.5 * nd - std::sqrt(2.0 * nd * static_cast<double>(n - k)) - beta_k;
  out.holds_lower = out.slack_lower >= -tolerance;
  out.holds_upper = out.slack_upper >= -tolerance;
  return out;
}

double eq4_extreme(std::int64_t n, std::int64_t b) {
  if (b < 1 || 2 * (n - b) <= n) throw std::domain_error("eq4_extreme: need B >= 1 and n - B > n/2");
  const double c = s_eps(1.0);
  const auto nd = static_cast<double>(n);
  return 0.5 * (1.0 + c) * nd - (1.0 + 2.0 * static_cast<double>(b)) * std::log(nd) / (4.0 * c);
}

Eq5Check eq5_bounds(std::int64_t n, std::int64_t k, double beta_k, const Eq5Constants& c, double tolerance) {
  if (!(c.c1 > 0.0 && c.c2 > 0.0 && c.c3 > 0.0 && c.c4 > 0.0)) {
    throw std::domain_error("eq5_bounds: constants must be positive");
  }
  if (2 * k < n || k > n) throw std::domain_error("eq5_bounds: k must satisfy n/2 <= k <= n");
  const auto nd = static_cast<double>(n);
  const double offset = std::fabs(static_cast<double>(k) - 0.5 * nd);
  const double cubic = offset * offset * offset / (nd * nd);
  Eq5Check out;
  out.excess = beta_k - static_cast<double>(k) + 0.5;
  out.lower = -c.c1 / std::sqrt(nd) + c.c2 * cubic;
  out.upper = c.c3 * std::log(nd) / std::sqrt(nd) + c.c4 * cubic;
  out.slack_lower = out.excess - out.lower;
  out.slack_upper = out.upper - out.excess;
  out.holds = out.slack_lower >= -tolerance && out.slack_upper >= -tolerance;
  return out;
}

}  // namespace qcouple
