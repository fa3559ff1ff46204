#include "qcouple/cutpoints.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qcouple/binom_exact.hpp"
#include "qcouple/normal_tail.hpp"

namespace qcouple {

double epsilon_of(std::int64_t n, std::int64_t k) {
  if (n < 2) throw std::domain_error("epsilon_of: n must be at least 2");
  if (2 * k <= n || k > n) throw std::domain_error("epsilon_of: k must satisfy n/2 < k <= n");
  const auto big_n = static_cast<double>(n - 1);
  return (2.0 * static_cast<double>(k - 1) - big_n) / big_n;
}

CutpointTable CutpointTable::build(std::int64_t n) {
  if (n < 1 || n > kMaxCutpointN) throw std::range_error("build_table: n outside [1, 4096]");
  const auto tails = log_tail_batch(n);
  const double half_n = 0.5 * static_cast<double>(n);
  const double root_n = std::sqrt(static_cast<double>(n));

  CutpointTable table;
  table.n_ = n;
  table.records_.resize(static_cast<std::size_t>(n));
  auto raw_epsilon = [n](std::int64_t k) {
    if (n < 2) return 0.0;
    const auto big_n = static_cast<double>(n - 1);
    return (2.0 * static_cast<double>(k - 1) - big_n) / big_n;
  };

  for (std::int64_t k = n / 2 + 1; k <= n; ++k) {
    auto& rec = table.records_[static_cast<std::size_t>(k - 1)];
    rec.n = n;
    rec.k = k;
    rec.epsilon = raw_epsilon(k);
    rec.log_tail = tails[static_cast<std::size_t>(k)].log_prob;
    rec.z = inverse_psi(-rec.log_tail);
    if (std::fabs(rec.z) > kNormalEnvelope) {
      throw std::logic_error("build_table: cutpoint left the normal accuracy envelope");
    }
    rec.beta = half_n + 0.5 * root_n * rec.z;
  }
  // beta_{n-k+1} = n - beta_k
  for (std::int64_t k = 1; k <= n / 2; ++k) {
    const auto& mirror = table.records_[static_cast<std::size_t>(n - k)];
    auto& rec = table.records_[static_cast<std::size_t>(k - 1)];
    rec.n = n;
    rec.k = k;
    rec.epsilon = raw_epsilon(k);
    rec.log_tail = tails[static_cast<std::size_t>(k)].log_prob;
    rec.z = -mirror.z;
    rec.beta = static_cast<double>(n) - mirror.beta;
  }
  return table;
}

const CutpointRecord& CutpointTable::at(std::int64_t k) const {
  if (k < 1 || k > n_) throw std::out_of_range("CutpointTable::at: k outside [1, n]");
  return records_[static_cast<std::size_t>(k - 1)];
}

double CutpointTable::beta(std::int64_t k) const {
  if (k == 0) return -std::numeric_limits<double>::infinity();
  if (k == n_ + 1) return std::numeric_limits<double>::infinity();
  return at(k).beta;
}

std::int64_t CutpointTable::couple(double y) const {
  if (std::isnan(y)) throw std::domain_error("couple: y is NaN");
  // Number of cutpoints strictly below y; ties go to the lower cell.
  const auto it = std::lower_bound(records_.begin(), records_.end(), y,
                                   [](const CutpointRecord& r, double v) { return r.beta < v; });
  return static_cast<std::int64_t>(it - records_.begin());
}

void CutpointTable::write_csv(std::ostream& out) const {
  out << "n,k,epsilon,z,beta,log_tail\n";
  char buf[160];
  for (const auto& r : records_) {
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g,%.17g,%.17g\n", static_cast<long long>(r.n),
                  static_cast<long long>(r.k), r.epsilon, r.z, r.beta, r.log_tail);
    out << buf;
  }
}

}  // namespace qcouple
