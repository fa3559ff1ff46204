#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qcouple {

/// Largest n for which cutpoint tables are built.
inline constexpr std::int64_t kMaxCutpointN = 4096;

/// One normal threshold of the quantile coupling:
///   P{Bin(n, 1/2) >= k} = P{Y > beta},  Y ~ N(n/2, n/4),
/// with z = 2 (beta - n/2) / sqrt(n) the standardized form.
struct CutpointRecord {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double epsilon = 0.0;  // (2K - N)/N with K = k - 1, N = n - 1; 0 when n = 1
  double z = 0.0;
  double beta = 0.0;
  double log_tail = 0.0;  // log P{Bin(n, 1/2) >= k}
};

/// (2(k-1) - (n-1)) / (n-1). Requires n >= 2 and n/2 < k <= n; lower k are
/// reached through the reflection beta_{n-k+1} = n - beta_k.
double epsilon_of(std::int64_t n, std::int64_t k);

/// Cutpoints beta_1 < ... < beta_n for one n. beta_0 = -inf and
/// beta_{n+1} = +inf are implicit.
class CutpointTable {
 public:
  /// Solves the upper half by inverting psi at the exact tails, and fills
  /// the lower half by reflection. Requires 1 <= n <= kMaxCutpointN.
  static CutpointTable build(std::int64_t n);

  std::int64_t n() const { return n_; }
  const std::vector<CutpointRecord>& records() const { return records_; }
  /// Record for 1 <= k <= n.
  const CutpointRecord& at(std::int64_t k) const;
  /// beta_k for 0 <= k <= n + 1, with the infinite sentinels.
  double beta(std::int64_t k) const;

  /// The k with beta_k < y <= beta_{k+1}.
  std::int64_t couple(double y) const;

  /// CSV with header n,k,epsilon,z,beta,log_tail and 17 significant digits.
  void write_csv(std::ostream& out) const;

 private:
  CutpointTable() = default;
  std::int64_t n_ = 0;
  std::vector<CutpointRecord> records_;
};

inline CutpointTable build_table(std::int64_t n) { return CutpointTable::build(n); }
inline std::int64_t couple(const CutpointTable& table, double y) { return table.couple(y); }

}  // namespace qcouple
