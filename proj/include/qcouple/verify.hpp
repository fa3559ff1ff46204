#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcouple/approx.hpp"
#include "qcouple/cutpoints.hpp"

namespace qcouple {

/// Malformed sweep configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class KPolicyKind { all, stride, extremes_plus_grid };

struct KPolicy {
  KPolicyKind kind = KPolicyKind::extremes_plus_grid;
  std::int64_t stride = 1;  // only for KPolicyKind::stride
};

enum class OutputFormat { csv, json };

/// Named tolerances used by the sweep, with their defaults.
std::map<std::string, double> default_tolerances();

struct SweepConfig {
  std::vector<std::int64_t> n_values = {28, 29, 64, 100, 128, 256, 512, 1024, 2048};
  KPolicy k_policy;
  std::map<std::string, double> tolerances = default_tolerances();
  OutputFormat output_format = OutputFormat::csv;
  unsigned parallelism = 0;  // 0 = hardware concurrency

  /// Throws ConfigError on n < 1, n above the cutpoint ceiling, a zero
  /// stride, or a non-positive tolerance.
  void validate() const;
  double tol(const std::string& name) const;
};

/// Flat "key = value" text, '#' comments. Keys: n_values (comma separated),
/// k_policy (all | stride:M | extremes_plus_grid), output_format (csv |
/// json), parallelism, and tol.<name> for any name in default_tolerances().
SweepConfig parse_config(std::istream& in);
SweepConfig load_config(const std::string& path);
std::string describe_config(const SweepConfig& config);

/// k values in [ceil(n/2), n] visited for one n. extremes_plus_grid takes
/// every k for n <= 512 and otherwise a stride grid of at most 512 points
/// plus floor(n/2)+1, floor(n/2)+2, n-3, n-2, n-1, n.
std::vector<std::int64_t> select_k(std::int64_t n, const KPolicy& policy);

/// One inequality evaluated at one (n, k). Aggregate checks spanning
/// several n use n = 0 and k = 0 (or k = B for the per-B cutpoint checks).
struct VerificationRecord {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::string check;
  bool passed = false;
  double slack = 0.0;  // positive = satisfied, in the check's natural units
  std::optional<ApproxBreakdown> payload;
};

struct ConstantsReport {
  double c_thm1 = 0.0;
  double c_thm2 = 0.0;
  Eq5Constants eq5;
  double c_coupling = 0.0;
  double stability_ratio = 1.0;
  // Fits restricted to n <= 256 and n >= 512; empty when a half is absent.
  std::optional<double> c_thm1_low, c_thm1_high;
  std::optional<double> c_thm2_low, c_thm2_high;
  std::optional<double> c_coupling_low, c_coupling_high;
};

struct SweepResult {
  std::vector<VerificationRecord> records;  // sorted by (check, n, k)
  ConstantsReport constants;

  std::size_t failures() const;
};

/// Worst case of the coupling over cell endpoints, for cells k > n/2.
struct CouplingCheck {
  std::int64_t n = 0;
  double max_x_minus_beta = 0.0;  // max_k (k - beta_k), at most 1 by Tusnady
  double fitted_c = 0.0;          // least C with |X - Y| <= C + C |X - n/2|^3 / n^2
};

CouplingCheck coupling_check(const CutpointTable& table);
CouplingCheck coupling_check(std::int64_t n);

/// Checks every inequality over the configured (n, k) grid and fits the
/// existential constants as minimal feasible values. Output is independent
/// of the parallelism setting.
SweepResult run_sweep(const SweepConfig& config);

/// Outcome of one inequality family over a grid of abscissas.
struct GridCheck {
  std::string name;
  std::size_t points = 0;
  std::size_t failures = 0;
  double min_slack = 0.0;
};

/// Hazard-rate monotonicity and the three increment inequalities for psi
/// on x in [a, b] with step, increments delta in {0.01, 0.1, 1, 5}.
std::vector<GridCheck> lemma1_checks(double a, double b, double step, double tolerance = 1e-10);

/// Classical tail bounds (1/x - 1/x^3) phi < tail < phi / x and
/// tail < exp(-x^2/2) / 2 on the positive part of [a, b], in Mills-ratio form.
std::vector<GridCheck> tail_bound_checks(double a, double b, double step);

/// CSV (n,k,check,passed,slack) or JSON {meta, records, constants}; 17
/// significant digits, rows in (check, n, k) order.
void emit_report(std::ostream& out, const SweepResult& result, const SweepConfig& config, OutputFormat format);

}  // namespace qcouple
