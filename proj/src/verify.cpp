#include "qcouple/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "qcouple/normal_tail.hpp"

namespace qcouple {
namespace {

constexpr std::int64_t kGridCap = 512;
constexpr std::int64_t kLowHalfMax = 256;
constexpr std::int64_t kHighHalfMin = 512;
// Overshoot of beta_{n-B} past n - B per unit n, and its allowed relative error.
constexpr double kOvershootCoeff = 0.088;
constexpr double kOvershootTol = 0.10;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::int64_t parse_int(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects an integer, got '" + text + "'");
  }
}

double parse_real(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects a number, got '" + text + "'");
  }
}

unsigned thread_count(unsigned requested, std::size_t work) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (const char* cap = std::getenv("QCOUPLE_MAX_THREADS")) {
    const long v = std::strtol(cap, nullptr, 10);
    if (v > 0) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, work)));
}

// Runs fn(i) for i in [0, count) over a small pool; results go to caller-owned slots.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

VerificationRecord make_record(std::int64_t n, std::int64_t k, std::string check, double slack, double tol) {
  VerificationRecord r;
  r.n = n;
  r.k = k;
  r.check = std::move(check);
  r.slack = slack;
  r.passed = slack >= -tol;
  return r;
}

// Raw per-(n, k) quantities feeding the constant fits.
struct ItemResult {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::vector<VerificationRecord> records;
  std::optional<ApproxBreakdown> breakdown;
  double excess = 0.0;  // beta_k - k + 1/2
};

struct Item {
  std::size_t table;
  std::int64_t k;
};

ItemResult evaluate_item(const CutpointTable& table, std::int64_t k, const SweepConfig& cfg) {
  const std::int64_t n = table.n();
  const auto& rec = table.at(k);
  ItemResult out;
  out.n = n;
  out.k = k;
  out.excess = rec.beta - static_cast<double>(k) + 0.5;
  auto& recs = out.records;

  const double level = -rec.log_tail;
  recs.push_back(make_record(n, k, "cutpoint_exactness",
                             cfg.tol("exactness") * std::max(1.0, level) - std::fabs(psi(rec.z) - level), 0.0));
  recs.push_back(make_record(n, k, "cutpoint_symmetry",
                             cfg.tol("symmetry") - std::fabs(rec.beta + table.beta(n - k + 1) - static_cast<double>(n)),
                             0.0));

  const auto tus = tusnady_bounds(n, k, rec.beta, cfg.tol("tusnady"));
  recs.push_back(make_record(n, k, "tusnady_lower", tus.slack_lower, cfg.tol("tusnady")));
  recs.push_back(make_record(n, k, "tusnady_upper", tus.slack_upper, cfg.tol("tusnady")));

  if (n >= 28 && 2 * k > n && k <= n - 1) {
    try {
      const auto pieces = laplace_pieces(n, k);
      recs.push_back(make_record(n, k, "laplace_identity",
                                 cfg.tol("laplace") - std::fabs(pieces.h_gap - pieces.h_gap_direct), 0.0));
    } catch (const std::logic_error&) {
      recs.push_back(make_record(n, k, "laplace_identity", -std::numeric_limits<double>::infinity(), 0.0));
      return out;
    }

    const auto bracket = lower_bound_11(n, k);
    recs.push_back(make_record(n, k, "sandwich11_lower", rec.log_tail - bracket.lower, cfg.tol("sandwich")));
    recs.push_back(make_record(n, k, "sandwich11_upper", bracket.upper - rec.log_tail, cfg.tol("sandwich")));
    recs.push_back(make_record(n, k, "eta_at_most_half", 0.5 - bracket.eta, 0.0));
    recs.push_back(make_record(n, k, "kappa_bound",
                               1.0 + 6.0 * bracket.eta * (bracket.eta + rec.epsilon) - bracket.kappa_sq, 0.0));

    if (rec.epsilon > 0.0) {
      out.breakdown = full_breakdown(n, k, rec.log_tail, rec.z);
      if (auto ds = delta_sandwich(n, k, rec.z)) {
        recs.push_back(make_record(n, k, "delta_lower", ds->slack_lower, cfg.tol("delta")));
        recs.push_back(make_record(n, k, "delta_upper", ds->slack_upper, cfg.tol("delta")));
        if (ds->x >= 2.0) recs.push_back(make_record(n, k, "delta_gap", ds->slack_gap, cfg.tol("delta")));
      }
    } else {
      out.breakdown = theorem1_breakdown(n, k, rec.log_tail);
    }
  }
  return out;
}

double required_thm1(const ApproxBreakdown& b) {
  const double nn = static_cast<double>(b.n - 1);
  return std::max(nn * b.r_k, -nn * b.r_k / std::log(nn));
}

std::optional<double> required_thm2(const ApproxBreakdown& b) {
  if (!(b.epsilon > 0.0)) return std::nullopt;
  const double nn = static_cast<double>(b.n - 1);
  const double nt = nn * b.theta_k;
  return std::max(nt / (b.x + std::log(nn)), -nt / (b.x + 1.0));
}

double positive_floor(double v) { return v > 0.0 ? v : std::numeric_limits<double>::min(); }

struct HalfFit {
  std::optional<double> low, high;
  void add(std::int64_t n, double v) {
    if (n <= kLowHalfMax) low = std::max(low.value_or(v), v);
    if (n >= kHighHalfMin) high = std::max(high.value_or(v), v);
  }
  std::optional<double> ratio() const {
    if (!low || !high || *low <= 0.0 || *high <= 0.0) return std::nullopt;
    return std::max(*low / *high, *high / *low);
  }
};

// Shape coefficients for the cubic terms of the cutpoint excess bounds:
// (beta_k - k + 1/2) n^2 / |k - n/2|^3 -> 4 (S(eps) - 1) / eps^2, which
// ranges over [1/3, 4(S(1) - 1)]; take a factor-2 margin either side.
Eq5Constants eq5_shape() {
  Eq5Constants c;
  c.c2 = 0.5 * 4.0 * gamma_eps(0.0);
  const double top = s_eps(1.0);
  c.c4 = 2.0 * 4.0 * (top - 1.0);
  return c;
}

}  // namespace

std::map<std::string, double> default_tolerances() {
  return {
      {"exactness", 1e-9}, {"symmetry", 1e-8}, {"tusnady", 1e-9},  {"sandwich", 1e-9},
      {"delta", 1e-9},     {"laplace", 1e-12}, {"stability", 2.0}, {"eq4_range", 0.10},
      {"center_halving", 1.5},
  };
}

void SweepConfig::validate() const {
  if (n_values.empty()) throw ConfigError("config: n_values is empty");
  for (auto n : n_values) {
    if (n < 1 || n > kMaxCutpointN) {
      throw ConfigError("config: n = " + std::to_string(n) + " outside [1, 4096]");
    }
  }
  if (k_policy.kind == KPolicyKind::stride && k_policy.stride < 1) throw ConfigError("config: stride must be >= 1");
  for (const auto& [name, value] : tolerances) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError("config: tolerance " + name + " must be positive");
  }
}

double SweepConfig::tol(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

SweepConfig parse_config(std::istream& in) {
  SweepConfig cfg;
  const auto known = default_tolerances();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "n_values") {
      cfg.n_values.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.n_values.push_back(parse_int(trim(item), key));
    } else if (key == "k_policy") {
      if (value == "all") {
        cfg.k_policy = {KPolicyKind::all, 1};
      } else if (value == "extremes_plus_grid") {
        cfg.k_policy = {KPolicyKind::extremes_plus_grid, 1};
      } else if (value.rfind("stride:", 0) == 0) {
        cfg.k_policy = {KPolicyKind::stride, parse_int(value.substr(7), key)};
      } else {
        throw ConfigError("config: unknown k_policy '" + value + "'");
      }
    } else if (key == "output_format") {
      if (value == "csv") {
        cfg.output_format = OutputFormat::csv;
      } else if (value == "json") {
        cfg.output_format = OutputFormat::json;
      } else {
        throw ConfigError("config: unknown output_format '" + value + "'");
      }
    } else if (key == "parallelism") {
      const auto p = parse_int(value, key);
      if (p < 0) throw ConfigError("config: parallelism must be nonnegative");
      cfg.parallelism = static_cast<unsigned>(p);
    } else if (key.rfind("tol.", 0) == 0) {
      const std::string name = key.substr(4);
      if (!known.count(name)) throw ConfigError("config: unknown tolerance '" + name + "'");
      cfg.tolerances[name] = parse_real(value, key);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

std::string describe_config(const SweepConfig& cfg) {
  std::ostringstream os;
  os << "n_values=";
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) os << (i ? "," : "") << cfg.n_values[i];
  os << ";k_policy=";
  switch (cfg.k_policy.kind) {
    case KPolicyKind::all:
      os << "all";
      break;
    case KPolicyKind::stride:
      os << "stride:" << cfg.k_policy.stride;
      break;
    case KPolicyKind::extremes_plus_grid:
      os << "extremes_plus_grid";
      break;
  }
  for (const auto& [name, value] : cfg.tolerances) os << ";tol." << name << "=" << value;
  return os.str();
}

std::vector<std::int64_t> select_k(std::int64_t n, const KPolicy& policy) {
  const std::int64_t first = (n + 1) / 2;
  std::vector<std::int64_t> ks;
  std::int64_t stride = 1;
  if (policy.kind == KPolicyKind::stride) {
    stride = policy.stride;
  } else if (policy.kind == KPolicyKind::extremes_plus_grid && n > kGridCap) {
    const std::int64_t span = n - first + 1;
    stride = (span + kGridCap - 1) / kGridCap;
  }
  for (std::int64_t k = first; k <= n; k += stride) ks.push_back(k);
  if (policy.kind == KPolicyKind::extremes_plus_grid) {
    for (std::int64_t k : {n / 2 + 1, n / 2 + 2, n - 3, n - 2, n - 1, n}) {
      if (k >= first && k <= n) ks.push_back(k);
    }
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.passed; }));
}

CouplingCheck coupling_check(const CutpointTable& table) {
  const std::int64_t n = table.n();
  const auto nd = static_cast<double>(n);
  CouplingCheck out;
  out.n = n;
  out.max_x_minus_beta = -std::numeric_limits<double>::infinity();
  for (std::int64_t k = n / 2 + 1; k <= n; ++k) {
    const double offset = std::fabs(static_cast<double>(k) - 0.5 * nd);
    const double weight = 1.0 + offset * offset * offset / (nd * nd);
    const double below = static_cast<double>(k) - table.beta(k);
    out.max_x_minus_beta = std::max(out.max_x_minus_beta, below);
    double worst = std::fabs(below);
    // the top cell (beta_n, inf) has no finite right endpoint
    if (k < n) worst = std::max(worst, std::fabs(table.beta(k + 1) - static_cast<double>(k)));
    out.fitted_c = std::max(out.fitted_c, worst / weight);
  }
  return out;
}

CouplingCheck coupling_check(std::int64_t n) { return coupling_check(CutpointTable::build(n)); }

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<std::int64_t> ns = cfg.n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<std::optional<CutpointTable>> tables(ns.size());
  parallel_for(ns.size(), thread_count(cfg.parallelism, ns.size()),
               [&](std::size_t i) { tables[i] = CutpointTable::build(ns[i]); });

  std::vector<Item> items;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    for (auto k : select_k(ns[i], cfg.k_policy)) items.push_back({i, k});
  }
  std::vector<ItemResult> results(items.size());
  parallel_for(items.size(), thread_count(cfg.parallelism, items.size()),
               [&](std::size_t i) { results[i] = evaluate_item(*tables[items[i].table], items[i].k, cfg); });

  SweepResult out;
  auto& records = out.records;
  auto& c = out.constants;
  for (auto& r : results) {
    for (auto& rec : r.records) records.push_back(std::move(rec));
  }

  // Expansion constants: minimal feasible values, then the half fits.
  HalfFit thm1_half, thm2_half, coupling_half;
  for (const auto& r : results) {
    if (!r.breakdown) continue;
    const double need1 = required_thm1(*r.breakdown);
    c.c_thm1 = std::max(c.c_thm1, need1);
    thm1_half.add(r.n, need1);
    if (auto need2 = required_thm2(*r.breakdown)) {
      c.c_thm2 = std::max(c.c_thm2, *need2);
      thm2_half.add(r.n, *need2);
    }
  }
  c.c_thm1 = positive_floor(c.c_thm1);
  c.c_thm2 = positive_floor(c.c_thm2);
  for (const auto& r : results) {
    if (!r.breakdown) continue;
    const auto& b = *r.breakdown;
    const double nn = static_cast<double>(b.n - 1);
    auto rec_up = make_record(b.n, b.k, "thm1_upper", c.c_thm1 - nn * b.r_k, 0.0);
    auto rec_lo = make_record(b.n, b.k, "thm1_lower", c.c_thm1 * std::log(nn) + nn * b.r_k, 0.0);
    rec_up.payload = b;
    records.push_back(std::move(rec_up));
    records.push_back(std::move(rec_lo));
    if (b.epsilon > 0.0) {
      const double nt = nn * b.theta_k;
      auto t_up = make_record(b.n, b.k, "thm2_upper", c.c_thm2 * (b.x + std::log(nn)) - nt, 0.0);
      auto t_lo = make_record(b.n, b.k, "thm2_lower", nt + c.c_thm2 * (b.x + 1.0), 0.0);
      t_up.payload = b;
      records.push_back(std::move(t_up));
      records.push_back(std::move(t_lo));
    }
  }

  // Cutpoint excess bounds: fixed cubic shape, minimal C1 and C3.
  c.eq5 = eq5_shape();
  double need_c1 = 0.0;
  double need_c3 = 0.0;
  bool eq5_feasible = true;
  for (const auto& r : results) {
    const auto nd = static_cast<double>(r.n);
    const double offset = std::fabs(static_cast<double>(r.k) - 0.5 * nd);
    const double cubic = offset * offset * offset / (nd * nd);
    need_c1 = std::max(need_c1, (c.eq5.c2 * cubic - r.excess) * std::sqrt(nd));
    const double log_scale = std::log(nd) / std::sqrt(nd);
    const double over = r.excess - c.eq5.c4 * cubic;
    if (log_scale > 0.0) {
      need_c3 = std::max(need_c3, over / log_scale);
    } else if (over > 0.0) {
      eq5_feasible = false;  // n = 1: no C3 can absorb a positive excess
    }
  }
  c.eq5.c1 = positive_floor(need_c1);
  c.eq5.c3 = positive_floor(need_c3);
  double eq5_min_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    const auto& table = *tables[static_cast<std::size_t>(std::lower_bound(ns.begin(), ns.end(), r.n) - ns.begin())];
    const auto chk = eq5_bounds(r.n, r.k, table.beta(r.k), c.eq5);
    records.push_back(make_record(r.n, r.k, "eq5_lower", chk.slack_lower, 0.0));
    records.push_back(make_record(r.n, r.k, "eq5_upper", chk.slack_upper, 0.0));
    eq5_min_slack = std::min({eq5_min_slack, chk.slack_lower, chk.slack_upper});
  }
  records.push_back(make_record(0, 0, "eq5_feasible", eq5_feasible ? eq5_min_slack : -1.0, 0.0));

  // Coupling, Tusnady excess, and the extreme cutpoints.
  std::map<std::int64_t, double> center_excess;
  std::map<std::int64_t, std::map<std::int64_t, double>> extreme_residual;  // B -> n -> residual
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& table = *tables[i];
    const std::int64_t n = ns[i];
    const auto nd = static_cast<double>(n);
    const auto cc = coupling_check(table);
    c.c_coupling = std::max(c.c_coupling, cc.fitted_c);
    coupling_half.add(n, cc.fitted_c);
    records.push_back(make_record(n, 0, "coupling_max_x_minus_beta", 1.0 - cc.max_x_minus_beta, 0.0));

    if (n >= kHighHalfMin) {
      const double beta_top = table.beta(n - 1);
      const auto tus = tusnady_bounds(n, n - 1, beta_top);
      records.push_back(
          make_record(n, n - 1, "tusnady_excess_coeff", tus.slack_upper / nd - (1.0 - kOvershootTol) * kOvershootCoeff, 0.0));
      const double overshoot = (beta_top - static_cast<double>(n - 1)) / nd;
      records.push_back(make_record(n, n - 1, "overshoot_coeff",
                                    kOvershootTol * kOvershootCoeff - std::fabs(overshoot - kOvershootCoeff), 0.0));
    }

    double worst = 0.0;
    const double window = std::pow(nd, 0.6);
    for (std::int64_t k = (n + 1) / 2; k <= n; ++k) {
      if (std::fabs(static_cast<double>(k) - 0.5 * nd) <= window) {
        worst = std::max(worst, std::fabs(table.beta(k) - static_cast<double>(k) + 0.5));
      }
    }
    center_excess[n] = worst;

    if (n >= 64) {
      for (std::int64_t b = 1; b <= 3; ++b) extreme_residual[b][n] = table.beta(n - b) - eq4_extreme(n, b);
    }
  }
  c.c_coupling = positive_floor(c.c_coupling);

  for (const auto& [b, by_n] : extreme_residual) {
    if (by_n.size() < 2) continue;
    auto range_of = [](auto first, auto last) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (auto it = first; it != last; ++it) {
        lo = std::min(lo, it->second);
        hi = std::max(hi, it->second);
      }
      return hi - lo;
    };
    const double all = range_of(by_n.begin(), by_n.end());
    const std::int64_t top_n = by_n.rbegin()->first;
    const double top = range_of(by_n.lower_bound(top_n / 2), by_n.end());
    records.push_back(make_record(0, b, "eq4_range", (1.0 + cfg.tol("eq4_range")) * all - top, 0.0));
  }

  if (center_excess.count(256) && center_excess.count(2048)) {
    const double allowed = cfg.tol("center_halving") * 0.5 * center_excess[256];
    records.push_back(make_record(0, 0, "center_halving", allowed - center_excess[2048], 0.0));
  }

  // Stability of the fitted constants between the two halves of the sweep.
  c.c_thm1_low = thm1_half.low;
  c.c_thm1_high = thm1_half.high;
  c.c_thm2_low = thm2_half.low;
  c.c_thm2_high = thm2_half.high;
  c.c_coupling_low = coupling_half.low;
  c.c_coupling_high = coupling_half.high;
  const double limit = cfg.tol("stability");
  c.stability_ratio = 1.0;
  for (const auto& [name, half] : {std::pair{"thm1_stability", &thm1_half}, std::pair{"thm2_stability", &thm2_half},
                                   std::pair{"coupling_stability", &coupling_half}}) {
    if (auto ratio = half->ratio()) {
      c.stability_ratio = std::max(c.stability_ratio, *ratio);
      records.push_back(make_record(0, 0, name, limit - *ratio, 0.0));
    }
  }

  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    if (a.check != b.check) return a.check < b.check;
    if (a.n != b.n) return a.n < b.n;
    return a.k < b.k;
  });
  return out;
}

}  // namespace qcouple

namespace qcouple {
namespace {

std::vector<double> grid(double a, double b, double step) {
  if (!(step > 0.0) || !(b >= a)) throw std::domain_error("grid: need a <= b and step > 0");
  std::vector<double> xs;
  const auto count = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9));
  for (std::int64_t i = 0; i <= count; ++i) xs.push_back(a + static_cast<double>(i) * step);
  return xs;
}

struct Tally {
  GridCheck check;
  explicit Tally(std::string name) {
    check.name = std::move(name);
    check.min_slack = std::numeric_limits<double>::infinity();
  }
  void add(double slack, double tolerance) {
    ++check.points;
    check.min_slack = std::min(check.min_slack, slack);
    if (!(slack >= -tolerance)) ++check.failures;
  }
  void add_strict(double slack) {
    ++check.points;
    check.min_slack = std::min(check.min_slack, slack);
    if (!(slack > 0.0)) ++check.failures;
  }
};

}  // namespace

std::vector<GridCheck> lemma1_checks(double a, double b, double step, double tolerance) {
  const auto xs = grid(a, b, step);
  Tally rho_up("rho_increasing"), r_down("r_decreasing"), pos("r_positive");
  Tally inc_i("increment_i"), inc_ii("increment_ii"), inc_iii("increment_iii");
  double prev_rho = 0.0;
  double prev_r = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double rho_x = rho(x);
    const double r_x = r_remainder(x);
    pos.add_strict(r_x);
    if (i > 0) {
      rho_up.add_strict(rho_x - prev_rho);
      r_down.add_strict(prev_r - r_x);
    }
    prev_rho = rho_x;
    prev_r = r_x;
    const double psi_x = psi(x);
    for (double d : {0.01, 0.1, 1.0, 5.0}) {
      const double y = x + d;
      const double inc = psi(y) - psi_x;
      inc_i.add(std::min(inc - d * rho_x, d * rho(y) - inc), tolerance);
      const double shifted = inc - 0.5 * y * y + 0.5 * x * x;
      inc_ii.add(std::min(shifted - d * r_remainder(y), d * r_x - shifted), tolerance);
      inc_iii.add(std::min(inc - x * d - 0.5 * d * d, rho_x * d + 0.5 * d * d - inc), tolerance);
    }
  }
  return {rho_up.check, r_down.check, pos.check, inc_i.check, inc_ii.check, inc_iii.check};
}

std::vector<GridCheck> tail_bound_checks(double a, double b, double step) {
  Tally lower("mills_lower"), upper("mills_upper"), gauss("half_gaussian");
  for (double x : grid(a, b, step)) {
    if (!(x > 0.0)) continue;
    const double m = mills_ratio(x);
    lower.add_strict(m - (1.0 / x - 1.0 / (x * x * x)));
    upper.add_strict(1.0 / x - m);
    // tail < exp(-x^2/2)/2  <=>  mills < sqrt(2 pi)/2
    gauss.add_strict(1.2533141373155002512 - m);
  }
  return {lower.check, upper.check, gauss.check};
}

}  // namespace qcouple
