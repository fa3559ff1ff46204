#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "qcouple/verify.hpp"

using namespace qcouple;

namespace {

SweepConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string render(const SweepResult& r, const SweepConfig& cfg, OutputFormat f) {
  std::ostringstream out;
  emit_report(out, r, cfg, f);
  return out.str();
}

}  // namespace

TEST(Config, Defaults) {
  SweepConfig cfg;
  EXPECT_EQ(cfg.n_values, (std::vector<std::int64_t>{28, 29, 64, 100, 128, 256, 512, 1024, 2048}));
  EXPECT_EQ(cfg.k_policy.kind, KPolicyKind::extremes_plus_grid);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.tol("tusnady"), 1e-9);
}

TEST(Config, ParsesEveryKey) {
  const auto cfg = parse(
      "# comment\n"
      "n_values = 28, 64\n"
      "k_policy = stride:3   # trailing comment\n"
      "output_format = json\n"
      "parallelism = 2\n"
      "tol.sandwich = 1e-8\n");
  EXPECT_EQ(cfg.n_values, (std::vector<std::int64_t>{28, 64}));
  EXPECT_EQ(cfg.k_policy.kind, KPolicyKind::stride);
  EXPECT_EQ(cfg.k_policy.stride, 3);
  EXPECT_EQ(cfg.output_format, OutputFormat::json);
  EXPECT_EQ(cfg.parallelism, 2u);
  EXPECT_EQ(cfg.tol("sandwich"), 1e-8);
  EXPECT_EQ(parse("k_policy = all\n").k_policy.kind, KPolicyKind::all);
}

TEST(Config, RejectsMalformed) {
  for (const char* bad : {"n_values = 0\n", "n_values = 5000\n", "n_values = abc\n", "n_values =\n",
                          "k_policy = stride:0\n", "k_policy = random\n", "output_format = xml\n",
                          "parallelism = -1\n", "tol.sandwich = -1\n", "tol.nonsense = 1\n", "colour = blue\n",
                          "just a line\n"}) {
    EXPECT_THROW(parse(bad), ConfigError) << bad;
  }
  EXPECT_THROW(load_config("/nonexistent/qcouple.cfg"), ConfigError);
}

TEST(SelectK, Policies) {
  const auto all = select_k(29, {KPolicyKind::all, 1});
  EXPECT_EQ(all.front(), 15);
  EXPECT_EQ(all.back(), 29);
  EXPECT_EQ(all.size(), 15u);
  EXPECT_EQ(select_k(512, {}).size(), 257u);

  const auto grid = select_k(4096, {});
  EXPECT_LE(grid.size(), 512u + 6u);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  for (std::int64_t k : {2049, 2050, 4093, 4094, 4095, 4096}) {
    EXPECT_TRUE(std::binary_search(grid.begin(), grid.end(), k)) << k;
  }
  const auto strided = select_k(100, {KPolicyKind::stride, 10});
  EXPECT_EQ(strided.front(), 50);
  EXPECT_EQ(strided.back(), 100);
}

TEST(Sweep, SmallConfigIsFastAndSorted) {
  const auto cfg = parse("n_values = 28\n");
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = run_sweep(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);
  ASSERT_FALSE(result.records.empty());
  EXPECT_TRUE(std::is_sorted(result.records.begin(), result.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.check, a.n, a.k) < std::tie(b.check, b.n, b.k);
  }));

  std::set<std::string> at_top;
  for (const auto& r : result.records) {
    if (r.n == 28 && r.k == 28) at_top.insert(r.check);
  }
  EXPECT_TRUE(at_top.count("tusnady_lower"));
  EXPECT_TRUE(at_top.count("tusnady_upper"));
  for (const auto& name : at_top) EXPECT_EQ(name.rfind("thm1", 0), std::string::npos) << name;
}

TEST(Sweep, PerItemChecksPassOnSmallN) {
  const auto result = run_sweep(parse("n_values = 28, 29, 64, 100\n"));
  for (const auto& r : result.records) {
    if (r.n == 0) continue;  // aggregates need both sweep halves
    EXPECT_TRUE(r.passed) << r.check << " n=" << r.n << " k=" << r.k << " slack=" << r.slack;
  }
  EXPECT_GT(result.constants.c_thm1, 0.0);
  EXPECT_GT(result.constants.eq5.c1, 0.0);
  EXPECT_GT(result.constants.eq5.c3, 0.0);
}

TEST(Sweep, DeterministicAcrossParallelism) {
  auto cfg = parse("n_values = 28, 29, 100, 513\n");
  cfg.parallelism = 1;
  const auto serial = run_sweep(cfg);
  cfg.parallelism = 4;
  const auto parallel = run_sweep(cfg);
  EXPECT_EQ(render(serial, cfg, OutputFormat::csv), render(parallel, cfg, OutputFormat::csv));
  EXPECT_EQ(render(serial, cfg, OutputFormat::json), render(parallel, cfg, OutputFormat::json));
}

TEST(Sweep, FittedConstantsNeverDecreaseWhenRecordsAreAdded) {
  const auto small = run_sweep(parse("n_values = 28, 64\nk_policy = stride:2\n")).constants;
  const auto more_k = run_sweep(parse("n_values = 28, 64\nk_policy = all\n")).constants;
  const auto more_n = run_sweep(parse("n_values = 28, 64, 100, 256\nk_policy = all\n")).constants;
  for (const auto* pair : {&small, &more_k}) {
    const auto& lo = *pair;
    const auto& hi = pair == &small ? more_k : more_n;
    EXPECT_LE(lo.c_thm1, hi.c_thm1);
    EXPECT_LE(lo.c_thm2, hi.c_thm2);
    EXPECT_LE(lo.eq5.c1, hi.eq5.c1);
    EXPECT_LE(lo.eq5.c3, hi.eq5.c3);
    EXPECT_LE(lo.c_coupling, hi.c_coupling);
  }
}

TEST(Report, CsvShape) {
  const auto cfg = parse("n_values = 28\n");
  const auto text = render(run_sweep(cfg), cfg, OutputFormat::csv);
  EXPECT_EQ(text.rfind("n,k,check,passed,slack\n", 0), 0u);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    ASSERT_EQ(std::count(line.begin(), line.end(), ','), 4) << line;
  }
}

TEST(Report, JsonParsesAndCarriesConstants) {
  const auto cfg = parse("n_values = 28, 512\n");
  const auto result = run_sweep(cfg);
  const auto doc = nlohmann::json::parse(render(result, cfg, OutputFormat::json));
  ASSERT_TRUE(doc.contains("meta"));
  EXPECT_TRUE(doc["meta"]["versions"].contains("gmp"));
  EXPECT_TRUE(doc["meta"]["versions"].contains("mpfr"));
  EXPECT_NE(doc["meta"]["config"].get<std::string>().find("n_values=28,512"), std::string::npos);
  EXPECT_EQ(doc["records"].size(), result.records.size());
  EXPECT_EQ(doc["constants"]["c_thm1"].get<double>(), result.constants.c_thm1);
  EXPECT_EQ(doc["constants"]["c4_eq5"].get<double>(), result.constants.eq5.c4);
  const auto& first = doc["records"][0];
  EXPECT_EQ(first["check"].get<std::string>(), result.records[0].check);
  EXPECT_EQ(first["slack"].get<double>(), result.records[0].slack);
}

TEST(Report, EmptyRecordsRejected) {
  std::ostringstream out;
  EXPECT_THROW(emit_report(out, SweepResult{}, SweepConfig{}, OutputFormat::csv), std::invalid_argument);
}

TEST(Coupling, EndpointWorstCase) {
  for (std::int64_t n : {2, 28, 29, 256, 2048}) {
    const auto c = coupling_check(n);
    EXPECT_LE(c.max_x_minus_beta, 1.0) << n;
    EXPECT_GT(c.fitted_c, 0.0);
    EXPECT_LT(c.fitted_c, 1.0);
  }
  const double c512 = coupling_check(512).fitted_c;
  const double c2048 = coupling_check(2048).fitted_c;
  EXPECT_LT(std::max(c512, c2048) / std::min(c512, c2048), 2.0);
}

TEST(GridChecks, HazardAndTailBounds) {
  for (const auto& g : lemma1_checks(-8.0, 8.0, 0.01)) {
    EXPECT_EQ(g.failures, 0u) << g.name;
    EXPECT_GT(g.points, 0u);
  }
  for (const auto& g : tail_bound_checks(0.01, 40.0, 0.01)) {
    EXPECT_EQ(g.failures, 0u) << g.name;
    EXPECT_GT(g.min_slack, 0.0) << g.name;
  }
}
