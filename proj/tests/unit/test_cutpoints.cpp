#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fixture_table.hpp"
#include "qcouple/binom_exact.hpp"
#include "qcouple/cutpoints.hpp"
#include "qcouple/normal_tail.hpp"

using namespace qcouple;
using qcouple::testing::load_fixture;

TEST(EpsilonOf, Anchors) {
  EXPECT_DOUBLE_EQ(epsilon_of(28, 15), 1.0 / 27.0);
  EXPECT_DOUBLE_EQ(epsilon_of(29, 16), 1.0 / 14.0);
  EXPECT_DOUBLE_EQ(epsilon_of(28, 27), 25.0 / 27.0);
  EXPECT_LE(epsilon_of(28, 27), 1.0 - 2.0 / 27.0);
  EXPECT_EQ(epsilon_of(29, 15), 0.0);
  EXPECT_THROW(epsilon_of(28, 14), std::domain_error);
  EXPECT_THROW(epsilon_of(28, 29), std::domain_error);
  EXPECT_THROW(epsilon_of(1, 1), std::domain_error);
}

TEST(CutpointTable, MatchesOracle) {
  for (const auto& row : load_fixture("cutpoints.txt")) {
    const auto n = static_cast<std::int64_t>(row[0]);
    const auto k = static_cast<std::int64_t>(row[1]);
    const double z = static_cast<double>(row[2]);
    const auto table = build_table(n);
    EXPECT_NEAR(table.at(k).z, z, 1e-12 * std::max(1.0, z)) << n << ' ' << k;
    EXPECT_NEAR(table.at(k).beta, n / 2.0 + z * std::sqrt(double(n)) / 2.0, 1e-11);
  }
}

TEST(CutpointTable, Anchors) {
  const auto one = build_table(1);
  EXPECT_EQ(one.at(1).beta, 0.5);
  EXPECT_EQ(one.at(1).z, 0.0);

  const auto four = build_table(4);
  EXPECT_NEAR(four.at(3).z, inverse_psi(-std::log(5.0 / 16.0)), 1e-15);
  EXPECT_NEAR(four.at(3).beta, 2.0 + four.at(3).z, 1e-15);
  EXPECT_EQ(four.at(3).log_tail, log_tail_exact(4, 3).log_prob);
}

TEST(CutpointTable, SymmetricAndIncreasing) {
  for (std::int64_t n : {2, 7, 28, 29, 1000, 4096}) {
    const auto t = build_table(n);
    ASSERT_EQ(t.records().size(), static_cast<std::size_t>(n));
    for (std::int64_t k = 1; k <= n; ++k) {
      ASSERT_NEAR(t.beta(k) + t.beta(n - k + 1), double(n), 1e-9 * n) << n << ' ' << k;
      ASSERT_LT(t.beta(k - 1), t.beta(k));
    }
    if (n % 2 == 0) {
      const auto m = n / 2;
      EXPECT_GT(t.at(m + 1).z, 0.0);
      EXPECT_NEAR(t.beta(m) + t.beta(m + 1), double(n), 1e-12 * n);
    }
    EXPECT_EQ(t.beta(0), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(t.beta(n + 1), std::numeric_limits<double>::infinity());
  }
}

TEST(CutpointTable, TailRoundTrip) {
  const auto t = build_table(512);
  for (std::int64_t k = 257; k <= 512; k += 5) {
    const double level = -t.at(k).log_tail;
    EXPECT_NEAR(psi(t.at(k).z), level, 1e-12 * level) << k;
  }
}

TEST(CutpointTable, RangeErrors) {
  EXPECT_THROW(build_table(0), std::range_error);
  EXPECT_THROW(build_table(kMaxCutpointN + 1), std::range_error);
  EXPECT_THROW(build_table(10).at(11), std::out_of_range);
}

TEST(Couple, Boundaries) {
  for (std::int64_t n : {2, 28, 100}) {
    const auto t = build_table(n);
    EXPECT_EQ(couple(t, n / 2.0), n / 2);
    EXPECT_EQ(couple(t, n + 100.0), n);
    EXPECT_EQ(couple(t, -100.0), 0);
    for (std::int64_t k = 1; k <= n; ++k) {
      ASSERT_EQ(couple(t, t.beta(k)), k - 1);
      ASSERT_EQ(couple(t, std::nextafter(t.beta(k), 1e9)), k);
    }
  }
  EXPECT_EQ(couple(build_table(5), std::numeric_limits<double>::infinity()), 5);
  EXPECT_THROW(couple(build_table(5), std::nan("")), std::domain_error);
}

TEST(CutpointTable, CsvOutput) {
  std::ostringstream out;
  build_table(4).write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,k,epsilon,z,beta,log_tail");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.rfind("4,", 0), 0u);
  }
  EXPECT_EQ(rows, 4);
  EXPECT_NE(out.str().find("0.48877641111466"), std::string::npos);
}
