#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef QCOUPLE_FIXTURE_DIR
#error "QCOUPLE_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace qcouple::testing {

/// Whitespace-separated numeric rows of a fixture file, '#' lines skipped.
inline std::vector<std::vector<long double>> load_fixture(const std::string& name) {
  const std::string path = std::string(QCOUPLE_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::vector<std::vector<long double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::vector<long double> row;
    std::string token;
    while (fields >> token) row.push_back(std::strtold(token.c_str(), nullptr));  // underflow reads as 0
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double rel_err(double got, double want) {
  const double scale = want == 0.0 ? 1.0 : (want < 0 ? -want : want);
  const double d = got - want;
  return (d < 0 ? -d : d) / scale;
}

}  // namespace qcouple::testing
