#include <gmp.h>
#include <mpfr.h>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "qcouple/verify.hpp"

namespace qcouple {
namespace {

constexpr const char* kVersion = "1.0.0";

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : "null"; }

void write_json(std::ostream& out, const SweepResult& result, const SweepConfig& config) {
  const auto& c = result.constants;
  out << "{\n  \"meta\": {\n";
  out << "    \"config\": " << quoted(describe_config(config)) << ",\n";
  out << "    \"versions\": {\"qcouple\": " << quoted(kVersion) << ", \"gmp\": " << quoted(gmp_version)
      << ", \"mpfr\": " << quoted(mpfr_get_version()) << "}\n  },\n";
  out << "  \"records\": [";
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    out << (i ? ",\n    " : "\n    ") << "{\"n\": " << r.n << ", \"k\": " << r.k << ", \"check\": " << quoted(r.check)
        << ", \"passed\": " << (r.passed ? "true" : "false") << ", \"slack\": " << number(r.slack) << "}";
  }
  out << "\n  ],\n  \"constants\": {\n";
  out << "    \"c_thm1\": " << number(c.c_thm1) << ",\n";
  out << "    \"c_thm2\": " << number(c.c_thm2) << ",\n";
  out << "    \"c1_eq5\": " << number(c.eq5.c1) << ",\n";
  out << "    \"c2_eq5\": " << number(c.eq5.c2) << ",\n";
  out << "    \"c3_eq5\": " << number(c.eq5.c3) << ",\n";
  out << "    \"c4_eq5\": " << number(c.eq5.c4) << ",\n";
  out << "    \"c_coupling\": " << number(c.c_coupling) << ",\n";
  out << "    \"stability_ratio\": " << number(c.stability_ratio) << ",\n";
  out << "    \"halves\": {\"c_thm1\": [" << optional_number(c.c_thm1_low) << ", " << optional_number(c.c_thm1_high)
      << "], \"c_thm2\": [" << optional_number(c.c_thm2_low) << ", " << optional_number(c.c_thm2_high)
      << "], \"c_coupling\": [" << optional_number(c.c_coupling_low) << ", " << optional_number(c.c_coupling_high)
      << "]}\n";
  out << "  }\n}\n";
}

void write_csv(std::ostream& out, const SweepResult& result) {
  out << "n,k,check,passed,slack\n";
  for (const auto& r : result.records) {
    out << r.n << ',' << r.k << ',' << r.check << ',' << (r.passed ? 1 : 0) << ',' << csv_number(r.slack) << '\n';
  }
}

}  // namespace

void emit_report(std::ostream& out, const SweepResult& result, const SweepConfig& config, OutputFormat format) {
  if (result.records.empty()) throw std::invalid_argument("emit_report: no records");
  if (format == OutputFormat::json) {
    write_json(out, result, config);
  } else {
    write_csv(out, result);
  }
  out.flush();
  if (!out) throw std::ios_base::failure("emit_report: write failed");
}

}  // namespace qcouple
