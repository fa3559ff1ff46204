// qcouple: exact Binomial/normal quantile coupling and the checks around it.
//
// Usage:
//   qcouple tails N K
//   qcouple cutpoints N [--csv PATH]
//   qcouple theorem1 --config PATH [--format csv|json] [--out PATH]
//   qcouple theorem2 --config PATH [--format csv|json] [--out PATH]
//   qcouple tusnady  --config PATH [--format csv|json] [--out PATH]
//   qcouple lemma1 [--grid A:B:STEP] [--tail-grid A:B:STEP]
//   qcouple coupling N
//   qcouple sweep [--config PATH] [--format csv|json] [--out PATH]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad arguments or
// config, 3 I/O error. QCOUPLE_MAX_THREADS caps sweep parallelism.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qcouple/binom_exact.hpp"
#include "qcouple/cutpoints.hpp"
#include "qcouple/normal_tail.hpp"
#include "qcouple/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grid {
  double a = 0.0;
  double b = 0.0;
  double step = 0.0;
};

Grid parse_grid(const std::string& text) {
  Grid g;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &g.a, &g.b, &g.step, &tail) != 3 || !(g.step > 0.0) || g.b < g.a) {
    throw qcouple::ConfigError("grid must look like A:B:STEP with A <= B and STEP > 0, got '" + text + "'");
  }
  return g;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes through `write` to PATH, or to stdout when PATH is empty.
template <class Fn>
void with_output(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

int report_failures(const qcouple::SweepResult& result, const std::vector<std::string>& prefixes) {
  std::size_t failed = 0;
  for (const auto& r : result.records) {
    bool selected = prefixes.empty();
    for (const auto& p : prefixes) selected = selected || r.check.rfind(p, 0) == 0;
    if (selected && !r.passed) {
      ++failed;
      std::cerr << "FAIL " << r.check << " n=" << r.n << " k=" << r.k << " slack=" << fmt17(r.slack) << '\n';
    }
  }
  return failed == 0 ? kExitPass : kExitFail;
}

qcouple::SweepResult filtered(const qcouple::SweepResult& all, const std::vector<std::string>& prefixes) {
  qcouple::SweepResult out;
  out.constants = all.constants;
  for (const auto& r : all.records) {
    for (const auto& p : prefixes) {
      if (r.check.rfind(p, 0) == 0) {
        out.records.push_back(r);
        break;
      }
    }
  }
  return out;
}

void print_constants(const qcouple::ConstantsReport& c) {
  auto opt = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string("n/a"); };
  std::cerr << "c_thm1=" << fmt17(c.c_thm1) << " (n<=256: " << opt(c.c_thm1_low) << ", n>=512: " << opt(c.c_thm1_high)
            << ")\n"
            << "c_thm2=" << fmt17(c.c_thm2) << " (n<=256: " << opt(c.c_thm2_low) << ", n>=512: " << opt(c.c_thm2_high)
            << ")\n"
            << "eq5 C1..C4=" << fmt17(c.eq5.c1) << ", " << fmt17(c.eq5.c2) << ", " << fmt17(c.eq5.c3) << ", "
            << fmt17(c.eq5.c4) << '\n'
            << "c_coupling=" << fmt17(c.c_coupling) << " stability_ratio=" << fmt17(c.stability_ratio) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact quantile coupling of Bin(n, 1/2) with N(n/2, n/4)"};
  app.require_subcommand(1);

  std::int64_t n = 0;
  std::int64_t k = 0;
  std::string csv_path;
  std::string config_path;
  std::string format_name;
  std::string out_path;
  std::string grid_text = "-8:8:0.001";
  std::string tail_grid_text = "0.01:40:0.01";

  auto* tails = app.add_subcommand("tails", "Exact upper tail P{Bin(n,1/2) >= k}");
  tails->add_option("n", n)->required();
  tails->add_option("k", k)->required();

  auto* cutpoints = app.add_subcommand("cutpoints", "Cutpoint table for one n");
  cutpoints->add_option("n", n)->required();
  cutpoints->add_option("--csv", csv_path, "Write CSV here instead of stdout");

  auto add_sweep_options = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "Sweep config (key = value)");
    if (config_required) opt->required();
    sub->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Report path (default stdout)");
  };
  auto* theorem1 = app.add_subcommand("theorem1", "Tail expansion residuals and the log-domain tail bracket");
  add_sweep_options(theorem1, true);
  auto* theorem2 = app.add_subcommand("theorem2", "Cutpoint expansion residuals and the quadratic sandwich");
  add_sweep_options(theorem2, true);
  auto* tusnady = app.add_subcommand("tusnady", "Tusnady's cutpoint bracket");
  add_sweep_options(tusnady, true);
  auto* sweep = app.add_subcommand("sweep", "Every check over the configured grid");
  add_sweep_options(sweep, false);

  auto* lemma1 = app.add_subcommand("lemma1", "Normal hazard-rate inequalities on a grid");
  lemma1->add_option("--grid", grid_text, "A:B:STEP for the hazard inequalities");
  lemma1->add_option("--tail-grid", tail_grid_text, "A:B:STEP for the classical tail bounds");

  auto* coupling = app.add_subcommand("coupling", "Worst-case |X - Y| over cell endpoints");
  coupling->add_option("n", n)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (tails->parsed()) {
      const auto t = qcouple::log_tail_exact(n, k);
      std::cout << "n=" << t.n << "\nk=" << t.k << "\nnumerator=" << t.numerator.get_str() << "\ndenominator=2^" << t.n
                << "\nprobability=" << fmt17(t.probability()) << "\nlog_prob=" << fmt17(t.log_prob) << '\n';
      if (k >= 1 && n <= qcouple::kMaxTableN) {
        std::cout << "log_prob_beta_integral=" << fmt17(qcouple::log_tail_beta_integral(n, k)) << '\n';
      }
      return kExitPass;
    }
    if (cutpoints->parsed()) {
      const auto table = qcouple::build_table(n);
      with_output(csv_path, [&](std::ostream& os) { table.write_csv(os); });
      return kExitPass;
    }
    if (coupling->parsed()) {
      const auto c = qcouple::coupling_check(n);
      std::cout << "n=" << c.n << "\nmax_x_minus_beta=" << fmt17(c.max_x_minus_beta)
                << "\nfitted_c_coupling=" << fmt17(c.fitted_c) << '\n';
      return c.max_x_minus_beta <= 1.0 ? kExitPass : kExitFail;
    }
    if (lemma1->parsed()) {
      const auto g = parse_grid(grid_text);
      const auto tg = parse_grid(tail_grid_text);
      int status = kExitPass;
      std::cout << "check,points,failures,min_slack\n";
      auto show = [&](const std::vector<qcouple::GridCheck>& checks) {
        for (const auto& c : checks) {
          std::cout << c.name << ',' << c.points << ',' << c.failures << ',' << fmt17(c.min_slack) << '\n';
          if (c.failures) status = kExitFail;
        }
      };
      show(qcouple::lemma1_checks(g.a, g.b, g.step));
      show(qcouple::tail_bound_checks(tg.a, tg.b, tg.step));
      return status;
    }

    qcouple::SweepConfig cfg;
    if (!config_path.empty()) cfg = qcouple::load_config(config_path);
    if (format_name == "json") cfg.output_format = qcouple::OutputFormat::json;
    if (format_name == "csv") cfg.output_format = qcouple::OutputFormat::csv;
    const auto result = qcouple::run_sweep(cfg);

    std::vector<std::string> prefixes;
    if (theorem1->parsed()) prefixes = {"thm1", "laplace", "sandwich11", "eta", "kappa"};
    if (theorem2->parsed()) prefixes = {"thm2", "delta"};
    if (tusnady->parsed()) prefixes = {"tusnady", "overshoot"};
    const auto shown = prefixes.empty() ? result : filtered(result, prefixes);
    with_output(out_path, [&](std::ostream& os) { qcouple::emit_report(os, shown, cfg, cfg.output_format); });
    print_constants(result.constants);
    return report_failures(result, prefixes);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qcouple::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::range_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
