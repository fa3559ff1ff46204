#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell, capturing stdout; stderr is discarded.
Run run(const std::string& args) {
  const std::string cmd = std::string(QCOUPLE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Cli, Tails) {
  const auto r = run("tails 4 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("numerator=5"), std::string::npos);
  EXPECT_NE(r.out.find("probability=0.3125"), std::string::npos);
}

TEST(Cli, CutpointsToFile) {
  const auto path = std::filesystem::temp_directory_path() / "qcouple_cli_cut.csv";
  EXPECT_EQ(run("cutpoints 28 --csv " + path.string()).code, 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "n,k,epsilon,z,beta,log_tail");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("coupling 256").code, 0);
  EXPECT_EQ(run("lemma1 --grid -2:2:0.01 --tail-grid 0.1:10:0.1").code, 0);
  EXPECT_EQ(run("cutpoints 0").code, 2);
  EXPECT_EQ(run("cutpoints 28 --csv /nonexistent-dir/x.csv").code, 3);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("lemma1 --grid 1:2").code, 2);
  EXPECT_EQ(run("theorem1").code, 2);
  const auto bad = temp_file("qcouple_cli_bad.cfg", "n_values = 28\ncolour = blue\n");
  EXPECT_EQ(run("sweep --config " + bad.string()).code, 2);
}

TEST(Cli, SweepSubsetsPassAndAreByteStable) {
  const auto cfg = temp_file("qcouple_cli_small.cfg", "n_values = 28, 64, 100\n");
  for (const char* sub : {"theorem1", "theorem2", "tusnady"}) {
    const auto first = run(std::string(sub) + " --config " + cfg.string());
    EXPECT_EQ(first.code, 0) << sub;
    EXPECT_EQ(first.out, run(std::string(sub) + " --config " + cfg.string()).out) << sub;
  }
  const auto json = run("sweep --config " + cfg.string() + " --format json");
  EXPECT_EQ(json.out.rfind("{", 0), 0u);
}

TEST(Cli, FailedRecordGivesExitOne) {
  // The two-half stability audits over the default grid are known to fail.
  const auto r = run(std::string("sweep --config ") + QCOUPLE_CONFIG_DIR + "/default.cfg");
  EXPECT_EQ(r.code, 1);
}
