#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "geoent/qstate.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GEOENT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

double field(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key, 0) == 0) return std::stod(line.substr(key.size()));
  }
  return NAN;
}

}  // namespace

TEST(CliEval, WState) {
  const auto r = run("eval --g 0 --t 0.57735026918962576 --h 0 --gamma 0");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(field(r.out, "P_max"), 4.0 / 9, 1e-15);
  EXPECT_NE(r.out.find("branch   Plus"), std::string::npos);
}

TEST(CliEval, ProductFromChart) {
  const auto r = run("eval --u 1.5707963 --v 0 --gamma 0");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(field(r.out, "P_max"), 1.0, 1e-12);
  EXPECT_NEAR(field(r.out, "G "), 0.0, 1e-12);
}

TEST(CliEval, GammaHalfJson) {
  const auto r = run("eval --g 0 --t 0.5 --h 0.5 --gamma 1.5707963267948966 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["p_max"].get<double>(), 0.8, 1e-14);
  EXPECT_NEAR(j["G"].get<double>(), 0.2, 1e-14);
  EXPECT_EQ(j["branches"].size(), 5u);
  EXPECT_TRUE(j["criteria"].contains("C3"));
  // The embedded state round-trips through the state JSON format.
  const auto s = geoent::state_from_json(j["state"].dump());
  EXPECT_EQ(s, geoent::from_params(0, 0.5, 0.5, 1.5707963267948966));
}

TEST(CliEval, GammaPiFlagAndGenericPhase) {
  const auto a = run("eval --g 0.5 --t 0.3 --h 0.4 --gamma-pi 0.25 --json");
  const auto b = run("eval --g 0.5 --t 0.3 --h 0.4 --gamma 0.78539816339744828 --json");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto c = run("eval --g 0.5 --t 0.3 --h 0.4 --gamma 1.0");
  EXPECT_EQ(c.code, 0);
}

TEST(CliEval, UsageErrors) {
  EXPECT_EQ(run("eval --g 0.5 --t 0.3").code, 3);
  EXPECT_EQ(run("eval --g 0.5 --t 0.3 --h 0.4 --u 1 --v 1").code, 3);
  EXPECT_EQ(run("eval --g -1 --t 0.3 --h 0.4").code, 3);
  EXPECT_EQ(run("eval --g 0 --t 0 --h 0").code, 3);
  EXPECT_EQ(run("eval --g 1 --t 0 --h 0 --gamma 0 --gamma-pi 1").code, 3);
  EXPECT_EQ(run("nosuchcommand").code, 3);
}

TEST(CliDomains, CountsAtGammaZeroAndHalf) {
  auto r = run("domains --gamma 0 --grid 200");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("domains: 2\n"), std::string::npos);
  r = run("domains --gamma 1.5707963267948966 --grid 200");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("domains: 3\n"), std::string::npos);
  EXPECT_NE(r.out.find("boundary fraction: "), std::string::npos);
}

TEST(CliSweep, RecordCountHeaderAndDeterminism) {
  const std::string path = ::testing::TempDir() + "geoent_sweep.csv";
  const auto r = run("sweep --gamma 0.7853981633974483 --grid 100 -o " + path);
  ASSERT_EQ(r.code, 0);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "u,v,g,t,h,gamma,p_max,G,branch,D1,C2,C3,boundary");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 10000);

  const auto a = run("sweep --gamma 0.3 --grid 8");
  const auto b = run("sweep --gamma 0.3 --grid 8");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto one_thread = run("sweep --gamma 0.3 --grid 8 | cat; GEOENT_THREADS=1 " +
                              std::string(GEOENT_CLI_PATH) + " sweep --gamma 0.3 --grid 8");
  EXPECT_EQ(one_thread.out, a.out + a.out);
}

TEST(CliSweep, Errors) {
  EXPECT_EQ(run("sweep --gamma 0 --grid 4 -o /nonexistent/dir/out.csv").code, 2);
  EXPECT_EQ(run("sweep --gamma 0 --grid 1").code, 3);
}

TEST(CliOracle, PrintsSeedAndValue) {
  const auto r = run("oracle --g 0 --t 1 --h 0 --restarts 20 --seed 7");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("seed     7"), std::string::npos);
  EXPECT_NEAR(field(r.out, "alternating P_max"), 4.0 / 9, 1e-10);
}

TEST(CliNearest, Runs) {
  const auto r = run("nearest --g 0.5 --t 0.3 --h 0.4 --gamma 0");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(field(r.out, "overlap"), field(r.out, "P_max"), 1e-12);
}

TEST(CliVerify, Filters) {
  EXPECT_EQ(run("verify --samples 0").code, 3);
  EXPECT_EQ(run("verify --only no-such-check").code, 3);
  const auto r = run("verify --only h0-limit --samples 20 --seed 7");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("h0-limit"), std::string::npos);
  EXPECT_EQ(r.out.find("w-state"), std::string::npos);
  EXPECT_NE(r.out.find("seed 7"), std::string::npos);
}
