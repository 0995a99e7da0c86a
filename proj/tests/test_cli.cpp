#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  CliRun r;
  const std::string cmd = std::string(HKPOT_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, Diag34ByTwoMethods) {
  const CliRun r = run("potential --algebra sl --jordan 2,2 --params 3,4 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["methods"]["length2"]["rho"].get<double>(), 14.0, 1e-12);
  EXPECT_NEAR(j["methods"]["coh2"]["rho"].get<double>(), 14.0, 1e-12);
}

TEST(Cli, RegularSl3WithOracle) {
  const CliRun r = run("potential --algebra sl --regular-sl3 1,1,1 --oracle --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["methods"]["sl3_regular"]["rho"].get<double>(), 6.0);
  EXPECT_NEAR(j["oracle"]["rho"].get<double>(), 6.0, 6e-5);
  EXPECT_LE(j["oracle"]["residual"].get<double>(), 1e-10);
}

TEST(Cli, ZeroFileIsTrivial) {
  const std::string path = ::testing::TempDir() + "hkpot_zero.json";
  std::ofstream(path) << R"({"n": 3, "algebra": "sl", "form": "identity",
    "entries": [[[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0]]]})";
  const CliRun r = run("potential --file " + path + " --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["methods"]["length2"]["rho"].get<double>(), 0.0);
  EXPECT_EQ(j["flags"][0], "trivial");
}

TEST(Cli, GenerateFiberDocument) {
  const CliRun r = run("generate --algebra so --jordan 3,2,2 --fiber a=1,b=0,v=1");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n"], 7);
  EXPECT_EQ(j["form"], "identity");
  EXPECT_EQ(j["jordan_type"], (std::vector<int>{3, 2, 2}));
  const CliRun g = run("generate --algebra sl --jordan 2,1,1");
  ASSERT_EQ(g.code, 0);
  const auto k = nlohmann::json::parse(g.out);
  EXPECT_EQ(k["entries"][0][1][0], 1.0);
}

TEST(Cli, GeneratedDocumentFeedsPotential) {
  const std::string path = ::testing::TempDir() + "hkpot_gen.json";
  const CliRun g = run("generate --algebra sp --jordan 2,2,1,1 --random --seed 4");
  ASSERT_EQ(g.code, 0);
  std::ofstream(path) << g.out;
  EXPECT_EQ(run("potential --file " + path).code, 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("generate --algebra so --jordan 2,1").code, 2);
  EXPECT_EQ(run("potential --algebra xx --jordan 2").code, 2);
  EXPECT_EQ(run("potential --no-such-flag").code, 2);
  EXPECT_EQ(run("").code, 2);
  const std::string path = ::testing::TempDir() + "hkpot_bad.json";
  std::ofstream(path) << R"({"n": 2, "algebra": "so", "entries": [[0, 1], [0, 0]]})";
  EXPECT_EQ(run("potential --file " + path).code, 3);
  std::ofstream(path + "x") << "not json";
  EXPECT_EQ(run("potential --file " + path + "x").code, 2);
  EXPECT_EQ(run("verify --suite no-such-suite").code, 2);
  // w = 0 drops the fibre to (3,2,2,1^4)
  EXPECT_EQ(run("potential --algebra so --jordan 3,2,2,2,2 --fiber a=1,b=1,v1=1,v2=1").code, 3);
}

TEST(Cli, DisagreementExitCode) {
  // a tolerance below rounding forces the lift / coh2 comparison to fail
  const CliRun r = run("potential --algebra so --jordan 3,1,1 --random --seed 3 --tol 0");
  EXPECT_EQ(r.code, 4);
}

TEST(Cli, VerifySuites) {
  const CliRun r = run("verify --suite even-multiplicity --count 50 --seed 7");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS even-multiplicity"), std::string::npos);
  const CliRun j = run("verify --suite homogeneity --count 10 --json");
  ASSERT_EQ(j.code, 0);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc[0]["pass"], true);
}

TEST(Cli, DeterministicJson) {
  const std::string args = "potential --algebra so --jordan 3,2,2 --random --seed 11 --oracle --json";
  const CliRun a = run(args);
  const CliRun b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run("potential --algebra so --jordan 3,2,2 --random --seed 12 --oracle --json").out);
}
