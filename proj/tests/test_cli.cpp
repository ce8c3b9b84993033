#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "sbandit_cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "sbandit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sbandit::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sbandit_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, PrefactorShortMode) {
  const auto r = run({"prefactor", "--which", "c", "--short"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("c,0.707,0.572,max"), std::string::npos) << r.out;
}

TEST(Cli, DpOneRound) {
  const auto r = run({"dp", "--T", "1", "--eps", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\nv,vbar,v_over_sqrtT,vbar_over_sqrtT\n0.545,0.3,"), std::string::npos) << r.out;
  const auto p = run({"dp", "--T", "1", "--eps", "0.3", "--short"});
  EXPECT_NE(p.out.find("0.545,0.300,"), std::string::npos) << p.out;
}

TEST(Cli, DpGammaFirstAndMethods) {
  const auto a = run({"dp", "--T", "100", "--gamma", "0.5"});
  const auto b = run({"dp", "--T", "100", "--eps", "0.05", "--method", "reduced"});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  const auto row = [](const std::string& s) { return s.substr(s.rfind("\n", s.size() - 2) + 1); };
  EXPECT_EQ(row(a.out), row(b.out));
  EXPECT_EQ(run({"dp", "--T", "20", "--eps", "0.05", "--method", "full"}).code, 1);  // T > 12
  EXPECT_EQ(run({"dp", "--T", "5", "--eps", "0.05", "--method", "nope"}).code, 2);
}

TEST(Cli, DpTrace) {
  const auto path = temp_path("trace.csv");
  ASSERT_EQ(run({"dp", "--T", "8", "--eps", "0.1", "--trace", path}).code, 0);
  const auto text = slurp(path);
  EXPECT_NE(text.find("schema=trace/1"), std::string::npos);
  EXPECT_NE(text.find("\n-8,"), std::string::npos);
}

TEST(Cli, DpTabularStrategy) {
  const auto path = temp_path("strategy.txt");
  {
    std::ofstream f(path);
    sbandit::TabularStrategy::myopic(6).write(f);
  }
  const auto a = run({"dp", "--T", "6", "--eps", "0.2", "--strategy", path});
  const auto b = run({"dp", "--T", "6", "--eps", "0.2"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out.substr(a.out.rfind('\n', a.out.size() - 2)), b.out.substr(b.out.rfind('\n', b.out.size() - 2)));
  EXPECT_EQ(run({"dp", "--T", "7", "--eps", "0.2", "--strategy", path}).code, 1);  // table does not cover T = 7
}

TEST(Cli, FigureHas500Rows) {
  const auto path = temp_path("figure_c.csv");
  const auto r = run({"figure", "--grid", "0.01:5:0.01", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path);
  std::string line;
  int data = 0;
  while (std::getline(f, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("gamma,", 0) != 0) ++data;
  }
  EXPECT_EQ(data, 500);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"dp", "--T", "5"}).code, 2);
  EXPECT_EQ(run({"dp", "--T", "5", "--eps", "0.1", "--gamma", "0.2"}).code, 2);
  EXPECT_EQ(run({"dp", "--T", "five", "--eps", "0.1"}).code, 2);
  EXPECT_EQ(run({"dp", "--T", "5", "--eps", "0.1", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"dp", "--T", "5", "--eps", "0.1", "--trace", "t.csv", "--strategy", "s.tsv"}).code, 2);
}

TEST(Cli, PreconditionsExitOneNamingInvariant) {
  const auto r = run({"dp", "--T", "5", "--eps", "1.5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("gap: 0 <= eps < 1"), std::string::npos) << r.err;
  const auto g = run({"figure", "--grid", "0:5:0.1"});
  EXPECT_EQ(g.code, 1);
  EXPECT_NE(g.err.find("grid: within (0, 5]"), std::string::npos);
  EXPECT_EQ(run({"dp", "--T", "0", "--eps", "0.1"}).code, 1);
}

TEST(Cli, JsonCarriesMetadata) {
  const auto r = run({"simulate", "--T", "10", "--eps", "0.1", "--episodes", "2000", "--seed", "9", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["version"], "1.0.0");
  EXPECT_EQ(j["config"]["seed"], "9");
  EXPECT_EQ(j["rows"].size(), 1u);
  EXPECT_TRUE(j["rows"][0]["regret_mean"].is_number());
}

TEST(Cli, SimulateReproducibleAcrossWorkers) {
  const auto a = run({"simulate", "--T", "20", "--gamma", "0.7", "--episodes", "20000", "--seed", "3"});
  const auto b = run({"simulate", "--T", "20", "--gamma", "0.7", "--episodes", "20000", "--seed", "3", "--workers", "4"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("seed=3"), std::string::npos);
}

TEST(Cli, SimulateAuditLog) {
  const auto path = temp_path("episodes.tsv");
  const auto r = run({"simulate", "--T", "6", "--eps", "0.2", "--episodes", "10", "--audit", path, "--audit-count", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path);
  std::string line;
  int records = 0;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    EXPECT_NO_THROW(sbandit::parse_record(line));
    ++records;
  }
  EXPECT_EQ(records, 3);
}

TEST(Cli, PdeOutputs) {
  const auto r = run({"pde", "--T", "100", "--gamma", "0.707", "--branch", "C0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("u,u_h,u_n,phi,phi_hat,ubar,phi_bar,phi_bar_hat"), std::string::npos);
  const auto p = run({"pde", "--eps", "0.1", "--xi-r", "2", "--xi-h", "0.5", "--t", "-3", "--b", "4"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NE(p.out.find("branch=custom"), std::string::npos);
  EXPECT_EQ(run({"pde", "--eps", "0.1", "--t", "1"}).code, 1);
}

TEST(Cli, SweepConfigAndErrorScaling) {
  const auto cfg = std::string(SBANDIT_CONFIG_DIR) + "/mc_check.cfg";
  const auto a = run({"sweep", "--config", cfg});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("schema=convergence/1"), std::string::npos);
  EXPECT_EQ(a.out, run({"sweep", "--config", cfg, "--workers", "2"}).out);
  const auto e = run({"sweep", "--error-scaling", "--T", "256", "--gaps", "0.05,0.1,0.2", "--branch", "C0"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("schema=error_scaling/1"), std::string::npos);
  EXPECT_EQ(run({"sweep", "--config", "/nonexistent.cfg"}).code, 1);
  EXPECT_EQ(run({"sweep"}).code, 2);
}

TEST(Cli, VerifyPasses) {
  const auto r = run({"verify", "--T", "2", "--eps", "0.3", "--grid", "51"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("minimax_certificate"), std::string::npos);
  EXPECT_EQ(run({"verify", "--T", "4", "--eps", "0.3"}).code, 1);
}

TEST(Cli, OutputReproducibleByteForByte) {
  const auto p1 = temp_path("rep1.csv"), p2 = temp_path("rep2.csv");
  ASSERT_EQ(run({"figure", "--grid", "0.5:2:0.5", "--out", p1}).code, 0);
  ASSERT_EQ(run({"figure", "--grid", "0.5:2:0.5", "--out", p2}).code, 0);
  EXPECT_EQ(slurp(p1), slurp(p2));
  EXPECT_NE(slurp(p1).find("# sbandit 1.0.0 schema=figure_c/1"), std::string::npos);
}
