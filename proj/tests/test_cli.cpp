// Command-line surface, run in process.

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "magschro/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = magschro::cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, DistanceOnHarmonicPath) {
  const auto r = run({"distance", "--family", "path-nat", "--q", "n^2", "--from", "1", "--to", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(r.out), 13.0 / 12, 1e-15);
  const auto j = nlohmann::json::parse(
      run({"distance", "--family", "path-nat", "--q", "n^2", "--to", "4", "--format", "json"}).out);
  EXPECT_NEAR(j["distance"].get<double>(), 13.0 / 12, 1e-15);
  const auto csv = run({"distance", "--family", "path-nat", "--to", "5", "--mode", "unit-q", "--format", "csv"});
  EXPECT_EQ(csv.out, "from,to,mode,distance\n1,5,unit-q,4\n");
}

TEST(Cli, DistanceBudgetExhaustion) {
  const auto r = run({"distance", "--family", "path-nat", "--q", "n^2", "--to", "1000000", "--budget", "50"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, BallCsv) {
  const auto r = run({"ball", "--family", "path-nat", "--q", "n^2", "--radius", "0.9", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "vertex,distance\n1,0\n2,0.5\n3,0.83333333333333326\n");
}

TEST(Cli, CheckExample) {
  const auto r = run({"check", "--family", "path-nat", "--W", "-(n^2)", "--q", "n^2", "--C", "1", "--budget", "2000",
                      "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["overall"], "pass");
  EXPECT_EQ(j["lipschitz"]["C_best"].get<double>(), 0.5);
  EXPECT_EQ(j["lipschitz"]["witness"], nlohmann::json::array({1, 2}));
  EXPECT_EQ(j["completeness"]["verdict"], "complete (exact)");
}

TEST(Cli, CheckFailureExitCode) {
  const auto r = run({"check", "--family", "path-nat", "--q", "n^4", "--budget", "500"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.out, "overall: fail"));
}

TEST(Cli, SpectrumCsv) {
  const auto r = run({"spectrum", "--family", "path-nat", "--W", "-(n^2)", "--q", "n^2", "--windows", "10,20,40",
                      "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, "window_size,lambda_min,lambda_max,residual,delta_rayleigh_min");
  int rows = 0;
  while (std::getline(in, row)) {
    const double K = std::stod(row.substr(0, row.find(',')));
    const double lambda = std::stod(row.substr(row.find(',') + 1));
    EXPECT_LE(lambda, 2 - K * K);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(Cli, VerifyIdentitiesSeed42) {
  const auto r = run({"verify-identities", "--seed", "42", "--graphs", "200"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "leibniz,200,0,"));
  EXPECT_TRUE(contains(r.out, "square-average,10000,0,"));
  // bit-reproducible given the seed, apart from timing
  auto a = nlohmann::json::parse(run({"verify-identities", "--graphs", "20", "--format", "json"}).out);
  auto b = nlohmann::json::parse(run({"verify-identities", "--graphs", "20", "--format", "json"}).out);
  a.erase("seconds");
  b.erase("seconds");
  EXPECT_EQ(a, b);
}

TEST(Cli, EstimateDeltaOne) {
  const auto r = run({"estimate", "--family", "path-nat", "--W", "-(n^2)", "--q", "n^2", "--u", "1=1", "--C", "1",
                      "--N", "2", "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["lhs"].get<double>(), 0.25);
  EXPECT_EQ(j["rhs"].get<double>(), 12);
}

TEST(Cli, EstimateWithSweep) {
  const auto r = run({"estimate", "--family", "path-nat", "--W", "-(n^2)", "--q", "n^2", "--u", "1=0.5,2=1:-0.25",
                      "--v", "3=1", "--s", "1,2,4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "s,abs_J,bound,slack\n"));
}

TEST(Cli, EstimateRefusesSmallC) {
  const auto r =
      run({"estimate", "--family", "path-nat", "--W", "-(n^2)", "--q", "n^2", "--u", "1=1", "--C", "0.1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "refused"));
}

TEST(Cli, GraphFileWithLabels) {
  const auto path = temp_file("magschro_cli_labels.json",
                              R"({"vertices":[{"id":"a"},{"id":"b","q":4},{"id":"c"}],
                                  "edges":[{"u":"a","v":"b"},{"u":"b","v":"c","a":4}]})");
  const auto r = run({"distance", "--graph", path, "--from", "a", "--to", "c"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(std::stod(r.out), 0.5 + 0.25);
  EXPECT_EQ(run({"distance", "--graph", path, "--from", "a", "--to", "zz"}).code, 2);
  std::remove(path.c_str());
}

TEST(Cli, InputErrors) {
  const auto bad_file = temp_file("magschro_cli_bad.json", R"({"vertices":[{"id":1,"q":0.5}],"edges":[]})");
  const auto r = run({"check", "--graph", bad_file});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.err, "/vertices/0/q"));
  std::remove(bad_file.c_str());
  EXPECT_EQ(run({"distance", "--family", "path-nat", "--W", "n +", "--to", "3"}).code, 2);
  EXPECT_EQ(run({"distance", "--family", "path-nat", "--to", "3", "--mode", "taxicab"}).code, 2);
  EXPECT_EQ(run({"distance", "--family", "path-nat"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"reproduce", "other-example"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ReproduceSummary) {
  const auto r = run({"reproduce", "paper-example"});
  for (int id = 1; id <= 8; ++id) EXPECT_TRUE(contains(r.out, "PASS  [" + std::to_string(id) + "]")) << r.out;
  EXPECT_TRUE(contains(r.out, "C_best = 0.5"));
  EXPECT_TRUE(contains(r.out, "hypotheses pass"));
  EXPECT_TRUE(contains(r.out, "K=40 lambda_min=-1598"));
  EXPECT_TRUE(contains(r.out, "[9] J_s"));
  const bool all = !contains(r.out, "FAIL  [");
  EXPECT_EQ(r.code, all ? 0 : 1);
  EXPECT_TRUE(contains(r.out, all ? "summary: all checks pass" : "summary: FAILURES present"));
}
