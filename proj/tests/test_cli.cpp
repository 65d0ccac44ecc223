#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli_runner.hpp"
#include "comdet/fixtures.hpp"
#include "comdet/io.hpp"

namespace comdet {
namespace {

using testing::count_lines;
using testing::kTwoTrianglesMtx;
using testing::run_cli;
using testing::TempDir;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, DetectTwoTriangles) {
  TempDir dir;
  const std::string input = dir.file("tri.mtx", kTwoTrianglesMtx);
  const auto r = run_cli({"detect", "--input", input, "--mode", "async"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.output.find("Q=0.5000"), std::string::npos) << r.output;

  const auto sync = run_cli({"detect", "--input", input, "--mode", "sync"});
  EXPECT_NE(sync.output.find("Q=0.5000"), std::string::npos) << sync.output;
}

TEST(Cli, BadParametersExitTwo) {
  TempDir dir;
  const std::string input = dir.file("tri.mtx", kTwoTrianglesMtx);
  const auto tol = run_cli({"detect", "--input", input, "--tolerance", "0"}, true);
  EXPECT_EQ(tol.status, 2);
  EXPECT_NE(tol.output.find("tolerance must be > 0"), std::string::npos) << tol.output;
  EXPECT_EQ(run_cli({"detect", "--input", input, "--mode", "sideways"}).status, 2);
  EXPECT_EQ(run_cli({"detect", "--input", input, "--mode", "sync", "--threads", "2"}).status, 2);
  EXPECT_EQ(run_cli({"gen", "cliques", "--k", "0"}).status, 2);
  EXPECT_EQ(run_cli({"sweep", "tolerance", "--input", input, "--grid", "1:2"}).status, 2);
  EXPECT_EQ(run_cli({}).status, 2);
}

TEST(Cli, MalformedInputExitsOne) {
  TempDir dir;
  const std::string bad = dir.file("bad.mtx",
                                   "%%MatrixMarket matrix coordinate pattern general\n"
                                   "3 3 2\n1 2\n");
  const auto r = run_cli({"detect", "--input", bad}, true);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("truncated"), std::string::npos) << r.output;
  EXPECT_EQ(run_cli({"stats", "--input", dir.path("missing.mtx")}).status, 1);
}

TEST(Cli, ThreadsOneMatchesSequentialMembership) {
  TempDir dir;
  const std::string ring = dir.path("ring.txt");
  ASSERT_EQ(run_cli({"gen", "ring-of-cliques", "--k", "4", "--count", "6", "--output", ring})
                .status,
            0);
  ASSERT_EQ(run_cli({"detect", "--input", ring, "--mode", "async", "--out-membership",
                     dir.path("seq.txt")})
                .status,
            0);
  ASSERT_EQ(run_cli({"detect", "--input", ring, "--threads", "1", "--out-membership",
                     dir.path("par.txt")})
                .status,
            0);
  const std::string seq = slurp(dir.path("seq.txt"));
  EXPECT_FALSE(seq.empty());
  EXPECT_EQ(seq, slurp(dir.path("par.txt")));

  std::istringstream in(seq);
  const Assignment a = parse_membership(in, 24);
  EXPECT_EQ(a[0], a[3]);
  EXPECT_NE(a[0], a[4]);
}

TEST(Cli, Stats) {
  TempDir dir;
  const std::string input = dir.file("tri.mtx", kTwoTrianglesMtx);
  EXPECT_EQ(run_cli({"stats", "--input", input}).output, "|V|=6 |E|=12 Davg=2.00\n");
  EXPECT_NE(run_cli({"stats", "--input", input, "--add-self-loops"}).output.find("|E|=18"),
            std::string::npos);
}

TEST(Cli, SweepRowCounts) {
  TempDir dir;
  const std::string input = dir.file("tri.mtx", kTwoTrianglesMtx);
  const auto tol = run_cli({"sweep", "tolerance", "--input", input, "--grid", "1:1e-12:10"});
  EXPECT_EQ(tol.status, 0);
  EXPECT_EQ(count_lines(tol.output), 14u);
  const auto dec = run_cli({"sweep", "decline", "--input", input});
  EXPECT_EQ(count_lines(dec.output), 5u);
  const auto thr = run_cli({"sweep", "threads", "--input", input, "--grid", "1,2,4"});
  EXPECT_EQ(count_lines(thr.output), 4u);

  const std::string json = dir.path("sweep.json");
  ASSERT_EQ(run_cli({"sweep", "decline", "--input", input, "--grid", "10,100",
                     "--report-format", "json", "--out-report", json})
                .status,
            0);
  EXPECT_NE(slurp(json).find("\"total_iterations\""), std::string::npos);
}

TEST(Cli, DetectReportFiles) {
  TempDir dir;
  const std::string input = dir.file("tri.mtx", kTwoTrianglesMtx);
  const std::string csv = dir.path("report.csv");
  ASSERT_EQ(run_cli({"detect", "--input", input, "--out-report", csv}).status, 0);
  EXPECT_EQ(slurp(csv).rfind("pass,iterations,q,local_ms,agg_ms,vertices\n", 0), 0u);
}

TEST(Cli, GenCliquesMatchesFixture) {
  const auto r = run_cli({"gen", "cliques", "--k", "3", "--count", "2"});
  EXPECT_EQ(r.status, 0);
  std::istringstream in(r.output);
  const EdgeList e = parse_edge_list(in);
  EXPECT_EQ(build_graph(e), build_graph(fixtures::cliques(3, 2)));
}

}  // namespace
}  // namespace comdet
