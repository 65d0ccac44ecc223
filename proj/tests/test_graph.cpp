#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "comdet/graph.hpp"
#include "comdet/io.hpp"
#include "oracle.hpp"

namespace comdet {
namespace {

EdgeList parse_mtx(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_market(in);
}

ParseErrorKind mtx_error(const std::string& text) {
  try {
    parse_mtx(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse error";
  return ParseErrorKind::io;
}

TEST(MatrixMarket, PatternGeneralIsZeroBased) {
  const EdgeList e = parse_mtx(
      "%%MatrixMarket matrix coordinate pattern general\n"
      "% a comment\n"
      "3 3 2\n"
      "2 1\n"
      "3 2\n");
  EXPECT_EQ(e.n_declared, 3u);
  ASSERT_EQ(e.entries.size(), 2u);
  EXPECT_EQ(e.entries[0], (Edge{1, 0, 1.0}));
  EXPECT_EQ(e.entries[1], (Edge{2, 1, 1.0}));
}

TEST(MatrixMarket, RealValues) {
  const EdgeList e = parse_mtx(
      "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 2.5\n");
  ASSERT_EQ(e.entries.size(), 1u);
  EXPECT_EQ(e.entries[0], (Edge{0, 1, 2.5}));
}

TEST(MatrixMarket, SymmetricKeepsStoredTriangleOnly) {
  const EdgeList e = parse_mtx(
      "%%MatrixMarket matrix coordinate integer symmetric\n3 3 2\n2 1 4\n3 3 1\n");
  ASSERT_EQ(e.entries.size(), 2u);
  EXPECT_EQ(e.entries[0], (Edge{1, 0, 4.0}));
  EXPECT_EQ(e.entries[1], (Edge{2, 2, 1.0}));
}

TEST(MatrixMarket, DistinctErrors) {
  EXPECT_EQ(mtx_error("%%MatrixMarket matrix array real general\n2 2\n"),
            ParseErrorKind::malformed_header);
  EXPECT_EQ(mtx_error("%%MatrixMarket matrix coordinate complex general\n2 2 0\n"),
            ParseErrorKind::malformed_header);
  EXPECT_EQ(mtx_error("%%MatrixMarket matrix coordinate pattern general\n2 2\n"),
            ParseErrorKind::malformed_header);
  EXPECT_EQ(mtx_error("%%MatrixMarket matrix coordinate pattern general\n3 3 1\n4 1\n"),
            ParseErrorKind::index_out_of_range);
  EXPECT_EQ(mtx_error("%%MatrixMarket matrix coordinate pattern general\n3 3 1\n0 1\n"),
            ParseErrorKind::index_out_of_range);
  EXPECT_EQ(mtx_error("%%MatrixMarket matrix coordinate real general\n3 3 1\n1 2 inf\n"),
            ParseErrorKind::non_finite_weight);
  EXPECT_EQ(mtx_error("%%MatrixMarket matrix coordinate real general\n3 3 1\n1 2 x\n"),
            ParseErrorKind::malformed_entry);
  EXPECT_EQ(mtx_error("%%MatrixMarket matrix coordinate pattern general\n"
                      "4 4 4\n1 2\n2 3\n3 4\n"),
            ParseErrorKind::truncated);
}

TEST(MatrixMarket, ErrorNamesLine) {
  try {
    parse_mtx("%%MatrixMarket matrix coordinate pattern general\n3 3 2\n1 2\n9 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(EdgeListText, CommentsWeightsAndDeclaredCount) {
  std::istringstream in("# a graph\n# vertices 5\n0 1\n1 2 3.5\n\n");
  const EdgeList e = parse_edge_list(in);
  EXPECT_EQ(e.n_declared, 5u);
  ASSERT_EQ(e.entries.size(), 2u);
  EXPECT_EQ(e.entries[1], (Edge{1, 2, 3.5}));

  std::istringstream bare("0 3\n");
  EXPECT_EQ(parse_edge_list(bare).n_declared, 4u);

  std::istringstream bad("0 1 2 3\n");
  EXPECT_THROW(parse_edge_list(bad), ParseError);
}

TEST(BuildGraph, SingleEdgeSymmetrized) {
  const Graph g = build_graph({2, {{0, 1, 1.0}}});
  ASSERT_EQ(g.num_arcs(), 2u);
  EXPECT_EQ(g.neighbors(0)[0], 1u);
  EXPECT_EQ(g.neighbors(1)[0], 0u);
  EXPECT_EQ(g.degree(0), 1.0);
  EXPECT_EQ(g.degree(1), 1.0);
  EXPECT_EQ(g.total(), 2.0);
}

TEST(BuildGraph, SelfLoopInsertion) {
  const Graph g = build_graph({2, {{0, 1, 1.0}}}, {true, true, 1.0});
  const std::vector<std::size_t> offsets{0, 2, 4};
  const std::vector<VertexId> targets{0, 1, 0, 1};
  const std::vector<Weight> weights{1, 1, 1, 1};
  EXPECT_TRUE(std::ranges::equal(g.offsets(), offsets));
  EXPECT_TRUE(std::ranges::equal(g.targets(), targets));
  EXPECT_TRUE(std::ranges::equal(g.weights(), weights));
  EXPECT_EQ(g.degree(0), 2.0);
  EXPECT_EQ(g.degree(1), 2.0);
  EXPECT_EQ(g.total(), 4.0);
}

TEST(BuildGraph, ExistingSelfLoopKept) {
  const Graph g = build_graph({2, {{0, 0, 3.0}, {0, 1, 1.0}}}, {true, true, 1.0});
  EXPECT_EQ(g.self_loop(0), 3.0);
  EXPECT_EQ(g.self_loop(1), 1.0);
  EXPECT_EQ(g.degree(0), 4.0);
}

TEST(BuildGraph, ParallelArcsMerge) {
  const Graph g = build_graph({2, {{0, 1, 1.0}, {1, 0, 2.0}}});
  ASSERT_EQ(g.num_arcs(), 2u);
  EXPECT_EQ(g.neighbor_weights(0)[0], 3.0);
  EXPECT_EQ(g.neighbor_weights(1)[0], 3.0);
}

TEST(BuildGraph, Rejections) {
  EXPECT_THROW(build_graph({0, {}}), GraphError);
  EXPECT_THROW(build_graph({3, {}}), GraphError);  // zero total weight
  EXPECT_THROW(build_graph({2, {{0, 2, 1.0}}}), GraphError);
  EXPECT_THROW(build_graph({2, {{0, 1, 1.0}}}, {false, false, 1.0}), GraphError);
}

TEST(BuildGraph, IsolatedVerticesKeepZeroDegree) {
  const Graph g = build_graph({4, {{0, 1, 1.0}}});
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.degree(3), 0.0);
}

TEST(GraphStats, Examples) {
  const GraphStats single = graph_stats(build_graph({2, {{0, 1, 1.0}}}));
  EXPECT_EQ(single.vertices, 2u);
  EXPECT_EQ(single.undirected_edges, 2u);
  EXPECT_DOUBLE_EQ(single.avg_degree, 1.0);

  const GraphStats k3 = graph_stats(build_graph(fixtures::cliques(3, 1)));
  EXPECT_EQ(k3.vertices, 3u);
  EXPECT_EQ(k3.undirected_edges, 6u);
  EXPECT_DOUBLE_EQ(k3.avg_degree, 2.0);
}

// Any arc order yields a symmetric graph whose degrees sum to the total and
// whose exported form reads back to identical CSR arrays.
TEST(GraphProperties, RandomInputs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    EdgeList e;
    e.n_declared = n;
    for (std::size_t i = 0; i < 3 * n; ++i)
      e.entries.push_back({static_cast<VertexId>(rng() % n), static_cast<VertexId>(rng() % n),
                           0.25 * static_cast<double>(1 + rng() % 8)});
    std::shuffle(e.entries.begin(), e.entries.end(), rng);
    const Graph g = build_graph(e, {true, rng() % 2 == 0, 1.0});

    EXPECT_TRUE(is_symmetric(g));
    double sum = 0.0;
    for (Weight k : g.degrees()) sum += k;
    EXPECT_EQ(sum, g.total());

    std::stringstream buf;
    write_matrix_market(buf, g);
    const Graph back = build_graph(parse_matrix_market(buf));
    EXPECT_EQ(back, g);
  }
}

}  // namespace
}  // namespace comdet
