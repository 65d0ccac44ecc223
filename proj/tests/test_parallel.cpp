#include <gtest/gtest.h>

#include "comdet/fixtures.hpp"
#include "comdet/parallel.hpp"
#include "oracle.hpp"

namespace comdet {
namespace {

ParallelConfig with_threads(std::size_t threads, std::size_t chunk = 16) {
  ParallelConfig cfg;
  cfg.threads = threads;
  cfg.chunk_size = chunk;
  return cfg;
}

TEST(Parallel, OneThreadMatchesSequentialExactly) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = build_graph(fixtures::planted_partition(200, 8, 0.25, 0.02, seed));
    const auto [ds, rs] = louvain(g);
    const auto [dp, rp] = parallel_louvain(g, with_threads(1, 7));
    EXPECT_EQ(ds.levels, dp.levels);
    EXPECT_EQ(ds.per_level_q, dp.per_level_q);
    EXPECT_EQ(rs.total_iterations, rp.total_iterations);
    EXPECT_EQ(rp.threads, 1u);
  }
}

TEST(Parallel, FourThreadsOnTwoTriangles) {
  const auto [d, report] = parallel_louvain(oracle::two_triangles(), with_threads(4, 1));
  EXPECT_NEAR(report.final_q, 0.5, 1e-9);
  EXPECT_EQ(normalize(flatten(d)).first, (Assignment{{0, 0, 0, 1, 1, 1}}));
}

TEST(Parallel, QualityCloseToSequential) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const Graph g = build_graph(fixtures::planted_partition(500, 10, 0.2, 0.01, seed));
    const double sequential = louvain(g).second.final_q;
    for (std::size_t threads : {2, 4, 8}) {
      const auto [d, report] = parallel_louvain(g, with_threads(threads, 32));
      EXPECT_NEAR(report.final_q, sequential, 0.01);
      EXPECT_NEAR(report.final_q, modularity(g, flatten(d)), 1e-12);
      for (std::size_t i = 1; i < d.per_level_q.size(); ++i)
        EXPECT_GE(d.per_level_q[i], d.per_level_q[i - 1] - 1e-6);
      for (const PassRecord& p : report.passes) {
        EXPECT_LE(p.max_sigma_drift, 1e-6);
        EXPECT_EQ(p.conflicts.size(), p.iterations);
      }
    }
  }
}

TEST(Parallel, SharedStateRecomputedOnExit) {
  const Graph g = build_graph(fixtures::ring_of_cliques(5, 8));
  const Assignment start = singleton_assignment(g.num_vertices());
  SharedState state(g, start);
  const LocalMovingResult r = parallel_local_moving(g, state, 0.01, with_threads(3, 4));
  EXPECT_GT(r.moves, 0u);
  const Aggregates exact = community_aggregates(g, state.snapshot());
  for (std::size_t c = 0; c < g.num_vertices(); ++c)
    EXPECT_EQ(state.sigma_tot[c].load(), exact.sigma_tot[c]);
}

TEST(Parallel, RejectsBadConfig) {
  const Graph g = oracle::two_triangles();
  EXPECT_THROW(parallel_louvain(g, with_threads(0)), std::invalid_argument);
  EXPECT_THROW(parallel_louvain(g, with_threads(2, 0)), std::invalid_argument);
  ParallelConfig sync = with_threads(2);
  sync.mode = Mode::sync;
  EXPECT_THROW(parallel_louvain(g, sync), std::invalid_argument);
}

TEST(SweepThreads, SingleEntryEqualsSequential) {
  const Graph g = build_graph(fixtures::ring_of_cliques(4, 6));
  const auto rows = sweep_threads(g, {1}, with_threads(1));
  ASSERT_EQ(rows.size(), 1u);
  const Report sequential = louvain(g).second;
  EXPECT_EQ(rows[0].report.final_q, sequential.final_q);
  EXPECT_EQ(rows[0].report.total_iterations, sequential.total_iterations);

  const auto many = sweep_threads(g, {1, 2, 4}, with_threads(1));
  ASSERT_EQ(many.size(), 3u);
  EXPECT_EQ(many[2].threads, 4u);
  EXPECT_THROW(sweep_threads(g, {}, with_threads(1)), std::invalid_argument);
}

}  // namespace
}  // namespace comdet
