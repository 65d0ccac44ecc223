#pragma once

#include <atomic>
#include <barrier>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <thread>
#include <vector>

#include "comdet/community.hpp"
#include "comdet/graph.hpp"
#include "comdet/louvain.hpp"

namespace comdet {

struct ParallelConfig : Config {
  std::size_t threads = 12;
  std::size_t chunk_size = 1024;

  void validate() const {
    Config::validate();
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (chunk_size < 1) throw std::invalid_argument("chunk size must be >= 1");
  }
};

// Membership and community mass shared by all workers. Every slot is read and
// written only through atomics, so a reader may see a stale value but never a
// torn one.
struct SharedState {
  std::vector<std::atomic<CommunityId>> labels;
  std::vector<std::atomic<Weight>> sigma_tot;

  SharedState(const Graph& g, const Assignment& a)
      : labels(g.num_vertices()), sigma_tot(g.num_vertices()) {
    check_assignment(g, a);
    const Aggregates agg = community_aggregates(g, a);
    for (std::size_t u = 0; u < labels.size(); ++u) {
      labels[u].store(a[u], std::memory_order_relaxed);
      sigma_tot[u].store(agg.sigma_tot[u], std::memory_order_relaxed);
    }
  }

  Assignment snapshot() const {
    Assignment a;
    a.labels.reserve(labels.size());
    for (const auto& l : labels) a.labels.push_back(l.load(std::memory_order_relaxed));
    return a;
  }
};

namespace detail {

struct alignas(64) WorkerTally {
  double gain = 0.0;
  std::size_t moves = 0;
  std::size_t conflicts = 0;
};

}  // namespace detail

// Multi-threaded asynchronous local-moving over shared state.
//
// Vertex ids are cut into chunks of cfg.chunk_size; chunk i belongs to worker
// i % threads, which is the only writer of those vertices' labels. Workers keep
// a private NeighborScan, decide against whatever shared state they observe,
// and publish a move as one label store plus an atomic subtract/add on the two
// sigma_tot entries. On exit sigma_tot is compared against a from-scratch
// recomputation; the drift is reported and callers recompute Q exactly.
inline LocalMovingResult parallel_local_moving(const Graph& g, SharedState& state,
                                               double tolerance,
                                               const ParallelConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.num_vertices();
  const Weight total = g.total();
  const std::size_t threads = cfg.threads;
  const std::size_t chunk = cfg.chunk_size;
  const std::size_t chunks = (n + chunk - 1) / chunk;

  LocalMovingResult res;
  std::vector<detail::WorkerTally> tally(threads);
  bool done = false;

  auto end_of_iteration = [&]() noexcept {
    double iteration_gain = 0.0;
    std::size_t conflicts = 0;
    for (detail::WorkerTally& t : tally) {
      iteration_gain += t.gain;
      res.moves += t.moves;
      conflicts += t.conflicts;
      t = {};
    }
    ++res.iterations;
    res.gain += iteration_gain;
    res.conflicts.push_back(conflicts);
    if (!(iteration_gain > tolerance)) {
      done = true;
    } else if (res.iterations >= cfg.max_iterations_per_pass) {
      res.cap_hit = true;
      done = true;
    }
  };
  std::barrier sync(static_cast<std::ptrdiff_t>(threads), end_of_iteration);

  auto worker = [&](std::size_t id) {
    NeighborScan scan(n);
    auto label_of = [&](VertexId v) {
      return state.labels[v].load(std::memory_order_relaxed);
    };
    auto sigma_of = [&](CommunityId c) {
      return state.sigma_tot[c].load(std::memory_order_relaxed);
    };
    while (true) {
      detail::WorkerTally& mine = tally[id];
      for (std::size_t c = id; c < chunks; c += threads) {
        const std::size_t end = std::min(n, (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) {
          const auto u = static_cast<VertexId>(i);
          const CommunityId from = label_of(u);
          const Weight k_u = g.degree(u);
          scan.scan(g, u, from, label_of);
          const Move mv = best_move(scan, k_u, from, total, sigma_of);
          if (mv.to == from) continue;
          const Weight seen_to = sigma_of(mv.to);
          state.labels[u].store(mv.to, std::memory_order_relaxed);
          state.sigma_tot[from].fetch_sub(k_u, std::memory_order_relaxed);
          const Weight before_to =
              state.sigma_tot[mv.to].fetch_add(k_u, std::memory_order_relaxed);
          if (before_to != seen_to) ++mine.conflicts;
          mine.gain += mv.gain;
          ++mine.moves;
        }
      }
      sync.arrive_and_wait();
      if (done) break;
    }
  };

  {
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker, t);
    worker(0);
  }

  const Aggregates exact = community_aggregates(g, state.snapshot());
  for (std::size_t c = 0; c < n; ++c) {
    const double drift =
        std::abs(state.sigma_tot[c].load(std::memory_order_relaxed) - exact.sigma_tot[c]);
    res.max_sigma_drift = std::max(res.max_sigma_drift, drift);
    state.sigma_tot[c].store(exact.sigma_tot[c], std::memory_order_relaxed);
  }
  return res;
}

// Louvain with multi-threaded local-moving; aggregation stays sequential.
// With threads == 1 the output matches the sequential async engine exactly.
inline std::pair<Dendrogram, Report> parallel_louvain(const Graph& g,
                                                      const ParallelConfig& cfg) {
  cfg.validate();
  if (cfg.mode != Mode::async)
    throw std::invalid_argument("the parallel engine supports async mode only");
  auto result = detail::run_passes(g, cfg, [&cfg](const Graph& h, Assignment& a,
                                                  double tol) {
    SharedState state(h, a);
    LocalMovingResult lm = parallel_local_moving(h, state, tol, cfg);
    a = state.snapshot();
    return lm;
  });
  result.second.threads = cfg.threads;
  return result;
}

// One parallel_louvain run per thread count, in the given order.
inline std::vector<SweepRow> sweep_threads(const Graph& g,
                                           const std::vector<std::size_t>& thread_list,
                                           ParallelConfig cfg) {
  if (thread_list.empty()) throw std::invalid_argument("thread list must not be empty");
  std::vector<SweepRow> rows;
  for (std::size_t t : thread_list) {
    cfg.threads = t;
    rows.push_back({cfg.tolerance_initial, cfg.tolerance_decline_factor, t,
                    parallel_louvain(g, cfg).second});
  }
  return rows;
}

}  // namespace comdet
