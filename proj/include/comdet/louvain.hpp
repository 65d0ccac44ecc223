#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "comdet/community.hpp"
#include "comdet/graph.hpp"

namespace comdet {

enum class Mode { async, sync };

inline const char* to_string(Mode m) { return m == Mode::async ? "async" : "sync"; }

struct Config {
  double tolerance_initial = 0.01;
  double tolerance_decline_factor = 10.0;
  double pass_tolerance = 0.0;
  std::size_t max_passes = 20;
  std::size_t max_iterations_per_pass = 500;
  Mode mode = Mode::async;

  void validate() const {
    if (!(tolerance_initial > 0.0) || !std::isfinite(tolerance_initial))
      throw std::invalid_argument("tolerance must be > 0");
    if (!(tolerance_decline_factor >= 1.0) || !std::isfinite(tolerance_decline_factor))
      throw std::invalid_argument("tolerance decline factor must be >= 1");
    if (!(pass_tolerance >= 0.0))
      throw std::invalid_argument("pass tolerance must be >= 0");
    if (max_passes < 1) throw std::invalid_argument("max passes must be >= 1");
    if (max_iterations_per_pass < 1)
      throw std::invalid_argument("max iterations must be >= 1");
  }
};

// Smallest tolerance reachable through threshold scaling.
inline constexpr double kToleranceFloor = 1e-16;

struct PassRecord {
  std::size_t pass = 0;
  std::size_t iterations = 0;
  double q = 0.0;
  double local_ms = 0.0;
  double agg_ms = 0.0;
  std::size_t vertices = 0;
  std::size_t moves = 0;
  bool iteration_cap_hit = false;
  // Parallel engine only: per-iteration counts of moves whose target
  // community mass changed between decision and write.
  std::vector<std::size_t> conflicts;
  // Parallel engine only: largest |incremental - recomputed| sigma_tot entry
  // at loop exit.
  double max_sigma_drift = 0.0;
};

struct Report {
  std::vector<PassRecord> passes;
  std::size_t total_passes = 0;
  std::size_t total_iterations = 0;
  double final_q = 0.0;
  double wall_ms = 0.0;
  std::size_t threads = 1;
  bool pass_cap_hit = false;
};

// Private neighbour-community scratch: a dense weight array indexed by
// community plus the list of communities touched since the last clear.
class NeighborScan {
 public:
  explicit NeighborScan(std::size_t n) : weight_(n, 0.0), present_(n, 0) {}

  // k_{u->c} for every community adjacent to u; self-loop arcs excluded and
  // the own community always present.
  template <typename LabelOf>
  void scan(const Graph& g, VertexId u, CommunityId own, LabelOf&& label_of) {
    clear();
    touch(own);
    auto nbrs = g.neighbors(u);
    auto ws = g.neighbor_weights(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const VertexId v = nbrs[i];
      if (v == u) continue;
      const CommunityId c = label_of(v);
      touch(c);
      weight_[c] += ws[i];
    }
  }

  std::span<const CommunityId> communities() const { return touched_; }
  Weight weight(CommunityId c) const { return weight_[c]; }

  std::map<CommunityId, Weight> to_map() const {
    std::map<CommunityId, Weight> out;
    for (CommunityId c : touched_) out[c] = weight_[c];
    return out;
  }

 private:
  void touch(CommunityId c) {
    if (!present_[c]) {
      present_[c] = 1;
      touched_.push_back(c);
    }
  }
  void clear() {
    for (CommunityId c : touched_) {
      weight_[c] = 0.0;
      present_[c] = 0;
    }
    touched_.clear();
  }

  std::vector<Weight> weight_;
  std::vector<char> present_;
  std::vector<CommunityId> touched_;
};

inline std::map<CommunityId, Weight> scan_neighbor_communities(const Graph& g,
                                                               const Assignment& a,
                                                               VertexId u) {
  NeighborScan scan(g.num_vertices());
  scan.scan(g, u, a[u], [&](VertexId v) { return a[v]; });
  return scan.to_map();
}

struct Move {
  CommunityId to = 0;
  double gain = 0.0;
};

// Best strictly improving move among the scanned communities, ties going to
// the lowest community id; (from, 0) when nothing improves.
template <typename SigmaOf>
Move best_move(const NeighborScan& scan, Weight k_u, CommunityId from,
               Weight total, SigmaOf&& sigma_of) {
  const Weight k_from = scan.weight(from);
  const Weight sigma_from = sigma_of(from);
  Move best{from, 0.0};
  for (CommunityId c : scan.communities()) {
    if (c == from) continue;
    const double gain =
        move_gain(k_u, k_from, scan.weight(c), sigma_from, sigma_of(c), total);
    if (gain > best.gain || (gain == best.gain && best.to != from && c < best.to))
      best = {c, gain};
  }
  if (!(best.gain > 0.0)) return {from, 0.0};
  return best;
}

inline Move best_move(const NeighborScan& scan, const Aggregates& agg, Weight k_u,
                      CommunityId from, Weight total) {
  return best_move(scan, k_u, from, total,
                   [&](CommunityId c) { return agg.sigma_tot[c]; });
}

struct LocalMovingResult {
  std::size_t iterations = 0;
  double gain = 0.0;
  std::size_t moves = 0;
  bool cap_hit = false;
  std::vector<std::size_t> conflicts;
  double max_sigma_drift = 0.0;
};

namespace detail {

inline LocalMovingResult local_moving_async(const Graph& g, Assignment& a,
                                            double tolerance,
                                            std::size_t max_iterations) {
  const std::size_t n = g.num_vertices();
  const Weight total = g.total();
  Aggregates agg = community_aggregates(g, a);
  NeighborScan scan(n);
  LocalMovingResult res;
  while (true) {
    double iteration_gain = 0.0;
    for (VertexId u = 0; u < n; ++u) {
      const CommunityId from = a[u];
      scan.scan(g, u, from, [&](VertexId v) { return a[v]; });
      const Move mv = best_move(scan, agg, g.degree(u), from, total);
      if (mv.to == from) continue;
      agg.move(g.degree(u), g.self_loop(u), scan.weight(from), scan.weight(mv.to),
               from, mv.to);
      a[u] = mv.to;
      iteration_gain += mv.gain;
      ++res.moves;
    }
    ++res.iterations;
    res.gain += iteration_gain;
    if (!(iteration_gain > tolerance)) break;
    if (res.iterations >= max_iterations) {
      res.cap_hit = true;
      break;
    }
  }
  return res;
}

// Every decision reads the iteration-start labels and aggregates; the moves
// are applied together afterwards. A singleton may only join another
// singleton with a lower id, which rules out endless pairwise swaps.
inline LocalMovingResult local_moving_sync(const Graph& g, Assignment& a,
                                           double tolerance,
                                           std::size_t max_iterations) {
  const std::size_t n = g.num_vertices();
  const Weight total = g.total();
  NeighborScan scan(n);
  LocalMovingResult res;
  while (true) {
    const Assignment snapshot = a;
    const Aggregates agg = community_aggregates(g, snapshot);
    double iteration_gain = 0.0;
    for (VertexId u = 0; u < n; ++u) {
      const CommunityId from = snapshot[u];
      scan.scan(g, u, from, [&](VertexId v) { return snapshot[v]; });
      const Move mv = best_move(scan, agg, g.degree(u), from, total);
      if (mv.to == from) continue;
      if (agg.sizes[from] == 1 && agg.sizes[mv.to] == 1 && mv.to > from) continue;
      a[u] = mv.to;
      iteration_gain += mv.gain;
      ++res.moves;
    }
    ++res.iterations;
    res.gain += iteration_gain;
    if (!(iteration_gain > tolerance)) break;
    if (res.iterations >= max_iterations) {
      res.cap_hit = true;
      break;
    }
  }
  return res;
}

}  // namespace detail

// Greedy local-moving on `a` in place. Async sweeps vertices in ascending id
// and applies each move immediately; sync decides every vertex against the
// iteration-start snapshot and applies all moves together. Iterations repeat
// while the summed gain of an iteration exceeds `tolerance`.
inline LocalMovingResult local_moving(const Graph& g, Assignment& a, double tolerance,
                                      Mode mode, std::size_t max_iterations) {
  check_assignment(g, a);
  return mode == Mode::async
             ? detail::local_moving_async(g, a, tolerance, max_iterations)
             : detail::local_moving_sync(g, a, tolerance, max_iterations);
}

struct Aggregated {
  Graph graph;
  Assignment mapping;
};

// Collapses each community into a super-vertex. Inter-community arc weights
// are summed; the internal weight of a community becomes its self-loop.
inline Aggregated aggregate(const Graph& g, const Assignment& a) {
  check_assignment(g, a);
  auto [mapping, count] = normalize(a);
  const std::size_t n = g.num_vertices();

  std::vector<std::size_t> member_offsets(count + 1, 0);
  for (CommunityId c : mapping.labels) ++member_offsets[c + 1];
  for (std::size_t c = 0; c < count; ++c) member_offsets[c + 1] += member_offsets[c];
  std::vector<VertexId> members(n);
  {
    std::vector<std::size_t> cursor(member_offsets.begin(), member_offsets.end() - 1);
    for (VertexId u = 0; u < n; ++u) members[cursor[mapping[u]]++] = u;
  }

  std::vector<std::size_t> offsets(count + 1, 0);
  std::vector<VertexId> targets;
  std::vector<Weight> weights;
  std::vector<Weight> acc(count, 0.0);
  std::vector<char> present(count, 0);
  std::vector<CommunityId> touched;
  for (CommunityId c = 0; c < count; ++c) {
    for (std::size_t i = member_offsets[c]; i < member_offsets[c + 1]; ++i) {
      const VertexId u = members[i];
      auto nbrs = g.neighbors(u);
      auto ws = g.neighbor_weights(u);
      for (std::size_t j = 0; j < nbrs.size(); ++j) {
        const CommunityId d = mapping[nbrs[j]];
        if (!present[d]) {
          present[d] = 1;
          touched.push_back(d);
        }
        acc[d] += ws[j];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (CommunityId d : touched) {
      targets.push_back(d);
      weights.push_back(acc[d]);
      acc[d] = 0.0;
      present[d] = 0;
    }
    offsets[c + 1] = targets.size();
    touched.clear();
  }
  return {Graph::from_csr(count, std::move(offsets), std::move(targets),
                          std::move(weights)),
          std::move(mapping)};
}

// Local-moving strategy plugged into the pass loop.
using LocalMover =
    std::function<LocalMovingResult(const Graph&, Assignment&, double tolerance)>;

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   since)
      .count();
}

// Local-moving + aggregation passes with threshold scaling. A pass that moved
// nothing, failed to shrink the graph, or gained no more than pass_tolerance
// ends the run; its level is kept when something moved and Q did not drop.
inline std::pair<Dendrogram, Report> run_passes(const Graph& g, const Config& cfg,
                                                const LocalMover& mover) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Dendrogram d;
  Report report;

  std::optional<Graph> owned;
  const Graph* current = &g;
  double tolerance = cfg.tolerance_initial;
  double q_prev = modularity(g, singleton_assignment(g.num_vertices()));

  for (std::size_t pass = 0;; ++pass) {
    const std::size_t n = current->num_vertices();
    Assignment a = singleton_assignment(n);
    const auto lm_start = std::chrono::steady_clock::now();
    LocalMovingResult lm = mover(*current, a, tolerance);
    PassRecord rec;
    rec.local_ms = elapsed_ms(lm_start);
    rec.pass = pass;
    rec.iterations = lm.iterations;
    rec.vertices = n;
    rec.moves = lm.moves;
    rec.iteration_cap_hit = lm.cap_hit;
    rec.conflicts = std::move(lm.conflicts);
    rec.max_sigma_drift = lm.max_sigma_drift;

    const double q = modularity(*current, a);
    auto [level, count] = normalize(a);
    const bool moved = lm.moves > 0;
    const bool last_pass = pass + 1 >= cfg.max_passes;
    const bool stop = q - q_prev <= cfg.pass_tolerance || !moved || count == n;

    if (stop || last_pass) {
      if ((moved && q >= q_prev) || d.levels.empty()) {
        const bool keep = moved && q >= q_prev;
        d.levels.push_back(keep ? std::move(level) : singleton_assignment(n));
        d.per_level_q.push_back(keep ? q : q_prev);
      }
      rec.q = d.per_level_q.back();
      report.passes.push_back(std::move(rec));
      report.pass_cap_hit = !stop && last_pass;
      break;
    }

    const auto agg_start = std::chrono::steady_clock::now();
    Aggregated next = aggregate(*current, a);
    rec.agg_ms = elapsed_ms(agg_start);
    rec.q = q;
    report.passes.push_back(std::move(rec));
    d.levels.push_back(std::move(next.mapping));
    d.per_level_q.push_back(q);
    owned = std::move(next.graph);
    current = &*owned;
    q_prev = q;
    tolerance = std::max(tolerance / cfg.tolerance_decline_factor, kToleranceFloor);
  }

  report.total_passes = report.passes.size();
  for (const PassRecord& p : report.passes) report.total_iterations += p.iterations;
  report.final_q = d.per_level_q.back();
  report.wall_ms = elapsed_ms(start);
  return {std::move(d), std::move(report)};
}

}  // namespace detail

// Sequential Louvain. flatten(result.first) is the final community assignment.
inline std::pair<Dendrogram, Report> louvain(const Graph& g, const Config& cfg = {}) {
  const Mode mode = cfg.mode;
  const std::size_t cap = cfg.max_iterations_per_pass;
  return detail::run_passes(g, cfg, [mode, cap](const Graph& h, Assignment& a,
                                                double tol) {
    return local_moving(h, a, tol, mode, cap);
  });
}

struct SweepRow {
  double tolerance = 0.0;
  double decline = 0.0;
  std::size_t threads = 1;
  Report report;
};

struct ToleranceGrid {
  std::vector<double> initial;
  std::vector<double> decline;
};

// Initial tolerance 1 down to 1e-12 in steps of 10, decline factor 10 to 1e4.
inline ToleranceGrid default_tolerance_grid() {
  ToleranceGrid grid;
  for (int e = 0; e >= -12; --e) grid.initial.push_back(std::pow(10.0, e));
  for (int e = 1; e <= 4; ++e) grid.decline.push_back(std::pow(10.0, e));
  return grid;
}

// One louvain run per (initial, decline) cell, initial-major order.
inline std::vector<SweepRow> sweep_tolerance(const Graph& g, const ToleranceGrid& grid,
                                             Config cfg = {}) {
  if (grid.initial.empty() || grid.decline.empty())
    throw std::invalid_argument("sweep grid must not be empty");
  std::vector<SweepRow> rows;
  for (double initial : grid.initial) {
    for (double decline : grid.decline) {
      cfg.tolerance_initial = initial;
      cfg.tolerance_decline_factor = decline;
      rows.push_back({initial, decline, 1, louvain(g, cfg).second});
    }
  }
  return rows;
}

}  // namespace comdet
