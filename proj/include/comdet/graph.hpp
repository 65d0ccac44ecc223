#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace comdet {

using VertexId = std::uint32_t;
using Weight = double;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Raw input before preprocessing. Ids are 0-based and must be < n_declared.
struct EdgeList {
  std::size_t n_declared = 0;
  std::vector<Edge> entries;
};

struct BuildOptions {
  bool symmetrize = true;
  bool add_self_loops = false;
  Weight default_weight = 1.0;
};

// Immutable undirected weighted graph in CSR form.
//
// Every undirected edge {u,v} with u != v is stored as the two arcs (u,v,w)
// and (v,u,w); a self-loop is stored as a single arc (u,u,w) and counts once
// in the weighted degree of u. Rows are sorted by target.
class Graph {
 public:
  Graph() = default;

  // Validates and adopts CSR arrays. Throws GraphError on any broken invariant.
  static Graph from_csr(std::size_t n, std::vector<std::size_t> offsets,
                        std::vector<VertexId> targets,
                        std::vector<Weight> weights) {
    Graph g;
    g.n_ = n;
    g.offsets_ = std::move(offsets);
    g.targets_ = std::move(targets);
    g.weights_ = std::move(weights);
    g.finish();
    return g;
  }

  std::size_t num_vertices() const { return n_; }
  std::size_t num_arcs() const { return targets_.size(); }

  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const VertexId> targets() const { return targets_; }
  std::span<const Weight> weights() const { return weights_; }
  std::span<const Weight> degrees() const { return degrees_; }

  std::span<const VertexId> neighbors(VertexId u) const {
    return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::span<const Weight> neighbor_weights(VertexId u) const {
    return {weights_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }

  Weight degree(VertexId u) const { return degrees_[u]; }
  Weight self_loop(VertexId u) const { return self_loops_[u]; }

  // 2m: the sum of all weighted degrees.
  Weight total() const { return total_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ &&
           a.targets_ == b.targets_ && a.weights_ == b.weights_;
  }

 private:
  void finish() {
    if (n_ == 0) throw GraphError("graph has no vertices");
    if (offsets_.size() != n_ + 1 || offsets_.front() != 0)
      throw GraphError("offsets array must have n+1 entries starting at 0");
    if (offsets_.back() != targets_.size() || targets_.size() != weights_.size())
      throw GraphError("offsets[n] must equal the number of arcs");
    degrees_.assign(n_, 0.0);
    self_loops_.assign(n_, 0.0);
    for (std::size_t u = 0; u < n_; ++u) {
      if (offsets_[u] > offsets_[u + 1])
        throw GraphError("offsets must be non-decreasing");
      Weight k = 0.0;
      for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i) {
        if (targets_[i] >= n_) throw GraphError("arc target out of range");
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
          throw GraphError("arc weights must be positive and finite");
        if (i > offsets_[u] && targets_[i] <= targets_[i - 1])
          throw GraphError("row targets must be strictly increasing");
        if (targets_[i] == u) self_loops_[u] = weights_[i];
        k += weights_[i];
      }
      degrees_[u] = k;
    }
    total_ = 0.0;
    for (Weight k : degrees_) total_ += k;
    if (!(total_ > 0.0)) throw GraphError("graph has zero total weight");
  }

  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> targets_;
  std::vector<Weight> weights_;
  std::vector<Weight> degrees_;
  std::vector<Weight> self_loops_;
  Weight total_ = 0.0;
};

// True when every arc (u,v,w) has a mirror (v,u,w).
inline bool is_symmetric(const Graph& g) {
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    auto nbrs = g.neighbors(u);
    auto ws = g.neighbor_weights(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const VertexId v = nbrs[i];
      auto back = g.neighbors(v);
      auto it = std::lower_bound(back.begin(), back.end(), u);
      if (it == back.end() || *it != u) return false;
      if (g.neighbor_weights(v)[static_cast<std::size_t>(it - back.begin())] != ws[i])
        return false;
    }
  }
  return true;
}

// Applies the dataset conventions (reverse-arc duplication, self-loop
// insertion) and merges parallel arcs by summing their weights.
inline Graph build_graph(const EdgeList& edges, const BuildOptions& opts = {}) {
  const std::size_t n = edges.n_declared;
  if (n == 0) throw GraphError("graph has no vertices");

  std::vector<Edge> arcs;
  arcs.reserve(edges.entries.size() * (opts.symmetrize ? 2 : 1) +
               (opts.add_self_loops ? n : 0));
  for (const Edge& e : edges.entries) {
    if (e.u >= n || e.v >= n) throw GraphError("edge endpoint out of range");
    if (!std::isfinite(e.w)) throw GraphError("edge weight is not finite");
    arcs.push_back(e);
    if (opts.symmetrize && e.u != e.v) arcs.push_back({e.v, e.u, e.w});
  }
  if (opts.add_self_loops) {
    std::vector<bool> has_loop(n, false);
    for (const Edge& e : edges.entries)
      if (e.u == e.v) has_loop[e.u] = true;
    for (VertexId u = 0; u < n; ++u)
      if (!has_loop[u]) arcs.push_back({u, u, opts.default_weight});
  }

  std::stable_sort(arcs.begin(), arcs.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<VertexId> targets;
  std::vector<Weight> weights;
  targets.reserve(arcs.size());
  weights.reserve(arcs.size());
  for (std::size_t i = 0; i < arcs.size();) {
    const Edge& head = arcs[i];
    Weight w = 0.0;
    std::size_t j = i;
    for (; j < arcs.size() && arcs[j].u == head.u && arcs[j].v == head.v; ++j)
      w += arcs[j].w;
    targets.push_back(head.v);
    weights.push_back(w);
    ++offsets[head.u + 1];
    i = j;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  Graph g = Graph::from_csr(n, std::move(offsets), std::move(targets),
                            std::move(weights));
  if (!opts.symmetrize && !is_symmetric(g))
    throw GraphError("input is not symmetric and symmetrization is disabled");
  return g;
}

struct GraphStats {
  std::size_t vertices = 0;
  std::size_t undirected_edges = 0;  // stored arcs
  double avg_degree = 0.0;
};

inline GraphStats graph_stats(const Graph& g) {
  GraphStats s;
  s.vertices = g.num_vertices();
  s.undirected_edges = g.num_arcs();
  s.avg_degree = static_cast<double>(s.undirected_edges) /
                 static_cast<double>(s.vertices);
  return s;
}

}  // namespace comdet
