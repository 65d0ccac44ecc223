#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "comdet/graph.hpp"

namespace comdet {

using CommunityId = VertexId;

// Per-vertex community labels.
struct Assignment {
  std::vector<CommunityId> labels;

  std::size_t size() const { return labels.size(); }
  CommunityId operator[](std::size_t u) const { return labels[u]; }
  CommunityId& operator[](std::size_t u) { return labels[u]; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

inline Assignment singleton_assignment(std::size_t n) {
  Assignment a;
  a.labels.resize(n);
  for (std::size_t u = 0; u < n; ++u) a.labels[u] = static_cast<CommunityId>(u);
  return a;
}

inline void check_assignment(const Graph& g, const Assignment& a) {
  if (a.size() != g.num_vertices())
    throw std::invalid_argument("assignment length does not match vertex count");
  for (CommunityId c : a.labels)
    if (c >= g.num_vertices())
      throw std::invalid_argument("community label out of range");
}

// Relabels communities to [0, C) in order of first occurrence.
inline std::pair<Assignment, std::size_t> normalize(const Assignment& a) {
  constexpr CommunityId kUnset = ~CommunityId{0};
  std::size_t bound = 0;
  for (CommunityId c : a.labels) bound = std::max<std::size_t>(bound, c + 1);
  std::vector<CommunityId> remap(bound, kUnset);
  Assignment out;
  out.labels.reserve(a.size());
  CommunityId next = 0;
  for (CommunityId c : a.labels) {
    if (remap[c] == kUnset) remap[c] = next++;
    out.labels.push_back(remap[c]);
  }
  return {std::move(out), next};
}

// Per-community bookkeeping behind constant-time gain evaluation.
//
// sigma_tot[c] is the summed weighted degree of the members of c; sigma_in[c]
// is the weight of arcs with both endpoints in c, where a symmetric pair
// contributes twice and a self-loop arc once.
struct Aggregates {
  std::vector<Weight> sigma_tot;
  std::vector<Weight> sigma_in;
  std::vector<std::size_t> sizes;

  // Moves u from `from` to `to`. k_from is the weight of u's non-loop arcs
  // into `from` excluding u itself, k_to the same for `to`.
  void move(Weight k_u, Weight self_loop, Weight k_from, Weight k_to,
            CommunityId from, CommunityId to) {
    if (from == to) return;
    sigma_tot[from] -= k_u;
    sigma_tot[to] += k_u;
    sigma_in[from] -= 2.0 * k_from + self_loop;
    sigma_in[to] += 2.0 * k_to + self_loop;
    --sizes[from];
    ++sizes[to];
  }
};

inline Aggregates community_aggregates(const Graph& g, const Assignment& a) {
  check_assignment(g, a);
  const std::size_t n = g.num_vertices();
  Aggregates agg;
  agg.sigma_tot.assign(n, 0.0);
  agg.sigma_in.assign(n, 0.0);
  agg.sizes.assign(n, 0);
  for (VertexId u = 0; u < n; ++u) {
    const CommunityId c = a[u];
    agg.sigma_tot[c] += g.degree(u);
    ++agg.sizes[c];
    auto nbrs = g.neighbors(u);
    auto ws = g.neighbor_weights(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      if (a[nbrs[i]] == c) agg.sigma_in[c] += ws[i];
  }
  return agg;
}

// Q from precomputed aggregates; total is 2m.
inline double modularity_from_aggregates(const Aggregates& agg, Weight total) {
  double q = 0.0;
  for (std::size_t c = 0; c < agg.sigma_tot.size(); ++c) {
    const double share = agg.sigma_tot[c] / total;
    q += agg.sigma_in[c] / total - share * share;
  }
  return q;
}

// Communities are summed in order of first occurrence, so relabeling an
// assignment leaves the result bit-identical.
inline double modularity(const Graph& g, const Assignment& a) {
  const Aggregates agg = community_aggregates(g, a);
  const double total = g.total();
  std::vector<bool> seen(g.num_vertices(), false);
  double q = 0.0;
  for (CommunityId c : a.labels) {
    if (seen[c]) continue;
    seen[c] = true;
    const double share = agg.sigma_tot[c] / total;
    q += agg.sigma_in[c] / total - share * share;
  }
  return q;
}

// Independent reference: one full scan of the arc and vertex arrays per
// community, no shared state with the aggregate path.
inline double modularity_bruteforce(const Graph& g, const Assignment& a) {
  check_assignment(g, a);
  const std::set<CommunityId> communities(a.labels.begin(), a.labels.end());
  const auto offsets = g.offsets();
  const auto targets = g.targets();
  const auto weights = g.weights();
  const double two_m = g.total();
  double q = 0.0;
  for (CommunityId c : communities) {
    double internal = 0.0;
    double degree_mass = 0.0;
    for (std::size_t u = 0; u < g.num_vertices(); ++u) {
      if (a[u] != c) continue;
      for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) {
        degree_mass += weights[i];
        if (a[targets[i]] == c) internal += weights[i];
      }
    }
    q += internal / two_m - (degree_mass / two_m) * (degree_mass / two_m);
  }
  return q;
}

// Gain of moving a vertex with weighted degree k_u out of `from` into a
// different community `to`. k_from and sigma_from describe `from` with the
// vertex still inside; total is 2m.
inline double move_gain(Weight k_u, Weight k_from, Weight k_to,
                        Weight sigma_from, Weight sigma_to, Weight total) {
  const double m = total / 2.0;
  return (k_to - k_from) / m -
         k_u * (sigma_to - (sigma_from - k_u)) / (2.0 * m * m);
}

// Exact change in modularity when u moves from `from` to `to`. k_to maps a
// community to the weight of u's non-loop arcs into it; absent entries are 0.
inline double delta_modularity(const Graph& g, const Assignment& a,
                               const Aggregates& agg, VertexId u,
                               const std::map<CommunityId, Weight>& k_to,
                               CommunityId from, CommunityId to) {
  if (a[u] != from)
    throw std::invalid_argument("vertex is not a member of the source community");
  if (to == from) return 0.0;
  auto lookup = [&](CommunityId c) {
    auto it = k_to.find(c);
    return it == k_to.end() ? 0.0 : it->second;
  };
  return move_gain(g.degree(u), lookup(from), lookup(to), agg.sigma_tot[from],
                   agg.sigma_tot[to], g.total());
}

// levels[k] maps level-k vertices to level-(k+1) super-vertices.
struct Dendrogram {
  std::vector<Assignment> levels;
  std::vector<double> per_level_q;
};

inline std::size_t community_count(const Assignment& a) {
  std::size_t bound = 0;
  for (CommunityId c : a.labels) bound = std::max<std::size_t>(bound, c + 1);
  return bound;
}

// Composes all levels into a single assignment over the original vertices.
inline Assignment flatten(const Dendrogram& d) {
  if (d.levels.empty()) throw std::invalid_argument("dendrogram has no levels");
  Assignment out = d.levels.front();
  for (std::size_t k = 1; k < d.levels.size(); ++k) {
    const Assignment& level = d.levels[k];
    if (level.size() != community_count(d.levels[k - 1]))
      throw std::invalid_argument("dendrogram level sizes are inconsistent");
    for (CommunityId& c : out.labels) c = level[c];
  }
  return out;
}

}  // namespace comdet
