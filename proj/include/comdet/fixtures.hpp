#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "comdet/community.hpp"
#include "comdet/graph.hpp"

namespace comdet::fixtures {

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// `count` disjoint K_k cliques; the first `bridges` consecutive pairs are joined
// by a single edge from the last vertex of clique i to the first of clique i+1.
inline EdgeList cliques(std::size_t k, std::size_t count, std::size_t bridges = 0) {
  if (k < 1 || count < 1) throw std::invalid_argument("cliques: k and count must be >= 1");
  if (bridges > count - 1)
    throw std::invalid_argument("cliques: at most count-1 bridges");
  EdgeList out;
  out.n_declared = k * count;
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        out.entries.push_back({static_cast<VertexId>(c * k + i),
                               static_cast<VertexId>(c * k + j), 1.0});
  for (std::size_t c = 0; c < bridges; ++c)
    out.entries.push_back({static_cast<VertexId>(c * k + k - 1),
                           static_cast<VertexId>((c + 1) * k), 1.0});
  return out;
}

// `count` K_k cliques joined in a ring by single edges.
inline EdgeList ring_of_cliques(std::size_t k, std::size_t count) {
  if (k < 1 || count < 2)
    throw std::invalid_argument("ring-of-cliques: k >= 1 and count >= 2 required");
  EdgeList out = cliques(k, count, count - 1);
  if (count > 2)
    out.entries.push_back({static_cast<VertexId>((count - 1) * k + k - 1), 0, 1.0});
  return out;
}

// Erdos-Renyi G(n, p).
inline EdgeList random_graph(std::size_t n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("random: p must be in [0, 1]");
  std::mt19937_64 rng(seed);
  EdgeList out;
  out.n_declared = n;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (detail::unit(rng) < p)
        out.entries.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), 1.0});
  return out;
}

// Planted partition: `groups` equal blocks, edge probability p_in inside a
// block and p_out across blocks.
inline EdgeList planted_partition(std::size_t n, std::size_t groups, double p_in,
                                  double p_out, std::uint64_t seed) {
  if (n < 1 || groups < 1 || groups > n)
    throw std::invalid_argument("planted: need 1 <= groups <= n");
  std::mt19937_64 rng(seed);
  EdgeList out;
  out.n_declared = n;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = (u % groups == v % groups) ? p_in : p_out;
      if (detail::unit(rng) < p)
        out.entries.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), 1.0});
    }
  return out;
}

// Uniformly random labels in [0, communities).
inline Assignment random_assignment(std::size_t n, std::size_t communities,
                                    std::mt19937_64& rng) {
  Assignment a;
  a.labels.resize(n);
  for (auto& c : a.labels) c = static_cast<CommunityId>(rng() % communities);
  return a;
}

}  // namespace comdet::fixtures
