#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "swperc/graph.hpp"
#include "swperc/rng.hpp"

namespace swperc {

/// Shortest distance between u and v on the n-cycle.
Node ring_distance(Node n, Node u, Node v);

/// C(alpha, n) = 2 * sum_{x=2}^{floor(n/2)} x^-alpha, summed from the
/// smallest term up. Requires n >= 5 and alpha >= 0.
double normalizing_constant(Node n, double alpha);

/// Probability that the non-adjacent pair (u, v) carries a bridge:
/// d(u, v)^-alpha / C(alpha, n). Throws InputError when d(u, v) < 2.
double bridge_probability(Node n, double alpha, Node u, Node v);

/// Expected number of bridges at a fixed node. Equal to 1 for odd n and
/// slightly below 1 for even n (only n/2 antipodal pairs exist).
double expected_bridge_degree(Node n, double alpha);

/// One sample of SW(n, alpha): the n-cycle plus a set of bridges.
///
/// Ring edges are implicit, ring edge i joins i and (i + 1) mod n. Bridges
/// are stored as (min, max) pairs in ascending order.
class SmallWorldGraph {
 public:
  /// Validates and canonicalizes the bridge list. Throws InputError for
  /// n < 5, a negative alpha, a pair with ring distance < 2, or duplicates.
  SmallWorldGraph(Node n, double alpha, std::uint64_t seed, std::vector<NodePair> bridges);

  Node n() const { return n_; }
  double alpha() const { return alpha_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const NodePair> bridges() const { return bridges_; }

  bool has_bridge(Node u, Node v) const;
  bool has_edge(Node u, Node v) const;

  /// Canonical (min, max) form of ring edge i.
  static NodePair ring_edge(Node n, Node i);

  /// n ring edges (id i = ring edge i) followed by the bridges (id n + j).
  std::size_t edge_count() const { return std::size_t{n_} + bridges_.size(); }
  std::vector<NodePair> edges() const;
  Graph to_graph() const;

  friend bool operator==(const SmallWorldGraph&, const SmallWorldGraph&) = default;

 private:
  Node n_;
  double alpha_;
  std::uint64_t seed_;
  std::vector<NodePair> bridges_;
};

enum class SamplerMode {
  naive,  ///< Bernoulli trial per candidate pair; O(n^2), used as an oracle.
  fast,   ///< Binomial count per distance class plus uniform placement.
};

SmallWorldGraph sample_small_world(Node n, double alpha, RngStream& rng,
                                   SamplerMode mode = SamplerMode::fast);

/// The edges of a SmallWorldGraph that survived bond percolation.
class PercolationGraph {
 public:
  /// `ring_alive[i]` tells whether ring edge i survived. Throws InputError
  /// if the surviving sets are not subsets of the base edge sets, if p is
  /// outside [0, 1], or if p is 0 or 1 and the sets are not empty or full.
  PercolationGraph(std::shared_ptr<const SmallWorldGraph> base, double p,
                   std::vector<std::uint8_t> ring_alive, std::vector<NodePair> surviving_bridges);

  const SmallWorldGraph& base() const { return *base_; }
  const std::shared_ptr<const SmallWorldGraph>& base_ptr() const { return base_; }
  Node n() const { return base_->n(); }
  double p() const { return p_; }

  bool ring_edge_alive(Node i) const { return ring_alive_[i] != 0; }
  std::span<const std::uint8_t> ring_alive() const { return ring_alive_; }
  std::vector<NodePair> surviving_ring_edges() const;
  std::span<const NodePair> surviving_bridges() const { return bridges_; }
  bool has_edge(Node u, Node v) const;

  /// CSR view of the surviving edges: surviving ring edges in ascending
  /// ring index, then surviving bridges.
  const Graph& graph() const { return graph_; }

 private:
  std::shared_ptr<const SmallWorldGraph> base_;
  double p_;
  std::vector<std::uint8_t> ring_alive_;
  std::vector<NodePair> bridges_;
  Graph graph_;
};

/// Keeps every ring edge and every bridge independently with probability p.
/// Ring edges are drawn first in index order, then bridges in stored order.
PercolationGraph percolate(std::shared_ptr<const SmallWorldGraph> g, double p, RngStream& rng);
PercolationGraph percolate(const SmallWorldGraph& g, double p, RngStream& rng);

}  // namespace swperc
