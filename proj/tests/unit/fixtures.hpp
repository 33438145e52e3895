#pragma once

#include <memory>
#include <vector>

#include "swperc/rng.hpp"
#include "swperc/small_world.hpp"

namespace fixture {

using swperc::Node;
using swperc::NodePair;
using swperc::PercolationGraph;
using swperc::SmallWorldGraph;

// Percolation graph with the given alive ring edges (by index) and bridges.
inline PercolationGraph make(Node n, const std::vector<Node>& ring, const std::vector<NodePair>& bridges,
                             double p = 0.5) {
  auto base = std::make_shared<const SmallWorldGraph>(n, 1.0, 0, bridges);
  std::vector<std::uint8_t> alive(n, 0);
  for (Node i : ring) alive[i] = 1;
  return PercolationGraph(base, p, alive, bridges);
}

inline PercolationGraph full_ring(Node n) {
  std::vector<Node> ring(n);
  for (Node i = 0; i < n; ++i) ring[i] = i;
  return make(n, ring, {});
}

inline PercolationGraph random(Node n, double alpha, double p, std::uint64_t seed) {
  swperc::RngStream rng(seed, 0);
  auto g = std::make_shared<const SmallWorldGraph>(swperc::sample_small_world(n, alpha, rng));
  return swperc::percolate(g, p, rng);
}

}  // namespace fixture
