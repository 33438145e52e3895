#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swperc/graph.hpp"
#include "swperc/rng.hpp"
#include "swperc/small_world.hpp"

namespace swperc {

/// SIR partition sequence of a cascade. Only the infectious sets are stored;
/// susceptible and recovered sets are derived from them.
///
/// infectious[t] is I_t (ascending). The last entry is the first empty one,
/// so stabilization_time() == infectious.size() - 1.
struct CascadeTrajectory {
  Node n = 0;
  std::vector<std::vector<Node>> infectious;

  std::size_t stabilization_time() const { return infectious.size() - 1; }
  std::size_t steps() const { return infectious.size(); }
  /// R_t = I_0 ∪ ... ∪ I_{t-1}.
  std::vector<Node> recovered(std::size_t t) const;
  /// S_t = V \ (R_t ∪ I_t).
  std::vector<Node> susceptible(std::size_t t) const;
  /// |R| at stabilization.
  std::size_t total_infected() const;
};

/// Independent cascade: at step t every edge from a node of I_{t-1} to a node
/// of S_{t-1} transmits independently with its probability. Draws are taken
/// for sources in ascending order and, per source, targets in ascending
/// order. `edge_probs` is indexed by edge id of g. Throws InputError for an
/// empty or invalid seed set or a malformed probability table.
CascadeTrajectory independent_cascade(const Graph& g, std::span<const double> edge_probs,
                                      std::span<const Node> I0, RngStream& rng);
/// Edge ids follow SmallWorldGraph::edges(): ring edges, then bridges.
CascadeTrajectory independent_cascade(const SmallWorldGraph& g, std::span<const double> edge_probs,
                                      std::span<const Node> I0, RngStream& rng);

/// Independent cascade with the same probability on every edge.
CascadeTrajectory reed_frost(const Graph& g, double p, std::span<const Node> I0, RngStream& rng);
CascadeTrajectory reed_frost(const SmallWorldGraph& g, double p, std::span<const Node> I0,
                             RngStream& rng);

/// Shells of the multi-source BFS from A0 in the percolation graph.
struct ActiveSets {
  /// levels[t] holds the nodes at distance exactly t from A0, ascending;
  /// the last level is non-empty.
  std::vector<std::vector<Node>> levels;
  /// Union of all levels, ascending.
  std::vector<Node> reachable;
};

ActiveSets active_sets(const Graph& gp, std::span<const Node> A0);
ActiveSets active_sets(const PercolationGraph& gp, std::span<const Node> A0);

/// Cascade in which u infects v exactly when edge (u, v) survived in gp.
CascadeTrajectory coupled_cascade(const PercolationGraph& gp, std::span<const Node> I0);

enum class EnumMethod { percolation_enum, cascade_enum };

/// probability[k] = Pr(total infected = k), k = 0..n.
struct OutbreakDistribution {
  std::vector<double> probability;
};

constexpr std::size_t kMaxEnumEdges = 20;

/// Exact outbreak-size law on a small graph with uniform transmission
/// probability p. Throws SizeError for more than 20 edges (or more than 64
/// nodes) and InputError for bad p or seed sets.
OutbreakDistribution exact_outbreak_distribution(const Graph& g, double p, std::span<const Node> I0,
                                                 EnumMethod method);

}  // namespace swperc
