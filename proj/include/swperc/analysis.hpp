#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "swperc/graph.hpp"
#include "swperc/small_world.hpp"

namespace swperc {

/// Diameter of an induced subgraph. When the subgraph is disconnected the
/// diameter is infinite and `connected` is false; bounds are then unused.
struct DiameterBound {
  bool connected = true;
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;

  bool exact() const { return connected && lower == upper; }
  friend bool operator==(const DiameterBound&, const DiameterBound&) = default;
};

struct DiameterOptions {
  /// All-pairs BFS is used up to this many nodes, bounds above it.
  std::size_t exact_limit = 10000;
  /// BFS runs allowed for the bound computation on large sets.
  std::size_t bfs_budget = 64;
};

/// Diameter of the subgraph induced by S. Throws InputError if S is empty
/// or holds an out-of-range node.
DiameterBound diameter(const Graph& g, std::span<const Node> S, const DiameterOptions& opt = {});
DiameterBound diameter(const PercolationGraph& gp, std::span<const Node> S,
                       const DiameterOptions& opt = {});

struct ComponentOptions {
  bool with_diameter = true;
  DiameterOptions diameter;
};

/// Partition of the nodes into connected components, ordered by smallest
/// member; members of each component are ascending.
struct ComponentReport {
  Node n = 0;
  std::vector<Node> members;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> label;
  std::size_t largest_index = 0;
  std::size_t largest_size = 0;
  double largest_fraction = 0.0;
  std::optional<DiameterBound> largest_diameter;

  std::size_t count() const { return offsets.size() - 1; }
  std::span<const Node> component(std::size_t i) const {
    return {members.data() + offsets[i], members.data() + offsets[i + 1]};
  }
  std::span<const Node> component_containing(Node s) const { return component(label.at(s)); }
  std::span<const Node> largest() const { return component(largest_index); }
};

ComponentReport connected_components(const Graph& g, const ComponentOptions& opt = {});
ComponentReport connected_components(const PercolationGraph& gp, const ComponentOptions& opt = {});

/// Bookkeeping of a sequential or level-synchronous BFS.
///
/// For the sequential visit one round is one while-loop iteration (one
/// dequeue); for the parallel visit one round processes a whole frontier.
/// queue_sizes[0] and reached[0] describe the state before the first round,
/// entry t the state after round t. additions[t - 1] is W_t, the number of
/// nodes enqueued during round t.
struct BfsTrace {
  std::vector<Node> visited_order;
  std::vector<std::size_t> queue_sizes;
  std::vector<std::size_t> additions;
  /// |(R \ R0) ∪ Q| after each round.
  std::vector<std::size_t> reached;
  std::size_t rounds = 0;
  std::vector<Node> terminal_queue;
  /// R \ R0 at the end, ascending.
  std::vector<Node> terminal_removed;

  bool exhausted() const { return terminal_queue.empty(); }
};

constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

/// Sequential BFS from s where the nodes of R0 count as already removed.
/// A node is enqueued at most once. Stops after max_iterations dequeues.
/// Throws InputError when s is in R0 or out of range.
BfsTrace bfs_with_removed(const Graph& g, Node s, std::span<const Node> R0,
                          std::size_t max_iterations = kNoLimit);
BfsTrace bfs_with_removed(const PercolationGraph& gp, Node s, std::span<const Node> R0,
                          std::size_t max_iterations = kNoLimit);

/// Γ_p(s) as an ascending node list, found by the sequential BFS.
std::vector<Node> component_of(const Graph& g, Node s);
std::vector<Node> component_of(const PercolationGraph& gp, Node s);

/// Level-synchronous BFS from all of I0 with R0 removed. Each unvisited
/// neighbor of the frontier joins the next frontier once. Throws InputError
/// for empty I0, overlapping I0 and R0, or out-of-range nodes.
BfsTrace parallel_bfs(const Graph& g, std::span<const Node> I0, std::span<const Node> R0,
                      std::size_t max_rounds = kNoLimit);
BfsTrace parallel_bfs(const PercolationGraph& gp, std::span<const Node> I0,
                      std::span<const Node> R0, std::size_t max_rounds = kNoLimit);

/// Largest ring distance from s to a member of its component.
Node ring_spread(const PercolationGraph& gp, Node s);
/// ring_spread for every node at once, from a component report of gp.
std::vector<Node> ring_spread_all(const ComponentReport& report);

std::size_t max_degree(const Graph& g);
std::size_t max_degree(const PercolationGraph& gp);
std::size_t max_degree(const SmallWorldGraph& g);

struct RestartParams {
  std::size_t tau1 = 1;
  double beta_log = 1.0;
  double k_frac = 10.0;
  /// Give up after this many restarts; kNoLimit runs until no node is left.
  std::size_t max_restarts = kNoLimit;
};

enum class RestartTrigger { fraction, queue, none };

const char* to_string(RestartTrigger t);

struct RestartOutcome {
  /// Restarts performed, counting the triggering one.
  std::size_t iterations = 0;
  RestartTrigger trigger = RestartTrigger::none;
  Node last_start = 0;
  /// |Q| and |(R \ R0) ∪ Q| of the last sequential run.
  std::size_t queue_size = 0;
  std::size_t run_reached = 0;
  /// Nodes reached by the triggering exploration, including the follow-up
  /// parallel visit when the queue condition fired.
  std::size_t final_reached = 0;
  std::size_t parallel_rounds = 0;
};

/// Repeated truncated BFS: from the smallest node outside R0, run tau1
/// iterations of the removed-set BFS, fold R ∪ Q into R0 and stop once
/// |(R \ R0) ∪ Q| >= n / k_frac or |Q| >= beta_log * ln n. A queue trigger is
/// followed by a parallel BFS from Q with the earlier removed nodes excluded.
RestartOutcome restart_search(const Graph& g, const RestartParams& params);
RestartOutcome restart_search(const PercolationGraph& gp, const RestartParams& params);

}  // namespace swperc
