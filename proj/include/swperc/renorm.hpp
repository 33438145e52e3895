#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "swperc/analysis.hpp"
#include "swperc/small_world.hpp"

namespace swperc {

using SuperNode = std::uint32_t;
using SuperPair = std::pair<SuperNode, SuperNode>;

/// Coarse-grained view of a percolation graph: nodes are grouped into
/// floor(n / ell) consecutive intervals starting at `offset`, the last one
/// absorbing the remainder. Interval j starts at offset + j * ell (mod n).
class EllGraph {
 public:
  /// Throws InputError unless 1 <= ell <= n / 3 and offset < n.
  EllGraph(const PercolationGraph& gp, Node ell, Node offset = 0);

  Node n() const { return n_; }
  Node ell() const { return ell_; }
  Node offset() const { return offset_; }
  SuperNode supernodes() const { return m_; }

  SuperNode interval_of(Node u) const;
  Node interval_begin(SuperNode j) const;
  Node interval_size(SuperNode j) const;

  /// True iff the two intervals are neighbors on the ring of intervals.
  bool ring_adjacent(SuperNode h, SuperNode k) const;

  /// Links as (min, max) pairs, ascending.
  const std::vector<SuperPair>& super_edges() const { return super_edges_; }
  const std::vector<SuperPair>& super_bridges() const { return super_bridges_; }
  bool has_link(SuperNode h, SuperNode k) const;

  /// All links as a graph over supernodes; ring links are edge ids
  /// 0..|super_edges|-1, super-bridges follow.
  const Graph& graph() const { return graph_; }

 private:
  Node n_, ell_, offset_;
  SuperNode m_;
  std::vector<SuperPair> super_edges_;
  std::vector<SuperPair> super_bridges_;
  Graph graph_;
};

/// Which ring neighbor of a super-bridge endpoint is its "left" one.
enum class LeftOrientation { decreasing, increasing };

/// Trace of the supernode BFS. Entry t - 1 of each per-iteration vector
/// belongs to while-loop iteration t.
struct SuperVisit {
  std::vector<SuperNode> visit_order;
  std::vector<std::size_t> x_counts;   ///< supernodes enqueued through super-edges
  std::vector<std::size_t> y_counts;   ///< supernodes enqueued through super-bridges
  std::vector<std::size_t> additions;  ///< all supernodes enqueued
  std::vector<std::size_t> queue_sizes;  ///< |Q| before iteration 1, then after each
  std::size_t iterations = 0;
};

/// BFS over the ell-graph that, next to every super-bridge endpoint Y, also
/// enqueues Y's left ring neighbor when that neighbor is linked to Y. A
/// supernode counts as visited once it has been enqueued.
SuperVisit super_component_of(const EllGraph& eg, SuperNode s,
                              LeftOrientation left = LeftOrientation::decreasing);

/// Number of components of gp whose size exceeds the total node count of
/// the intervals in the super-component containing them.
std::size_t coarsening_violations(const ComponentReport& components, const EllGraph& eg);

/// Exact probability that a fixed node has at least one bridge longer than
/// x. Throws InputError for x < 1.
double bridge_length_tail(Node n, double alpha, Node x);

struct IsolationRates {
  std::size_t trials = 0;
  std::size_t isolated = 0;
  std::size_t superbridge = 0;
  double rate_isolated = 0.0;
  double rate_superbridge = 0.0;
  double se_isolated = 0.0;
  double se_superbridge = 0.0;
  /// (1 - p)^2 e^{-2/(alpha - 2)}; zero when alpha <= 2.
  double isolated_lower_bound = 0.0;
  /// 2 / ((alpha - 2) ell^{alpha - 2}); infinite when alpha <= 2.
  double superbridge_upper_bound = 0.0;
  std::size_t coarsening_violations = 0;

  bool isolated_bound_holds(double sigmas = 3.0) const;
  bool superbridge_bound_holds(double sigmas = 3.0) const;
};

/// Monte-Carlo rates for supernode 0 of the ell-graph (offset 0) over fresh
/// SW(n, alpha) samples percolated with p; trial t uses stream t of `seed`.
IsolationRates supernode_isolation_rate(Node n, double alpha, double p, Node ell,
                                        std::size_t trials, std::uint64_t seed);

struct ScheduleEntry {
  int k = 0;
  boost::multiprecision::cpp_int N, C, D;
  double delta = 0.0;
  double eps = 0.0;
  double p = 0.0;
};

struct RenormSchedule {
  double alpha = 0.0;
  double beta = 0.0;
  double n = 0.0;
  double p = 0.0;
  int h = 0;
  int m = 0;
  /// C(alpha, n) used in the p_k recurrence.
  double normalizer = 0.0;
  /// sigma solves 1 - sigma^{N_h} = 1/50; one_minus_sigma keeps its precision.
  double sigma = 0.0;
  double one_minus_sigma = 0.0;
  /// Entries k = h..m; empty when m < h.
  std::vector<ScheduleEntry> entries;
};

/// Schedule for the interval renormalization with nominal size n (may be
/// far beyond what can be sampled). Throws InputError unless 1 < alpha < 2,
/// n >= 5 and p in [0, 1].
RenormSchedule make_schedule(double alpha, double n, double p);

/// C(alpha, n) for a nominal real n: direct sum up to 10^7, zeta-based
/// with an Euler-Maclaurin tail above.
double normalizing_constant_nominal(double n, double alpha);

/// CSV with columns k,N_k,C_k,delta_k,eps_k,D_k,p_k.
void write_schedule_csv(std::ostream& out, const RenormSchedule& s);

struct IntervalEvent {
  bool holds = false;
  /// Largest component of the interval-internal subgraph, ascending ids.
  std::vector<Node> witness;
  DiameterBound witness_diameter;
};

/// Checks the event "some set of >= (1 - eps) * length nodes of the arc
/// [begin, begin + length) has induced diameter <= D", using only edges with
/// both ends inside the arc. Throws InputError for an empty or too long arc.
IntervalEvent interval_event_check(const PercolationGraph& gp, Node begin, Node length, double eps,
                                   std::uint64_t D, const DiameterOptions& opt = {});

}  // namespace swperc
