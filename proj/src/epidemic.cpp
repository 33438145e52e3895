#include "swperc/epidemic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "swperc/errors.hpp"

namespace swperc {

namespace {

enum : std::uint8_t { kS = 0, kI = 1, kR = 2 };

std::vector<Node> seed_set(Node n, std::span<const Node> I0) {
  if (I0.empty()) throw InputError("the initial set must be non-empty");
  std::vector<Node> out(I0.begin(), I0.end());
  for (const Node u : out) {
    if (u >= n) throw InputError("initial node " + std::to_string(u) + " out of range");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("transmission probability must lie in [0, 1]");
}

}  // namespace

std::vector<Node> CascadeTrajectory::recovered(std::size_t t) const {
  std::vector<Node> out;
  for (std::size_t i = 0; i < t && i < infectious.size(); ++i) {
    out.insert(out.end(), infectious[i].begin(), infectious[i].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Node> CascadeTrajectory::susceptible(std::size_t t) const {
  std::vector<std::uint8_t> taken(n, 0);
  for (std::size_t i = 0; i <= t && i < infectious.size(); ++i) {
    for (const Node u : infectious[i]) taken[u] = 1;
  }
  std::vector<Node> out;
  for (Node u = 0; u < n; ++u) {
    if (!taken[u]) out.push_back(u);
  }
  return out;
}

std::size_t CascadeTrajectory::total_infected() const {
  std::size_t total = 0;
  for (const auto& level : infectious) total += level.size();
  return total;
}

// ---------------------------------------------------------------------------
// Stochastic cascades

CascadeTrajectory independent_cascade(const Graph& g, std::span<const double> edge_probs,
                                      std::span<const Node> I0, RngStream& rng) {
  if (edge_probs.size() != g.edge_count()) {
    throw InputError("probability table has " + std::to_string(edge_probs.size()) +
                     " entries for " + std::to_string(g.edge_count()) + " edges");
  }
  for (const double q : edge_probs) check_p(q);
  const Node n = g.node_count();
  CascadeTrajectory traj;
  traj.n = n;
  traj.infectious.push_back(seed_set(n, I0));

  std::vector<std::uint8_t> state(n, kS);
  for (const Node u : traj.infectious[0]) state[u] = kI;
  std::vector<Node> next;
  while (!traj.infectious.back().empty()) {
    const auto& current = traj.infectious.back();
    next.clear();
    for (const Node u : current) {
      const auto nb = g.neighbors(u);
      const auto ids = g.incident_edges(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const Node v = nb[i];
        // Targets already hit this step are still in S_{t-1} and still drawn.
        if (state[v] == kS || state[v] == 3) {
          if (rng.bernoulli(edge_probs[ids[i]]) && state[v] == kS) {
            state[v] = 3;
            next.push_back(v);
          }
        }
      }
    }
    for (const Node u : current) state[u] = kR;
    for (const Node v : next) state[v] = kI;
    std::sort(next.begin(), next.end());
    traj.infectious.push_back(next);
  }
  return traj;
}

CascadeTrajectory independent_cascade(const SmallWorldGraph& g, std::span<const double> edge_probs,
                                      std::span<const Node> I0, RngStream& rng) {
  return independent_cascade(g.to_graph(), edge_probs, I0, rng);
}

CascadeTrajectory reed_frost(const Graph& g, double p, std::span<const Node> I0, RngStream& rng) {
  check_p(p);
  const std::vector<double> table(g.edge_count(), p);
  return independent_cascade(g, table, I0, rng);
}

CascadeTrajectory reed_frost(const SmallWorldGraph& g, double p, std::span<const Node> I0,
                             RngStream& rng) {
  return reed_frost(g.to_graph(), p, I0, rng);
}

// ---------------------------------------------------------------------------
// Percolation view

ActiveSets active_sets(const Graph& gp, std::span<const Node> A0) {
  const Node n = gp.node_count();
  ActiveSets out;
  out.levels.push_back(seed_set(n, A0));
  std::vector<std::uint8_t> seen(n, 0);
  for (const Node u : out.levels[0]) seen[u] = 1;
  while (true) {
    std::vector<Node> shell;
    for (const Node u : out.levels.back()) {
      for (const Node v : gp.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          shell.push_back(v);
        }
      }
    }
    if (shell.empty()) break;
    std::sort(shell.begin(), shell.end());
    out.levels.push_back(std::move(shell));
  }
  for (Node u = 0; u < n; ++u) {
    if (seen[u]) out.reachable.push_back(u);
  }
  return out;
}

ActiveSets active_sets(const PercolationGraph& gp, std::span<const Node> A0) {
  return active_sets(gp.graph(), A0);
}

CascadeTrajectory coupled_cascade(const PercolationGraph& gp, std::span<const Node> I0) {
  // Walks the base graph and consults the survival of each attempted edge,
  // i.e. the transmission coins are the percolation outcomes.
  const Graph base = gp.base().to_graph();
  const Node n = gp.n();
  CascadeTrajectory traj;
  traj.n = n;
  traj.infectious.push_back(seed_set(n, I0));
  std::vector<std::uint8_t> state(n, kS);
  for (const Node u : traj.infectious[0]) state[u] = kI;
  while (!traj.infectious.back().empty()) {
    std::vector<Node> next;
    for (const Node u : traj.infectious.back()) {
      for (const Node v : base.neighbors(u)) {
        if (state[v] == kS && gp.has_edge(u, v)) {
          state[v] = 3;
          next.push_back(v);
        }
      }
    }
    for (const Node u : traj.infectious.back()) state[u] = kR;
    for (const Node v : next) state[v] = kI;
    std::sort(next.begin(), next.end());
    traj.infectious.push_back(std::move(next));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Exact enumeration

namespace {

struct SmallGraph {
  Node n;
  std::vector<NodePair> edges;
  std::vector<std::uint64_t> adj;  // neighbor bitmask per node
};

SmallGraph small_graph(const Graph& g) {
  if (g.edge_count() > kMaxEnumEdges) {
    throw SizeError("exact enumeration supports at most " + std::to_string(kMaxEnumEdges) +
                    " edges, got " + std::to_string(g.edge_count()));
  }
  if (g.node_count() > 64) throw SizeError("exact enumeration supports at most 64 nodes");
  SmallGraph s{g.node_count(), {g.edges().begin(), g.edges().end()}, std::vector<std::uint64_t>(g.node_count(), 0)};
  for (const auto& [u, v] : s.edges) {
    s.adj[u] |= std::uint64_t{1} << v;
    s.adj[v] |= std::uint64_t{1} << u;
  }
  return s;
}

std::uint64_t mask_of(std::span<const Node> nodes) {
  std::uint64_t m = 0;
  for (const Node u : nodes) m |= std::uint64_t{1} << u;
  return m;
}

// p^k (1 - p)^(m - k) for k = 0..m.
std::vector<double> binomial_weights(double p, std::size_t m) {
  std::vector<double> w(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    w[k] = std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(m - k));
  }
  return w;
}

void percolation_enum(const SmallGraph& s, double p, std::uint64_t seeds, std::vector<double>& acc) {
  const std::size_t m = s.edges.size();
  const auto w = binomial_weights(p, m);
  std::vector<std::uint64_t> adj(s.n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::fill(adj.begin(), adj.end(), 0);
    for (std::size_t e = 0; e < m; ++e) {
      if (mask >> e & 1) {
        adj[s.edges[e].first] |= std::uint64_t{1} << s.edges[e].second;
        adj[s.edges[e].second] |= std::uint64_t{1} << s.edges[e].first;
      }
    }
    std::uint64_t reached = seeds, frontier = seeds;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
      frontier = next & ~reached;
      reached |= frontier;
    }
    acc[std::popcount(reached)] += w[std::popcount(mask)];
  }
}

// Each branch fixes the outcomes of all attempts of one step.
void cascade_enum(const SmallGraph& s, double p, std::uint64_t infected, std::uint64_t active,
                  double weight, std::vector<double>& acc) {
  if (!active) {
    acc[std::popcount(infected)] += weight;
    return;
  }
  std::vector<std::pair<Node, Node>> attempts;
  for (std::uint64_t a = active; a; a &= a - 1) {
    const Node u = static_cast<Node>(std::countr_zero(a));
    for (std::uint64_t t = s.adj[u] & ~infected; t; t &= t - 1) {
      attempts.emplace_back(u, static_cast<Node>(std::countr_zero(t)));
    }
  }
  const std::size_t k = attempts.size();
  const auto w = binomial_weights(p, k);
  for (std::uint64_t outcome = 0; outcome < (std::uint64_t{1} << k); ++outcome) {
    std::uint64_t next = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (outcome >> i & 1) next |= std::uint64_t{1} << attempts[i].second;
    }
    const double wt = weight * w[std::popcount(outcome)];
    if (wt == 0.0) continue;
    cascade_enum(s, p, infected | next, next, wt, acc);
  }
}

}  // namespace

OutbreakDistribution exact_outbreak_distribution(const Graph& g, double p, std::span<const Node> I0,
                                                 EnumMethod method) {
  check_p(p);
  const SmallGraph s = small_graph(g);
  const auto seeds = seed_set(s.n, I0);
  const std::uint64_t seed_mask = mask_of(seeds);
  OutbreakDistribution d;
  d.probability.assign(std::size_t{s.n} + 1, 0.0);
  if (method == EnumMethod::percolation_enum) {
    percolation_enum(s, p, seed_mask, d.probability);
  } else {
    cascade_enum(s, p, seed_mask, seed_mask, 1.0, d.probability);
  }
  return d;
}

}  // namespace swperc
