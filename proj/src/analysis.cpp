#include "swperc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "swperc/errors.hpp"

namespace swperc {

namespace {

constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();

void check_node(const Graph& g, Node u) {
  if (u >= g.node_count()) {
    throw InputError("node " + std::to_string(u) + " out of range for n = " +
                     std::to_string(g.node_count()));
  }
}

// BFS restricted to nodes with in_set[u] != 0. dist must be kUnseen on every
// node; it is restored before returning.
struct RestrictedBfs {
  const Graph& g;
  const std::vector<std::uint8_t>& in_set;
  std::vector<std::uint32_t> dist;
  std::vector<Node> order;

  RestrictedBfs(const Graph& graph, const std::vector<std::uint8_t>& mask)
      : g(graph), in_set(mask), dist(graph.node_count(), kUnseen) {}

  // Returns (eccentricity, farthest node with the smallest id); order holds
  // the visit sequence until the next call.
  std::pair<std::uint32_t, Node> run(Node src) {
    for (const Node u : order) dist[u] = kUnseen;
    order.clear();
    dist[src] = 0;
    order.push_back(src);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const Node w = order[head];
      for (const Node x : g.neighbors(w)) {
        if (in_set[x] && dist[x] == kUnseen) {
          dist[x] = dist[w] + 1;
          order.push_back(x);
        }
      }
    }
    const std::uint32_t ecc = dist[order.back()];
    Node far = order.back();
    for (auto it = order.rbegin(); it != order.rend() && dist[*it] == ecc; ++it) far = std::min(far, *it);
    return {ecc, far};
  }

  // Node halfway along a shortest path from the last source to `to`.
  Node midpoint(Node to) const {
    Node cur = to;
    const std::uint32_t half = dist[to] / 2;
    while (dist[cur] > half) {
      for (const Node x : g.neighbors(cur)) {
        if (in_set[x] && dist[x] != kUnseen && dist[x] + 1 == dist[cur]) {
          cur = x;
          break;
        }
      }
    }
    return cur;
  }
};

// Shared sequential visit. state: 0 free, 1 removed, 2 visited, 3 queued.
struct Visit {
  const Graph& g;
  std::vector<std::uint8_t>& state;
  std::vector<Node> queue;  // every node ever enqueued, FIFO from `head`
  std::size_t head = 0;

  Visit(const Graph& graph, std::vector<std::uint8_t>& st) : g(graph), state(st) {}

  void sequential(Node s, std::size_t max_iterations, BfsTrace& t) {
    queue.assign(1, s);
    head = 0;
    state[s] = 3;
    t.queue_sizes.push_back(1);
    t.reached.push_back(1);
    while (head < queue.size() && t.rounds < max_iterations) {
      const Node w = queue[head++];
      state[w] = 2;
      t.visited_order.push_back(w);
      std::size_t added = 0;
      for (const Node x : g.neighbors(w)) {
        if (state[x] == 0) {
          state[x] = 3;
          queue.push_back(x);
          ++added;
        }
      }
      ++t.rounds;
      t.additions.push_back(added);
      t.queue_sizes.push_back(queue.size() - head);
      t.reached.push_back(queue.size());
    }
    t.terminal_queue.assign(queue.begin() + static_cast<std::ptrdiff_t>(head), queue.end());
    t.terminal_removed = t.visited_order;
    std::sort(t.terminal_removed.begin(), t.terminal_removed.end());
  }

  // I0 must already be marked 3 and listed in `frontier`.
  void parallel(std::vector<Node> frontier, std::size_t max_rounds, BfsTrace& t) {
    std::size_t total = frontier.size();
    t.queue_sizes.push_back(frontier.size());
    t.reached.push_back(total);
    std::vector<Node> next;
    while (!frontier.empty() && t.rounds < max_rounds) {
      next.clear();
      for (const Node w : frontier) {
        state[w] = 2;
        t.visited_order.push_back(w);
        for (const Node x : g.neighbors(w)) {
          if (state[x] == 0) {
            state[x] = 3;
            next.push_back(x);
          }
        }
      }
      ++t.rounds;
      total += next.size();
      t.additions.push_back(next.size());
      t.queue_sizes.push_back(next.size());
      t.reached.push_back(total);
      frontier.swap(next);
    }
    t.terminal_queue = frontier;
    t.terminal_removed = t.visited_order;
    std::sort(t.terminal_removed.begin(), t.terminal_removed.end());
  }
};

std::vector<std::uint8_t> removed_mask(const Graph& g, std::span<const Node> R0) {
  std::vector<std::uint8_t> state(g.node_count(), 0);
  for (const Node u : R0) {
    check_node(g, u);
    state[u] = 1;
  }
  return state;
}

struct UnionFind {
  std::vector<Node> parent;
  std::vector<Node> size;
  explicit UnionFind(Node n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), Node{0});
  }
  Node find(Node x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(Node a, Node b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

// Ring distance from a to the nearest element of the sorted, non-empty set m.
Node nearest_on_ring(Node n, std::span<const Node> m, Node a) {
  auto it = std::lower_bound(m.begin(), m.end(), a);
  const Node after = it == m.end() ? m.front() : *it;
  const Node before = it == m.begin() ? m.back() : *(it - 1);
  return std::min(ring_distance(n, a, after), ring_distance(n, a, before));
}

}  // namespace

// ---------------------------------------------------------------------------
// Diameter

DiameterBound diameter(const Graph& g, std::span<const Node> S, const DiameterOptions& opt) {
  if (S.empty()) throw InputError("diameter of an empty node set");
  std::vector<std::uint8_t> in_set(g.node_count(), 0);
  std::vector<Node> nodes;
  nodes.reserve(S.size());
  for (const Node u : S) {
    check_node(g, u);
    if (!in_set[u]) {
      in_set[u] = 1;
      nodes.push_back(u);
    }
  }

  RestrictedBfs bfs(g, in_set);
  auto [ecc0, far0] = bfs.run(nodes.front());
  if (bfs.order.size() != nodes.size()) return {false, 0, 0};
  if (nodes.size() == 1) return {true, 0, 0};

  if (nodes.size() <= opt.exact_limit) {
    std::uint64_t best = ecc0;
    for (std::size_t i = 1; i < nodes.size(); ++i) best = std::max<std::uint64_t>(best, bfs.run(nodes[i]).first);
    return {true, best, best};
  }

  // Four sweeps pick a central node u, then fringe levels of u are scanned
  // from the outside in until the bounds meet or the budget is spent.
  std::size_t budget = std::max<std::size_t>(opt.bfs_budget, 1);
  std::size_t used = 1;
  std::uint64_t lower = ecc0;
  Node a = far0;
  Node center = nodes.front();
  for (int sweep = 0; sweep < 2 && used + 2 <= budget; ++sweep) {
    const auto [ecc_a, b] = bfs.run(a);
    ++used;
    lower = std::max<std::uint64_t>(lower, ecc_a);
    center = bfs.midpoint(b);
    const auto [ecc_c, far_c] = bfs.run(center);
    ++used;
    lower = std::max<std::uint64_t>(lower, ecc_c);
    a = far_c;
  }
  if (used >= budget) {
    const auto [ecc_c, far_c] = bfs.run(center);
    (void)far_c;
    return {true, lower, std::max<std::uint64_t>(lower, 2ULL * ecc_c)};
  }

  const auto [ecc_u, far_u] = bfs.run(center);
  (void)far_u;
  ++used;
  lower = std::max<std::uint64_t>(lower, ecc_u);
  std::vector<std::vector<Node>> levels(ecc_u + 1);
  for (const Node v : bfs.order) levels[bfs.dist[v]].push_back(v);

  std::uint64_t upper = std::max<std::uint64_t>(lower, 2ULL * ecc_u);
  for (std::uint32_t i = ecc_u; i >= 1 && upper > lower; --i) {
    std::uint64_t level_max = 0;
    bool complete = true;
    for (const Node v : levels[i]) {
      if (used >= budget) {
        complete = false;
        break;
      }
      level_max = std::max<std::uint64_t>(level_max, bfs.run(v).first);
      ++used;
    }
    lower = std::max(lower, level_max);
    if (!complete) break;
    if (lower > 2ULL * (i - 1)) {
      upper = lower;
      break;
    }
    upper = std::max<std::uint64_t>(lower, 2ULL * (i - 1));
  }
  return {true, lower, upper};
}

DiameterBound diameter(const PercolationGraph& gp, std::span<const Node> S, const DiameterOptions& opt) {
  return diameter(gp.graph(), S, opt);
}

// ---------------------------------------------------------------------------
// Components

ComponentReport connected_components(const Graph& g, const ComponentOptions& opt) {
  const Node n = g.node_count();
  UnionFind uf(n);
  for (const auto& [u, v] : g.edges()) uf.unite(u, v);

  ComponentReport r;
  r.n = n;
  r.label.assign(n, 0);
  std::vector<std::uint32_t> root_label(n, kUnseen);
  std::vector<std::size_t> sizes;
  for (Node u = 0; u < n; ++u) {
    const Node root = uf.find(u);
    if (root_label[root] == kUnseen) {
      root_label[root] = static_cast<std::uint32_t>(sizes.size());
      sizes.push_back(0);
    }
    r.label[u] = root_label[root];
    ++sizes[r.label[u]];
  }
  r.offsets.assign(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) r.offsets[i + 1] = r.offsets[i] + sizes[i];
  r.members.resize(n);
  std::vector<std::size_t> cursor(r.offsets.begin(), r.offsets.end() - 1);
  for (Node u = 0; u < n; ++u) r.members[cursor[r.label[u]]++] = u;

  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] > r.largest_size) {
      r.largest_size = sizes[i];
      r.largest_index = i;
    }
  }
  r.largest_fraction = n == 0 ? 0.0 : static_cast<double>(r.largest_size) / n;
  if (opt.with_diameter && n > 0) r.largest_diameter = diameter(g, r.largest(), opt.diameter);
  return r;
}

ComponentReport connected_components(const PercolationGraph& gp, const ComponentOptions& opt) {
  return connected_components(gp.graph(), opt);
}

// ---------------------------------------------------------------------------
// BFS visits

BfsTrace bfs_with_removed(const Graph& g, Node s, std::span<const Node> R0, std::size_t max_iterations) {
  check_node(g, s);
  auto state = removed_mask(g, R0);
  if (state[s]) throw InputError("source " + std::to_string(s) + " is in the removed set");
  BfsTrace t;
  Visit(g, state).sequential(s, max_iterations, t);
  return t;
}

BfsTrace bfs_with_removed(const PercolationGraph& gp, Node s, std::span<const Node> R0,
                          std::size_t max_iterations) {
  return bfs_with_removed(gp.graph(), s, R0, max_iterations);
}

std::vector<Node> component_of(const Graph& g, Node s) {
  return bfs_with_removed(g, s, {}).terminal_removed;
}

std::vector<Node> component_of(const PercolationGraph& gp, Node s) {
  return component_of(gp.graph(), s);
}

BfsTrace parallel_bfs(const Graph& g, std::span<const Node> I0, std::span<const Node> R0,
                      std::size_t max_rounds) {
  if (I0.empty()) throw InputError("parallel BFS needs at least one initiator");
  auto state = removed_mask(g, R0);
  std::vector<Node> frontier;
  for (const Node u : I0) {
    check_node(g, u);
    if (state[u] == 1) throw InputError("initiator " + std::to_string(u) + " is in the removed set");
    if (state[u] == 0) {
      state[u] = 3;
      frontier.push_back(u);
    }
  }
  BfsTrace t;
  Visit(g, state).parallel(std::move(frontier), max_rounds, t);
  return t;
}

BfsTrace parallel_bfs(const PercolationGraph& gp, std::span<const Node> I0, std::span<const Node> R0,
                      std::size_t max_rounds) {
  return parallel_bfs(gp.graph(), I0, R0, max_rounds);
}

// ---------------------------------------------------------------------------
// Ring spread and degrees

Node ring_spread(const PercolationGraph& gp, Node s) {
  check_node(gp.graph(), s);
  Node best = 0;
  for (const Node u : component_of(gp, s)) best = std::max(best, ring_distance(gp.n(), s, u));
  return best;
}

std::vector<Node> ring_spread_all(const ComponentReport& report) {
  const Node n = report.n;
  std::vector<Node> out(n, 0);
  for (std::size_t c = 0; c < report.count(); ++c) {
    const auto m = report.component(c);
    if (m.size() < 2) continue;
    for (const Node s : m) {
      // max_u d(s, u) = floor(n/2) - distance from the antipode(s) of s to the set.
      const Node a1 = static_cast<Node>((std::uint64_t{s} + n / 2) % n);
      Node near = nearest_on_ring(n, m, a1);
      if (n % 2 == 1) near = std::min(near, nearest_on_ring(n, m, static_cast<Node>((std::uint64_t{a1} + 1) % n)));
      out[s] = n / 2 - near;
    }
  }
  return out;
}

std::size_t max_degree(const Graph& g) { return g.max_degree(); }
std::size_t max_degree(const PercolationGraph& gp) { return gp.graph().max_degree(); }

std::size_t max_degree(const SmallWorldGraph& g) {
  std::vector<std::size_t> deg(g.n(), 2);
  for (const auto& [u, v] : g.bridges()) {
    ++deg[u];
    ++deg[v];
  }
  return *std::max_element(deg.begin(), deg.end());
}

// ---------------------------------------------------------------------------
// Restart process

const char* to_string(RestartTrigger t) {
  switch (t) {
    case RestartTrigger::fraction: return "fraction";
    case RestartTrigger::queue: return "queue";
    case RestartTrigger::none: return "none";
  }
  return "none";
}

RestartOutcome restart_search(const Graph& g, const RestartParams& params) {
  if (params.tau1 < 1) throw InputError("tau1 must be at least 1");
  if (!(params.k_frac > 0.0)) throw InputError("k_frac must be positive");
  if (!(params.beta_log >= 0.0)) throw InputError("beta_log must be non-negative");
  const Node n = g.node_count();
  const double fraction_target = n / params.k_frac;
  const double queue_target = params.beta_log * std::log(static_cast<double>(n));

  std::vector<std::uint8_t> state(n, 0);
  Visit visit(g, state);
  RestartOutcome out;
  Node next = 0;
  while (out.iterations < params.max_restarts) {
    while (next < n && state[next] != 0) ++next;
    if (next == n) break;
    ++out.iterations;
    out.last_start = next;

    BfsTrace t;
    visit.sequential(next, params.tau1, t);
    out.queue_size = t.terminal_queue.size();
    out.run_reached = t.reached.back();
    if (static_cast<double>(out.run_reached) >= fraction_target) {
      out.trigger = RestartTrigger::fraction;
      out.final_reached = out.run_reached;
      return out;
    }
    if (static_cast<double>(out.queue_size) >= queue_target && out.queue_size > 0) {
      out.trigger = RestartTrigger::queue;
      // Visited nodes of this run stay excluded; the queue seeds the parallel visit.
      BfsTrace par;
      visit.parallel(t.terminal_queue, kNoLimit, par);
      out.parallel_rounds = par.rounds;
      out.final_reached = t.visited_order.size() + par.reached.back();
      return out;
    }
    for (const Node u : visit.queue) state[u] = 1;
  }
  out.trigger = RestartTrigger::none;
  return out;
}

RestartOutcome restart_search(const PercolationGraph& gp, const RestartParams& params) {
  return restart_search(gp.graph(), params);
}

}  // namespace swperc
