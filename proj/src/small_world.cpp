#include "swperc/small_world.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "swperc/errors.hpp"

namespace swperc {

namespace {

NodePair canonical(Node u, Node v) { return u < v ? NodePair{u, v} : NodePair{v, u}; }

void check_n(Node n) {
  if (n < 5) throw InputError("n must be at least 5, got " + std::to_string(n));
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InputError("alpha must be a finite non-negative number");
  }
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError("probability must lie in [0, 1], got " + std::to_string(p));
  }
}

// Number of unordered pairs at ring distance x.
std::uint64_t pairs_at_distance(Node n, Node x) {
  return (n % 2 == 0 && x == n / 2) ? n / 2 : n;
}

// x^-alpha and C(alpha, n) both scaled by 2^alpha, so that their ratio stays
// finite for very large alpha.
double scaled_weight(Node x, double alpha) { return std::pow(0.5 * static_cast<double>(x), -alpha); }

double scaled_normalizer(Node n, double alpha) {
  double sum = 0.0;
  for (Node x = n / 2; x >= 2; --x) sum += scaled_weight(x, alpha);
  return 2.0 * sum;
}

// k distinct values from [0, m), Floyd's algorithm.
void sample_distinct(RngStream& rng, std::uint64_t m, std::uint64_t k,
                     std::vector<std::uint64_t>& out) {
  out.clear();
  if (k == 0) return;
  if (k < 16) {
    for (std::uint64_t j = m - k; j < m; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      const bool seen = std::find(out.begin(), out.end(), t) != out.end();
      out.push_back(seen ? j : t);
    }
    return;
  }
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = m - k; j < m; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    const std::uint64_t pick = chosen.contains(t) ? j : t;
    chosen.insert(pick);
    out.push_back(pick);
  }
}

}  // namespace

Node ring_distance(Node n, Node u, Node v) {
  if (u >= n || v >= n) {
    throw InputError("node out of range: (" + std::to_string(u) + ", " + std::to_string(v) +
                     ") with n = " + std::to_string(n));
  }
  const Node diff = u > v ? u - v : v - u;
  return std::min(diff, n - diff);
}

double normalizing_constant(Node n, double alpha) {
  check_n(n);
  check_alpha(alpha);
  double sum = 0.0;
  for (Node x = n / 2; x >= 2; --x) sum += std::pow(static_cast<double>(x), -alpha);
  return 2.0 * sum;
}

double bridge_probability(Node n, double alpha, Node u, Node v) {
  const Node d = ring_distance(n, u, v);
  if (d < 2) {
    throw InputError("pair (" + std::to_string(u) + ", " + std::to_string(v) +
                     ") is not a bridge candidate (ring distance < 2)");
  }
  check_alpha(alpha);
  return scaled_weight(d, alpha) / scaled_normalizer(n, alpha);
}

double expected_bridge_degree(Node n, double alpha) {
  check_n(n);
  check_alpha(alpha);
  const double c = scaled_normalizer(n, alpha);
  double sum = 0.0;
  for (Node x = n / 2; x >= 2; --x) {
    const double mult = (n % 2 == 0 && x == n / 2) ? 1.0 : 2.0;
    sum += mult * scaled_weight(x, alpha);
  }
  return sum / c;
}

// ---------------------------------------------------------------------------
// SmallWorldGraph

SmallWorldGraph::SmallWorldGraph(Node n, double alpha, std::uint64_t seed,
                                 std::vector<NodePair> bridges)
    : n_(n), alpha_(alpha), seed_(seed), bridges_(std::move(bridges)) {
  check_n(n);
  check_alpha(alpha);
  for (auto& b : bridges_) {
    if (ring_distance(n, b.first, b.second) < 2) {
      throw InputError("bridge (" + std::to_string(b.first) + ", " + std::to_string(b.second) +
                       ") has ring distance < 2");
    }
    b = canonical(b.first, b.second);
  }
  std::sort(bridges_.begin(), bridges_.end());
  if (std::adjacent_find(bridges_.begin(), bridges_.end()) != bridges_.end()) {
    throw InputError("duplicate bridge");
  }
}

NodePair SmallWorldGraph::ring_edge(Node n, Node i) { return canonical(i, (i + 1) % n); }

bool SmallWorldGraph::has_bridge(Node u, Node v) const {
  return std::binary_search(bridges_.begin(), bridges_.end(), canonical(u, v));
}

bool SmallWorldGraph::has_edge(Node u, Node v) const {
  if (u >= n_ || v >= n_ || u == v) return false;
  return ring_distance(n_, u, v) == 1 || has_bridge(u, v);
}

std::vector<NodePair> SmallWorldGraph::edges() const {
  std::vector<NodePair> out;
  out.reserve(edge_count());
  for (Node i = 0; i < n_; ++i) out.push_back(ring_edge(n_, i));
  out.insert(out.end(), bridges_.begin(), bridges_.end());
  return out;
}

Graph SmallWorldGraph::to_graph() const {
  const auto e = edges();
  return Graph(n_, e);
}

// ---------------------------------------------------------------------------
// Sampling

SmallWorldGraph sample_small_world(Node n, double alpha, RngStream& rng, SamplerMode mode) {
  check_n(n);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InputError("alpha must be a finite positive number");
  }
  const double c = scaled_normalizer(n, alpha);
  std::vector<NodePair> bridges;

  if (mode == SamplerMode::naive) {
    for (Node u = 0; u < n; ++u) {
      for (Node v = u + 2; v < n; ++v) {
        const Node d = ring_distance(n, u, v);
        if (d < 2) continue;
        if (rng.bernoulli(scaled_weight(d, alpha) / c)) bridges.emplace_back(u, v);
      }
    }
    return SmallWorldGraph(n, alpha, rng.seed(), std::move(bridges));
  }

  bridges.reserve(n);
  std::vector<std::uint64_t> picks;
  for (Node x = 2; x <= n / 2; ++x) {
    const std::uint64_t m = pairs_at_distance(n, x);
    const double q = scaled_weight(x, alpha) / c;
    const std::uint64_t k = std::binomial_distribution<std::uint64_t>(m, q)(rng);
    sample_distinct(rng, m, k, picks);
    for (const std::uint64_t u : picks) {
      bridges.push_back(canonical(static_cast<Node>(u), static_cast<Node>((u + x) % n)));
    }
  }
  return SmallWorldGraph(n, alpha, rng.seed(), std::move(bridges));
}

// ---------------------------------------------------------------------------
// Percolation

namespace {

std::vector<NodePair> live_edges(Node n, std::span<const std::uint8_t> ring_alive,
                                 std::span<const NodePair> bridges) {
  std::vector<NodePair> out;
  out.reserve(n + bridges.size());
  for (Node i = 0; i < n; ++i) {
    if (ring_alive[i]) out.push_back(SmallWorldGraph::ring_edge(n, i));
  }
  out.insert(out.end(), bridges.begin(), bridges.end());
  return out;
}

}  // namespace

PercolationGraph::PercolationGraph(std::shared_ptr<const SmallWorldGraph> base, double p,
                                   std::vector<std::uint8_t> ring_alive,
                                   std::vector<NodePair> surviving_bridges)
    : base_(std::move(base)),
      p_(p),
      ring_alive_(std::move(ring_alive)),
      bridges_(std::move(surviving_bridges)) {
  if (!base_) throw InputError("percolation graph needs a base graph");
  check_probability(p);
  const Node n = base_->n();
  if (ring_alive_.size() != n) throw InputError("ring survival mask must have n entries");
  for (auto& b : bridges_) {
    b = canonical(b.first, b.second);
    if (!base_->has_bridge(b.first, b.second)) {
      throw InputError("surviving bridge (" + std::to_string(b.first) + ", " +
                       std::to_string(b.second) + ") is not a bridge of the base graph");
    }
  }
  std::sort(bridges_.begin(), bridges_.end());
  if (std::adjacent_find(bridges_.begin(), bridges_.end()) != bridges_.end()) {
    throw InputError("duplicate surviving bridge");
  }
  const auto ring_count = std::count_if(ring_alive_.begin(), ring_alive_.end(),
                                        [](std::uint8_t a) { return a != 0; });
  if (p == 1.0 && (static_cast<Node>(ring_count) != n || bridges_.size() != base_->bridges().size())) {
    throw InputError("p = 1 requires every edge to survive");
  }
  if (p == 0.0 && (ring_count != 0 || !bridges_.empty())) {
    throw InputError("p = 0 requires every edge to be removed");
  }
  const auto e = live_edges(n, ring_alive_, bridges_);
  graph_ = Graph(n, e);
}

std::vector<NodePair> PercolationGraph::surviving_ring_edges() const {
  std::vector<NodePair> out;
  for (Node i = 0; i < n(); ++i) {
    if (ring_alive_[i]) out.push_back(SmallWorldGraph::ring_edge(n(), i));
  }
  return out;
}

bool PercolationGraph::has_edge(Node u, Node v) const {
  const Node n = this->n();
  if (u >= n || v >= n || u == v) return false;
  if (ring_distance(n, u, v) == 1) {
    // Ring edge i joins i and i + 1; for the wrap-around pair the index is n - 1.
    const Node lo = std::min(u, v), hi = std::max(u, v);
    const Node i = (hi - lo == 1) ? lo : hi;
    return ring_alive_[i] != 0;
  }
  return std::binary_search(bridges_.begin(), bridges_.end(), canonical(u, v));
}

PercolationGraph percolate(std::shared_ptr<const SmallWorldGraph> g, double p, RngStream& rng) {
  if (!g) throw InputError("percolate needs a graph");
  check_probability(p);
  const Node n = g->n();
  std::vector<std::uint8_t> ring(n, 0);
  for (Node i = 0; i < n; ++i) ring[i] = rng.bernoulli(p) ? 1 : 0;
  std::vector<NodePair> kept;
  for (const auto& b : g->bridges()) {
    if (rng.bernoulli(p)) kept.push_back(b);
  }
  return PercolationGraph(std::move(g), p, std::move(ring), std::move(kept));
}

PercolationGraph percolate(const SmallWorldGraph& g, double p, RngStream& rng) {
  return percolate(std::make_shared<const SmallWorldGraph>(g), p, rng);
}

}  // namespace swperc
