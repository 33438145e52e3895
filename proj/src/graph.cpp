#include "swperc/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "swperc/errors.hpp"

namespace swperc {

Graph::Graph(Node n, std::span<const NodePair> edges)
    : n_(n), edges_(edges.begin(), edges.end()), offsets_(std::size_t{n} + 1, 0) {
  for (const auto& [u, v] : edges_) {
    if (u >= n || v >= n) {
      throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") out of range for n = " + std::to_string(n));
    }
    if (u == v) throw InputError("self-loop at node " + std::to_string(u));
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());

  adj_.resize(offsets_.back());
  edge_ids_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const auto [u, v] = edges_[e];
    adj_[cursor[u]] = v;
    edge_ids_[cursor[u]++] = e;
    adj_[cursor[v]] = u;
    edge_ids_[cursor[v]++] = e;
  }

  // Sort each row by neighbor, carrying edge ids along.
  std::vector<std::pair<Node, EdgeId>> row;
  for (Node u = 0; u < n; ++u) {
    const std::size_t lo = offsets_[u], hi = offsets_[u + 1];
    if (hi - lo < 2) continue;
    row.clear();
    for (std::size_t i = lo; i < hi; ++i) row.emplace_back(adj_[i], edge_ids_[i]);
    std::sort(row.begin(), row.end());
    for (std::size_t i = lo; i < hi; ++i) {
      if (i > lo && row[i - lo].first == row[i - lo - 1].first) {
        throw InputError("duplicate edge (" + std::to_string(u) + ", " +
                         std::to_string(row[i - lo].first) + ")");
      }
      adj_[i] = row[i - lo].first;
      edge_ids_[i] = row[i - lo].second;
    }
  }
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (Node u = 0; u < n_; ++u) best = std::max(best, degree(u));
  return best;
}

}  // namespace swperc
