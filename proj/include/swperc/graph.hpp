#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace swperc {

using Node = std::uint32_t;
using EdgeId = std::uint32_t;
using NodePair = std::pair<Node, Node>;

/// Immutable undirected simple graph in CSR form.
///
/// Edges keep the ids they were given at construction (their index in the
/// input list); each adjacency row is sorted by neighbor so every traversal
/// sees neighbors in ascending order.
class Graph {
 public:
  Graph() = default;
  /// Throws InputError on self-loops, duplicate edges or out-of-range ends.
  Graph(Node n, std::span<const NodePair> edges);

  Node node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const NodePair> edges() const { return edges_; }
  const NodePair& edge(EdgeId e) const { return edges_[e]; }

  std::span<const Node> neighbors(Node u) const {
    return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
  }
  /// Edge ids aligned with neighbors(u).
  std::span<const EdgeId> incident_edges(Node u) const {
    return {edge_ids_.data() + offsets_[u], edge_ids_.data() + offsets_[u + 1]};
  }
  std::size_t degree(Node u) const { return offsets_[u + 1] - offsets_[u]; }
  std::size_t max_degree() const;

 private:
  Node n_ = 0;
  std::vector<NodePair> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Node> adj_;
  std::vector<EdgeId> edge_ids_;
};

}  // namespace swperc
