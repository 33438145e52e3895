#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "swperc/small_world.hpp"

namespace swperc {

/// Contents of an edge-list file.
///
/// A plain sample has only `graph`. A percolated sample additionally carries
/// the percolation header; its surviving edges are the listed ones and
/// `graph` holds the listed bridges as the base bridge set (removed bridges
/// are not recorded in the file).
struct EdgeListFile {
  std::shared_ptr<const SmallWorldGraph> graph;
  std::optional<PercolationGraph> percolation;
  std::uint64_t percolation_seed = 0;

  /// The percolation graph if present, otherwise the p = 1 realization.
  PercolationGraph as_percolation() const;
};

/// Writes `# sw n=<n> alpha=<a> seed=<s>` followed by one `u v R|B` line per
/// edge: ring edges in index order, then bridges in sorted order.
void write_edge_list(std::ostream& out, const SmallWorldGraph& g);
/// Same, with a `# percolation p=<p> seed=<s>` line and only surviving edges.
void write_edge_list(std::ostream& out, const PercolationGraph& gp, std::uint64_t seed);

/// Throws InputError on malformed headers or lines, or on edges that are
/// inconsistent with their kind tag.
EdgeListFile read_edge_list(std::istream& in);

void save_edge_list(const std::string& path, const SmallWorldGraph& g);
void save_edge_list(const std::string& path, const PercolationGraph& gp, std::uint64_t seed);
EdgeListFile load_edge_list(const std::string& path);

/// Shortest decimal form of x that parses back to the same double.
std::string format_real(double x);

}  // namespace swperc
