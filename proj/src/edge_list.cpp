#include "swperc/edge_list.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "swperc/errors.hpp"

namespace swperc {

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw InputError("cannot parse " + what + " from '" + text + "'");
  }
  return value;
}

// Parses "key=value" tokens following a fixed leading keyword.
std::vector<std::pair<std::string, std::string>> header_fields(std::istringstream& ss) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InputError("malformed header field '" + tok + "'");
    out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return out;
}

const std::string& field(const std::vector<std::pair<std::string, std::string>>& fields,
                         const std::string& key) {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  throw InputError("header is missing '" + key + "'");
}

void write_header(std::ostream& out, const SmallWorldGraph& g) {
  out << "# sw n=" << g.n() << " alpha=" << format_real(g.alpha()) << " seed=" << g.seed()
      << '\n';
}

}  // namespace

PercolationGraph EdgeListFile::as_percolation() const {
  if (percolation) return *percolation;
  return PercolationGraph(graph, 1.0, std::vector<std::uint8_t>(graph->n(), 1),
                          std::vector<NodePair>(graph->bridges().begin(), graph->bridges().end()));
}

void write_edge_list(std::ostream& out, const SmallWorldGraph& g) {
  write_header(out, g);
  for (Node i = 0; i < g.n(); ++i) {
    const auto [u, v] = SmallWorldGraph::ring_edge(g.n(), i);
    out << u << ' ' << v << " R\n";
  }
  for (const auto& [u, v] : g.bridges()) out << u << ' ' << v << " B\n";
}

void write_edge_list(std::ostream& out, const PercolationGraph& gp, std::uint64_t seed) {
  write_header(out, gp.base());
  out << "# percolation p=" << format_real(gp.p()) << " seed=" << seed << '\n';
  for (Node i = 0; i < gp.n(); ++i) {
    if (!gp.ring_edge_alive(i)) continue;
    const auto [u, v] = SmallWorldGraph::ring_edge(gp.n(), i);
    out << u << ' ' << v << " R\n";
  }
  for (const auto& [u, v] : gp.surviving_bridges()) out << u << ' ' << v << " B\n";
}

EdgeListFile read_edge_list(std::istream& in) {
  std::string line;
  bool have_sw = false, have_perc = false;
  Node n = 0;
  double alpha = 0.0, p = 1.0;
  std::uint64_t seed = 0, perc_seed = 0;
  std::vector<std::uint8_t> ring;
  std::vector<NodePair> bridges;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ss(line);
    if (line[0] == '#') {
      std::string hash, kind;
      ss >> hash >> kind;
      if (kind == "sw") {
        const auto f = header_fields(ss);
        n = parse_number<Node>(field(f, "n"), "n");
        alpha = parse_number<double>(field(f, "alpha"), "alpha");
        seed = parse_number<std::uint64_t>(field(f, "seed"), "seed");
        have_sw = true;
        ring.assign(n, 0);
      } else if (kind == "percolation") {
        const auto f = header_fields(ss);
        p = parse_number<double>(field(f, "p"), "p");
        perc_seed = parse_number<std::uint64_t>(field(f, "seed"), "seed");
        have_perc = true;
      }
      continue;
    }
    if (!have_sw) throw InputError("edge line before '# sw' header at line " + std::to_string(line_no));
    std::string su, sv, kind, extra;
    if (!(ss >> su >> sv >> kind) || (ss >> extra)) {
      throw InputError("malformed edge at line " + std::to_string(line_no));
    }
    const Node u = parse_number<Node>(su, "node");
    const Node v = parse_number<Node>(sv, "node");
    if (u >= n || v >= n) throw InputError("node out of range at line " + std::to_string(line_no));
    const Node d = ring_distance(n, u, v);
    if (kind == "R") {
      if (d != 1) throw InputError("ring edge with ring distance != 1 at line " + std::to_string(line_no));
      const Node lo = std::min(u, v), hi = std::max(u, v);
      const Node i = (hi - lo == 1) ? lo : hi;
      if (ring[i]) throw InputError("duplicate ring edge at line " + std::to_string(line_no));
      ring[i] = 1;
    } else if (kind == "B") {
      bridges.emplace_back(u, v);
    } else {
      throw InputError("unknown edge kind '" + kind + "' at line " + std::to_string(line_no));
    }
  }
  if (!have_sw) throw InputError("missing '# sw' header");

  EdgeListFile file;
  auto g = std::make_shared<const SmallWorldGraph>(n, alpha, seed, bridges);
  file.graph = g;
  if (have_perc) {
    file.percolation.emplace(g, p, std::move(ring),
                             std::vector<NodePair>(g->bridges().begin(), g->bridges().end()));
    file.percolation_seed = perc_seed;
  } else {
    for (Node i = 0; i < n; ++i) {
      if (!ring[i]) throw InputError("sample file is missing ring edge " + std::to_string(i));
    }
  }
  return file;
}

void save_edge_list(const std::string& path, const SmallWorldGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_edge_list(out, g);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void save_edge_list(const std::string& path, const PercolationGraph& gp, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_edge_list(out, gp, seed);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

EdgeListFile load_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_edge_list(in);
}

}  // namespace swperc
