#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swperc/analysis.hpp"
#include "swperc/branching.hpp"
#include "swperc/edge_list.hpp"
#include "swperc/epidemic.hpp"
#include "swperc/errors.hpp"
#include "swperc/harness.hpp"
#include "swperc/renorm.hpp"
#include "swperc/serialize.hpp"
#include "swperc/small_world.hpp"

namespace py = pybind11;
using namespace swperc;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<std::pair<Node, Node>> pairs(std::span<const NodePair> es) {
  std::vector<std::pair<Node, Node>> out;
  out.reserve(es.size());
  for (const auto& e : es) out.emplace_back(e.first, e.second);
  return out;
}

py::dict record_dict(const SweepRecord& r) {
  py::dict d;
  const auto row = record_csv_row(r);
  const auto& cols = record_columns();
  std::istringstream ss(row);
  std::string cell;
  for (const auto& c : cols) {
    std::getline(ss, cell, ',');
    d[py::str(c)] = py::str(cell);
  }
  d["wall_time"] = r.wall_time;
  return d;
}

py::dict verdict_dict(const RegimeVerdict& v) {
  py::dict d;
  d["regime"] = v.regime;
  d["alpha"] = v.alpha;
  d["p"] = v.p;
  d["n_values"] = v.n_values;
  d["verdict"] = to_string(v.verdict);
  d["detail"] = v.detail;
  return d;
}

using GraphPtr = std::shared_ptr<SmallWorldGraph>;

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Small-world percolation, cascades and branching processes";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", PyExc_OverflowError);

  m.def("ring_distance", &ring_distance, py::arg("n"), py::arg("u"), py::arg("v"));
  m.def("normalizing_constant", &normalizing_constant, py::arg("n"), py::arg("alpha"));
  m.def("bridge_probability", &bridge_probability, py::arg("n"), py::arg("alpha"), py::arg("u"), py::arg("v"));
  m.def("expected_bridge_degree", &expected_bridge_degree, py::arg("n"), py::arg("alpha"));

  py::class_<SmallWorldGraph, GraphPtr>(m, "SmallWorldGraph")
      .def(py::init([](Node n, double alpha, std::uint64_t seed, const std::vector<std::pair<Node, Node>>& bridges) {
             return std::make_shared<SmallWorldGraph>(n, alpha, seed, std::vector<NodePair>(bridges.begin(), bridges.end()));
           }),
           py::arg("n"), py::arg("alpha"), py::arg("seed"), py::arg("bridges"))
      .def_property_readonly("n", &SmallWorldGraph::n)
      .def_property_readonly("alpha", &SmallWorldGraph::alpha)
      .def_property_readonly("seed", &SmallWorldGraph::seed)
      .def_property_readonly("bridges", [](const SmallWorldGraph& g) { return pairs(g.bridges()); })
      .def("edges", [](const SmallWorldGraph& g) { return pairs(g.edges()); })
      .def("edge_count", &SmallWorldGraph::edge_count)
      .def("has_edge", &SmallWorldGraph::has_edge)
      .def("has_bridge", &SmallWorldGraph::has_bridge)
      .def("max_degree", [](const SmallWorldGraph& g) { return max_degree(g); })
      .def("to_edge_list", [](const SmallWorldGraph& g) {
        std::ostringstream s;
        write_edge_list(s, g);
        return s.str();
      })
      .def("__eq__", [](const SmallWorldGraph& a, const SmallWorldGraph& b) { return a == b; });

  py::class_<PercolationGraph>(m, "PercolationGraph")
      .def_property_readonly("n", &PercolationGraph::n)
      .def_property_readonly("p", &PercolationGraph::p)
      .def_property_readonly("base", [](const PercolationGraph& gp) {
        return std::const_pointer_cast<SmallWorldGraph>(gp.base_ptr());
      })
      .def_property_readonly("ring_alive", [](const PercolationGraph& gp) {
        return std::vector<bool>(gp.ring_alive().begin(), gp.ring_alive().end());
      })
      .def_property_readonly("surviving_bridges", [](const PercolationGraph& gp) { return pairs(gp.surviving_bridges()); })
      .def("edges", [](const PercolationGraph& gp) { return pairs(gp.graph().edges()); })
      .def("has_edge", &PercolationGraph::has_edge)
      .def("max_degree", [](const PercolationGraph& gp) { return max_degree(gp); })
      .def("to_edge_list", [](const PercolationGraph& gp, std::uint64_t seed) {
        std::ostringstream s;
        write_edge_list(s, gp, seed);
        return s.str();
      }, py::arg("seed") = 0);

  m.def("sample_small_world", [](Node n, double alpha, std::uint64_t seed, const std::string& mode) {
    if (mode != "fast" && mode != "naive") throw InputError("mode must be 'fast' or 'naive'");
    RngStream rng(seed, 0);
    return std::make_shared<SmallWorldGraph>(
        sample_small_world(n, alpha, rng, mode == "naive" ? SamplerMode::naive : SamplerMode::fast));
  }, py::arg("n"), py::arg("alpha"), py::arg("seed") = 0, py::arg("mode") = "fast");

  m.def("percolate", [](GraphPtr g, double p, std::uint64_t seed) {
    RngStream rng(seed, 1);
    return percolate(std::shared_ptr<const SmallWorldGraph>(g), p, rng);
  }, py::arg("graph"), py::arg("p"), py::arg("seed") = 0);

  m.def("read_edge_list", [](const std::string& text) {
    std::istringstream in(text);
    auto f = read_edge_list(in);
    py::object perc = py::none();
    if (f.percolation) perc = py::cast(*f.percolation);
    return py::make_tuple(std::const_pointer_cast<SmallWorldGraph>(f.graph), perc);
  }, py::arg("text"), "Returns (graph, percolation graph or None).");

  m.def("connected_components", [](const PercolationGraph& gp, std::size_t exact_limit, std::size_t bfs_budget) {
    ComponentOptions opt;
    opt.diameter.exact_limit = exact_limit;
    opt.diameter.bfs_budget = bfs_budget;
    return to_python(to_json(connected_components(gp, opt)));
  }, py::arg("gp"), py::arg("exact_limit") = 10000, py::arg("bfs_budget") = 64);

  m.def("component_of", [](const PercolationGraph& gp, Node s) { return component_of(gp, s); });
  m.def("ring_spread", &ring_spread, py::arg("gp"), py::arg("s"));

  m.def("restart_search", [](const PercolationGraph& gp, std::size_t tau1, double beta_log, double k_frac) {
    RestartParams rp;
    rp.tau1 = tau1;
    rp.beta_log = beta_log;
    rp.k_frac = k_frac;
    const auto r = restart_search(gp, rp);
    py::dict d;
    d["iterations"] = r.iterations;
    d["trigger"] = to_string(r.trigger);
    d["final_reached"] = r.final_reached;
    return d;
  }, py::arg("gp"), py::arg("tau1"), py::arg("beta_log") = 1.0, py::arg("k_frac") = 10.0);

  m.def("ell_graph", [](const PercolationGraph& gp, Node ell, Node offset) {
    return to_python(to_json(EllGraph(gp, ell, offset)));
  }, py::arg("gp"), py::arg("ell"), py::arg("offset") = 0);

  m.def("supernode_isolation_rate", [](Node n, double alpha, double p, Node ell, std::size_t trials, std::uint64_t seed) {
    const auto r = supernode_isolation_rate(n, alpha, p, ell, trials, seed);
    py::dict d;
    d["trials"] = r.trials;
    d["rate_isolated"] = r.rate_isolated;
    d["rate_superbridge"] = r.rate_superbridge;
    d["se_isolated"] = r.se_isolated;
    d["se_superbridge"] = r.se_superbridge;
    d["isolated_lower_bound"] = r.isolated_lower_bound;
    d["superbridge_upper_bound"] = r.superbridge_upper_bound;
    d["coarsening_violations"] = r.coarsening_violations;
    return d;
  }, py::arg("n"), py::arg("alpha"), py::arg("p"), py::arg("ell"), py::arg("trials"), py::arg("seed") = 0);

  m.def("bridge_length_tail", &bridge_length_tail, py::arg("n"), py::arg("alpha"), py::arg("x"));

  m.def("make_schedule", [](double alpha, double n, double p) { return to_python(to_json(make_schedule(alpha, n, p))); },
        py::arg("alpha"), py::arg("n"), py::arg("p"));

  m.def("reed_frost", [](const SmallWorldGraph& g, double p, const std::vector<Node>& sources, std::uint64_t seed) {
    RngStream rng(seed, 2);
    return to_python(to_json(reed_frost(g, p, sources, rng)));
  }, py::arg("graph"), py::arg("p"), py::arg("sources"), py::arg("seed") = 0);

  m.def("coupled_cascade", [](const PercolationGraph& gp, const std::vector<Node>& sources) {
    return to_python(to_json(coupled_cascade(gp, sources)));
  }, py::arg("gp"), py::arg("sources"));

  m.def("active_sets", [](const PercolationGraph& gp, const std::vector<Node>& sources) {
    return active_sets(gp, sources).levels;
  }, py::arg("gp"), py::arg("sources"));

  m.def("exact_outbreak_distribution",
        [](Node n, const std::vector<std::pair<Node, Node>>& edges, double p, const std::vector<Node>& sources,
           const std::string& method) {
          if (method != "percolation" && method != "cascade") {
            throw InputError("method must be 'percolation' or 'cascade'");
          }
          const std::vector<NodePair> es(edges.begin(), edges.end());
          const Graph g(n, es);
          return exact_outbreak_distribution(
                     g, p, sources, method == "percolation" ? EnumMethod::percolation_enum : EnumMethod::cascade_enum)
              .probability;
        },
        py::arg("n"), py::arg("edges"), py::arg("p"), py::arg("sources"), py::arg("method") = "percolation");

  m.def("galton_watson", [](const std::string& offspring, std::size_t budget, std::uint64_t seed) {
    RngStream rng(seed, 0);
    return to_python(to_json(galton_watson(Offspring::parse(offspring), budget, rng)));
  }, py::arg("offspring"), py::arg("budget"), py::arg("seed") = 0);

  m.def("extinction_rate", [](const std::string& offspring, std::size_t budget, std::size_t trials, std::uint64_t seed) {
    return to_python(to_json(extinction_rate(Offspring::parse(offspring), budget, trials, seed)));
  }, py::arg("offspring"), py::arg("budget"), py::arg("trials"), py::arg("seed") = 0);

  m.def("run_trial", [](Node n, double alpha, double p, std::size_t trial, std::uint64_t seed, Node ell) {
    return record_dict(run_trial(n, alpha, p, trial, seed, ell, Thresholds{}));
  }, py::arg("n"), py::arg("alpha"), py::arg("p"), py::arg("trial") = 0, py::arg("seed") = 0, py::arg("ell") = 20);

  m.def("phase_sweep", [](const std::string& config, const std::string& output) {
    auto cfg = load_sweep_config(config);
    if (!output.empty()) cfg.output = output;
    SweepSummary s;
    {
      py::gil_scoped_release release;
      s = phase_sweep(cfg);
    }
    py::dict d;
    d["cells"] = s.cells;
    d["cells_run"] = s.cells_run;
    d["cells_resumed"] = s.cells_resumed;
    d["records"] = s.records;
    d["errors"] = s.errors;
    return d;
  }, py::arg("config"), py::arg("output") = "");

  m.def("regime_report", [](const std::string& path) {
    py::list out;
    for (const auto& v : regime_report(load_records(path))) out.append(verdict_dict(v));
    return out;
  }, py::arg("path"));
}
