#include "swperc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "swperc/analysis.hpp"
#include "swperc/branching.hpp"
#include "swperc/edge_list.hpp"
#include "swperc/epidemic.hpp"
#include "swperc/errors.hpp"
#include "swperc/harness.hpp"
#include "swperc/renorm.hpp"
#include "swperc/serialize.hpp"

namespace swperc {

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed");
  sub->add_option("--out", c.out, "Output path (stdout when omitted)");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + c.out + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + c.out + "' failed");
}

std::string sample_json(const SmallWorldGraph& g) {
  nlohmann::json j{{"n", g.n()}, {"alpha", g.alpha()}, {"seed", g.seed()}};
  j["bridges"] = std::vector<NodePair>(g.bridges().begin(), g.bridges().end());
  return j.dump(1) + '\n';
}

std::string percolation_json(const PercolationGraph& gp, std::uint64_t seed) {
  nlohmann::json j{{"n", gp.n()}, {"alpha", gp.base().alpha()}, {"graph_seed", gp.base().seed()},
                   {"p", gp.p()}, {"seed", seed}};
  j["ring_edges"] = gp.surviving_ring_edges();
  j["bridges"] = std::vector<NodePair>(gp.surviving_bridges().begin(), gp.surviving_bridges().end());
  return j.dump(1) + '\n';
}

std::vector<Node> parse_nodes(const std::string& text) {
  std::vector<Node> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(static_cast<Node>(v));
    } catch (const std::exception&) {
      throw InputError("bad node list '" + text + "'");
    }
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Percolation and epidemics on power-law small-world rings", "swperc"};
  app.require_subcommand(1);

  // sample
  Common sample_c;
  Node sample_n = 0;
  double sample_alpha = 0.0;
  std::string sample_mode = "fast";
  auto* sample = app.add_subcommand("sample", "Sample SW(n, alpha) and write its edge list");
  add_common(sample, sample_c);
  sample->add_option("--n", sample_n, "Ring size")->required();
  sample->add_option("--alpha", sample_alpha, "Power-law exponent")->required();
  sample->add_option("--mode", sample_mode, "Sampler")->check(CLI::IsMember({"fast", "naive"}));

  // percolate
  Common perc_c;
  std::string perc_in;
  double perc_p = 1.0;
  auto* perc = app.add_subcommand("percolate", "Apply bond percolation to a sampled graph");
  add_common(perc, perc_c);
  perc->add_option("--in", perc_in, "Edge-list file")->required();
  perc->add_option("--p", perc_p, "Edge survival probability")->required();

  // components
  Common comp_c;
  std::string comp_in;
  DiameterOptions comp_d;
  auto* comp = app.add_subcommand("components", "Connected components of an edge-list file");
  add_common(comp, comp_c);
  comp->add_option("--in", comp_in, "Edge-list file")->required();
  comp->add_option("--exact-limit", comp_d.exact_limit, "Largest set measured by all-pairs BFS");
  comp->add_option("--bfs-budget", comp_d.bfs_budget, "BFS runs for diameter bounds");

  // ellgraph
  Common ell_c;
  std::string ell_in;
  Node ell_len = 1, ell_offset = 0;
  auto* ellg = app.add_subcommand("ellgraph", "Coarse-grain a percolation graph into intervals");
  add_common(ellg, ell_c);
  ellg->add_option("--in", ell_in, "Edge-list file")->required();
  ellg->add_option("--ell", ell_len, "Interval length")->required();
  ellg->add_option("--offset", ell_offset, "First node of interval 0");

  // cascade
  Common cas_c;
  std::string cas_in, cas_sources = "0", cas_mode = "reed-frost";
  double cas_p = 1.0;
  auto* cas = app.add_subcommand("cascade", "Run an SIR cascade or its exact outbreak law");
  add_common(cas, cas_c);
  cas->add_option("--in", cas_in, "Edge-list file")->required();
  cas->add_option("--p", cas_p, "Transmission probability");
  cas->add_option("--sources", cas_sources, "Comma-separated initial infectious nodes");
  cas->add_option("--mode", cas_mode, "reed-frost, coupled, exact-percolation or exact-cascade")
      ->check(CLI::IsMember({"reed-frost", "coupled", "exact-percolation", "exact-cascade"}));

  // gw
  Common gw_c;
  std::string gw_offspring = "poisson:2";
  std::size_t gw_budget = 10000, gw_trials = 1000;
  bool gw_traj = false;
  auto* gw = app.add_subcommand("gw", "Galton-Watson extinction estimates");
  add_common(gw, gw_c);
  gw->add_option("--offspring", gw_offspring, "Offspring law, e.g. poisson:2 or binomial:10:0.1");
  gw->add_option("--budget", gw_budget, "Maximum number of steps");
  gw->add_option("--trials", gw_trials, "Number of runs");
  gw->add_flag("--trajectory", gw_traj, "Print one trajectory instead of the extinction rate");

  // sweep
  Common sweep_c;
  std::string sweep_cfg;
  unsigned sweep_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a phase sweep from a config file");
  add_common(sweep, sweep_c);
  sweep->add_option("--config", sweep_cfg, "Sweep config (INI)")->required();
  sweep->add_option("--threads", sweep_threads, "Worker threads (overrides the config)");

  // report
  Common rep_c;
  std::string rep_in;
  auto* rep = app.add_subcommand("report", "Judge sweep records against the regime thresholds");
  add_common(rep, rep_c);
  rep->add_option("--in", rep_in, "Sweep output directory or records.csv")->required();

  // schedule
  Common sch_c;
  double sch_alpha = 1.5, sch_n = 1e6, sch_p = 1.0;
  auto* sch = app.add_subcommand("schedule", "Interval renormalization schedule");
  add_common(sch, sch_c);
  sch->add_option("--alpha", sch_alpha, "Exponent in (1, 2)")->required();
  sch->add_option("--n", sch_n, "Nominal ring size")->required();
  sch->add_option("--p", sch_p, "Percolation probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*sample) {
      RngStream rng(sample_c.seed, 0);
      const auto g = sample_small_world(sample_n, sample_alpha, rng,
                                        sample_mode == "naive" ? SamplerMode::naive : SamplerMode::fast);
      std::ostringstream s;
      if (sample_c.format == "json") {
        s << sample_json(g);
      } else {
        write_edge_list(s, g);
      }
      emit(sample_c, out, s.str());
    } else if (*perc) {
      const auto file = load_edge_list(perc_in);
      if (file.percolation) throw InputError("'" + perc_in + "' is already a percolation sample");
      RngStream rng(perc_c.seed, 1);
      const auto gp = percolate(file.graph, perc_p, rng);
      std::ostringstream s;
      if (perc_c.format == "json") {
        s << percolation_json(gp, perc_c.seed);
      } else {
        write_edge_list(s, gp, perc_c.seed);
      }
      emit(perc_c, out, s.str());
    } else if (*comp) {
      const auto gp = load_edge_list(comp_in).as_percolation();
      ComponentOptions opt;
      opt.diameter = comp_d;
      const auto r = connected_components(gp, opt);
      std::ostringstream s;
      if (comp_c.format == "json") {
        s << to_json(r).dump(1) << '\n';
      } else {
        s << "component,size,smallest_member\n";
        for (std::size_t i = 0; i < r.count(); ++i) {
          s << i << ',' << r.component(i).size() << ',' << r.component(i).front() << '\n';
        }
      }
      emit(comp_c, out, s.str());
    } else if (*ellg) {
      const auto gp = load_edge_list(ell_in).as_percolation();
      const EllGraph eg(gp, ell_len, ell_offset);
      std::ostringstream s;
      if (ell_c.format == "json") {
        s << to_json(eg).dump(1) << '\n';
      } else {
        s << "h,k,kind\n";
        for (const auto& [h, k] : eg.super_edges()) s << h << ',' << k << ",E\n";
        for (const auto& [h, k] : eg.super_bridges()) s << h << ',' << k << ",B\n";
      }
      emit(ell_c, out, s.str());
    } else if (*cas) {
      const auto file = load_edge_list(cas_in);
      const auto sources = parse_nodes(cas_sources);
      std::ostringstream s;
      if (cas_mode == "exact-percolation" || cas_mode == "exact-cascade") {
        const auto d = exact_outbreak_distribution(
            file.as_percolation().graph(), cas_p, sources,
            cas_mode == "exact-percolation" ? EnumMethod::percolation_enum : EnumMethod::cascade_enum);
        if (cas_c.format == "json") {
          s << to_json(d).dump(1) << '\n';
        } else {
          s << "total_infected,probability\n";
          for (std::size_t k = 0; k < d.probability.size(); ++k) {
            if (d.probability[k] > 0.0) s << k << ',' << format_real(d.probability[k]) << '\n';
          }
        }
      } else {
        CascadeTrajectory t;
        if (cas_mode == "coupled") {
          t = coupled_cascade(file.as_percolation(), sources);
        } else {
          RngStream rng(cas_c.seed, 2);
          t = reed_frost(file.as_percolation().graph(), cas_p, sources, rng);
        }
        if (cas_c.format == "json") {
          s << to_json(t).dump(1) << '\n';
        } else {
          s << "t,S,I,R\n";
          for (std::size_t i = 0; i < t.steps(); ++i) {
            const std::size_t I = t.infectious[i].size(), R = t.recovered(i).size();
            s << i << ',' << t.n - I - R << ',' << I << ',' << R << '\n';
          }
        }
      }
      emit(cas_c, out, s.str());
    } else if (*gw) {
      const auto w = Offspring::parse(gw_offspring);
      std::ostringstream s;
      if (gw_traj) {
        RngStream rng(gw_c.seed, 0);
        const auto t = galton_watson(w, gw_budget, rng);
        if (gw_c.format == "json") {
          s << to_json(t).dump(1) << '\n';
        } else {
          s << "t,B\n";
          for (std::size_t i = 0; i < t.B.size(); ++i) s << i << ',' << t.B[i] << '\n';
        }
      } else {
        const auto r = extinction_rate(w, gw_budget, gw_trials, gw_c.seed);
        if (gw_c.format == "json") {
          s << to_json(r).dump(1) << '\n';
        } else {
          write_extinction_csv(s, std::span<const ExtinctionReport>(&r, 1));
        }
      }
      emit(gw_c, out, s.str());
    } else if (*sweep) {
      auto cfg = load_sweep_config(sweep_cfg);
      if (!sweep_c.out.empty()) cfg.output = sweep_c.out;
      if (sweep->count("--seed")) cfg.seed = sweep_c.seed;
      if (sweep_threads) cfg.threads = sweep_threads;
      const auto summary = phase_sweep(cfg);
      out << "cells " << summary.cells << ", run " << summary.cells_run << ", resumed "
          << summary.cells_resumed << ", records " << summary.records << '\n';
      for (const auto& e : summary.errors) err << "cell failed: " << e << '\n';
      return summary.errors.empty() ? 0 : 1;
    } else if (*rep) {
      Thresholds th;
      const std::filesystem::path cfg_path = std::filesystem::path(rep_in) / "config.ini";
      if (std::filesystem::is_directory(rep_in) && std::filesystem::exists(cfg_path)) {
        th = load_sweep_config(cfg_path.string()).thresholds;
      }
      const auto verdicts = regime_report(load_records(rep_in), th);
      std::ostringstream s;
      if (rep_c.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : verdicts) {
          arr.push_back({{"regime", v.regime}, {"alpha", v.alpha}, {"p", v.p}, {"n_values", v.n_values},
                         {"verdict", to_string(v.verdict)}, {"detail", v.detail}});
        }
        s << arr.dump(1) << '\n';
      } else {
        write_report_csv(s, verdicts);
      }
      emit(rep_c, out, s.str());
      return report_passes(verdicts) ? 0 : 2;
    } else if (*sch) {
      const auto schedule = make_schedule(sch_alpha, sch_n, sch_p);
      std::ostringstream s;
      if (sch_c.format == "json") {
        s << to_json(schedule).dump(1) << '\n';
      } else {
        write_schedule_csv(s, schedule);
      }
      emit(sch_c, out, s.str());
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace swperc
