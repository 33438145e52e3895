#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/algorithm/string.hpp>
#include <json.hpp>

#include "swperc/edge_list.hpp"
#include "swperc/errors.hpp"
#include "swperc/harness.hpp"
#include "swperc/renorm.hpp"

namespace swperc {

namespace fs = std::filesystem;

namespace {

std::uint64_t bits_of(double x) { return std::bit_cast<std::uint64_t>(x); }

Node quantile(const std::vector<Node>& sorted, double q) {
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::min(sorted.size(), std::max<std::size_t>(rank, 1)) - 1];
}

RestartTrigger parse_trigger(const std::string& s) {
  if (s == "fraction") return RestartTrigger::fraction;
  if (s == "queue") return RestartTrigger::queue;
  if (s == "none") return RestartTrigger::none;
  throw InputError("unknown restart trigger '" + s + "'");
}

template <typename T>
T parse_cell(const std::string& text) {
  std::istringstream ss(text);
  T v{};
  if (!(ss >> v) || !(ss >> std::ws).eof()) throw InputError("bad record field '" + text + "'");
  return v;
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path);
}

std::string header_line() {
  return boost::algorithm::join(record_columns(), ",");
}

std::string cell_name(Node n, double alpha, double p) {
  return "cell_n" + std::to_string(n) + "_a" + format_real(alpha) + "_p" + format_real(p);
}

// Reads a finished cell file; empty when missing or not matching the cell.
std::vector<SweepRecord> read_cell(const fs::path& path, Node n, double alpha, double p,
                                   std::size_t trials) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::string line;
  if (!std::getline(in, line) || line != header_line()) return {};
  std::vector<SweepRecord> out;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      out.push_back(parse_record_row(line));
    }
  } catch (const InputError&) {
    return {};
  }
  if (out.size() != trials) return {};
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& r = out[t];
    if (r.n != n || r.alpha != alpha || r.p != p || r.trial != t) return {};
  }
  return out;
}

}  // namespace

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols{
      "n",          "alpha",          "p",          "trial",         "seed",
      "ell",        "largest_fraction", "max_component_size", "diam_lower", "diam_upper",
      "spread_q50", "spread_q90",     "spread_q99", "spread_max",    "confined_fraction",
      "max_degree", "coarsening_violations", "restart_iterations", "restart_trigger",
      "restart_reached"};
  return cols;
}

std::string record_csv_row(const SweepRecord& r) {
  std::ostringstream s;
  s << r.n << ',' << format_real(r.alpha) << ',' << format_real(r.p) << ',' << r.trial << ','
    << r.seed << ',' << r.ell << ',' << format_real(r.largest_fraction) << ','
    << r.max_component_size << ',' << r.diam_lower << ',' << r.diam_upper << ',' << r.spread_q50
    << ',' << r.spread_q90 << ',' << r.spread_q99 << ',' << r.spread_max << ','
    << format_real(r.confined_fraction) << ',' << r.max_degree << ',' << r.coarsening_violations << ','
    << r.restart_iterations << ',' << to_string(r.restart_trigger) << ',' << r.restart_reached;
  return s.str();
}

SweepRecord parse_record_row(const std::string& line) {
  std::vector<std::string> f;
  boost::split(f, line, boost::is_any_of(","));
  if (f.size() != record_columns().size()) {
    throw InputError("record row has " + std::to_string(f.size()) + " fields, expected " +
                     std::to_string(record_columns().size()));
  }
  SweepRecord r;
  std::size_t i = 0;
  r.n = parse_cell<Node>(f[i++]);
  r.alpha = parse_cell<double>(f[i++]);
  r.p = parse_cell<double>(f[i++]);
  r.trial = parse_cell<std::size_t>(f[i++]);
  r.seed = parse_cell<std::uint64_t>(f[i++]);
  r.ell = parse_cell<Node>(f[i++]);
  r.largest_fraction = parse_cell<double>(f[i++]);
  r.max_component_size = parse_cell<std::size_t>(f[i++]);
  r.diam_lower = parse_cell<std::uint64_t>(f[i++]);
  r.diam_upper = parse_cell<std::uint64_t>(f[i++]);
  r.spread_q50 = parse_cell<Node>(f[i++]);
  r.spread_q90 = parse_cell<Node>(f[i++]);
  r.spread_q99 = parse_cell<Node>(f[i++]);
  r.spread_max = parse_cell<Node>(f[i++]);
  r.confined_fraction = parse_cell<double>(f[i++]);
  r.max_degree = parse_cell<std::size_t>(f[i++]);
  r.coarsening_violations = parse_cell<std::size_t>(f[i++]);
  r.restart_iterations = parse_cell<std::size_t>(f[i++]);
  r.restart_trigger = parse_trigger(f[i++]);
  r.restart_reached = parse_cell<std::size_t>(f[i++]);
  return r;
}

std::uint64_t trial_seed(std::uint64_t seed, Node n, double alpha, double p, std::size_t trial) {
  return derive_seed(seed, n, bits_of(alpha), bits_of(p), trial);
}

SweepRecord run_trial(Node n, double alpha, double p, std::size_t trial, std::uint64_t seed, Node ell,
                      const Thresholds& th) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord r;
  r.n = n;
  r.alpha = alpha;
  r.p = p;
  r.trial = trial;
  r.seed = trial_seed(seed, n, alpha, p, trial);
  r.ell = ell;

  RngStream graph_rng(r.seed, 0), perc_rng(r.seed, 1);
  auto g = std::make_shared<const SmallWorldGraph>(sample_small_world(n, alpha, graph_rng));
  const PercolationGraph gp = percolate(g, p, perc_rng);

  ComponentOptions copt;
  copt.diameter.exact_limit = th.diameter_exact_limit;
  copt.diameter.bfs_budget = th.diameter_bfs_budget;
  const ComponentReport rep = connected_components(gp, copt);
  r.largest_fraction = rep.largest_fraction;
  r.max_component_size = rep.largest_size;
  r.diam_lower = rep.largest_diameter->lower;
  r.diam_upper = rep.largest_diameter->upper;

  auto spreads = ring_spread_all(rep);
  const double limit = 2.0 * static_cast<double>(ell) * ell;
  r.confined_fraction =
      static_cast<double>(std::count_if(spreads.begin(), spreads.end(), [&](Node s) { return s <= limit; })) / n;
  std::sort(spreads.begin(), spreads.end());
  r.spread_q50 = quantile(spreads, 0.5);
  r.spread_q90 = quantile(spreads, 0.9);
  r.spread_q99 = quantile(spreads, 0.99);
  r.spread_max = spreads.back();

  r.max_degree = max_degree(gp);
  r.coarsening_violations = coarsening_violations(rep, EllGraph(gp, ell, 0));

  RestartParams rp;
  rp.tau1 = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(th.restart_tau1_mult * th.log(n))));
  rp.beta_log = th.restart_beta;
  rp.k_frac = th.restart_k;
  const RestartOutcome ro = restart_search(gp, rp);
  r.restart_iterations = ro.iterations;
  r.restart_trigger = ro.trigger;
  r.restart_reached = ro.final_reached;

  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SweepSummary phase_sweep(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.output.empty()) throw InputError("sweep needs an output directory");
  const fs::path out_dir(cfg.output);
  const fs::path cell_dir = out_dir / "cells";
  fs::create_directories(cell_dir);
  {
    std::ostringstream cs;
    SweepConfig copy = cfg;
    copy.output.clear();
    write_sweep_config(cs, copy);
    write_atomically(out_dir / "config.ini", cs.str());
  }

  auto sorted_unique = [](auto xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
  };
  const auto ns = sorted_unique(cfg.n_values);
  const auto alphas = sorted_unique(cfg.alpha_values);
  const auto ps = sorted_unique(cfg.p_values);
  const unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;

  SweepSummary summary;
  std::vector<SweepRecord> all;
  std::string timings = "n,alpha,p,trial,wall_time\n";

  for (const Node n : ns) {
    for (const double alpha : alphas) {
      for (const double p : ps) {
        ++summary.cells;
        const std::string name = cell_name(n, alpha, p);
        const fs::path cell_path = cell_dir / (name + ".csv");
        const fs::path time_path = cell_dir / (name + ".time");
        auto recs = read_cell(cell_path, n, alpha, p, cfg.trials);
        if (!recs.empty()) {
          ++summary.cells_resumed;
          std::ifstream tin(time_path);
          std::string line;
          while (std::getline(tin, line)) timings += line + '\n';
        } else {
          try {
            recs.assign(cfg.trials, SweepRecord{});
            std::atomic<std::size_t> next{0};
            std::exception_ptr failure;
            std::mutex failure_mu;
            auto worker = [&] {
              for (std::size_t t = next++; t < cfg.trials; t = next++) {
                try {
                  recs[t] = run_trial(n, alpha, p, t, cfg.seed, cfg.ell, cfg.thresholds);
                } catch (...) {
                  std::lock_guard lock(failure_mu);
                  if (!failure) failure = std::current_exception();
                }
              }
            };
            std::vector<std::thread> pool;
            for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
            worker();
            for (auto& th : pool) th.join();
            if (failure) std::rethrow_exception(failure);

            std::string body = header_line() + '\n';
            std::string tbody;
            for (const auto& r : recs) {
              body += record_csv_row(r) + '\n';
              tbody += std::to_string(r.n) + ',' + format_real(r.alpha) + ',' + format_real(r.p) + ',' +
                       std::to_string(r.trial) + ',' + format_real(r.wall_time) + '\n';
            }
            write_atomically(time_path, tbody);
            write_atomically(cell_path, body);
            timings += tbody;
            ++summary.cells_run;
          } catch (const std::exception& e) {
            summary.errors.push_back(name + ": " + e.what());
            continue;
          }
        }
        all.insert(all.end(), recs.begin(), recs.end());
      }
    }
  }

  std::string csv = header_line() + '\n';
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : all) {
    csv += record_csv_row(r) + '\n';
    nlohmann::json obj = nlohmann::json::object();
    std::vector<std::string> f;
    const std::string row = record_csv_row(r);
    boost::split(f, row, boost::is_any_of(","));
    const auto& cols = record_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] == "restart_trigger") {
        obj[cols[i]] = f[i];
      } else if (cols[i] == "alpha" || cols[i] == "p" || cols[i] == "largest_fraction" ||
                 cols[i] == "confined_fraction") {
        obj[cols[i]] = std::stod(f[i]);
      } else {
        obj[cols[i]] = std::stoull(f[i]);
      }
    }
    arr.push_back(std::move(obj));
  }
  write_atomically(out_dir / "records.csv", csv);
  write_atomically(out_dir / "records.json", arr.dump(1) + '\n');
  write_atomically(out_dir / "timings.csv", timings);
  summary.records = all.size();
  return summary;
}

std::vector<SweepRecord> load_records(const std::string& path) {
  fs::path p(path);
  if (fs::is_directory(p)) p /= "records.csv";
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open records '" + p.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != header_line()) throw InputError("records file has an unexpected header");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_record_row(line));
  }
  return out;
}

}  // namespace swperc
