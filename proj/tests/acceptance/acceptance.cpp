// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <bit>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "swperc/analysis.hpp"
#include "swperc/branching.hpp"
#include "swperc/edge_list.hpp"
#include "swperc/epidemic.hpp"
#include "swperc/harness.hpp"
#include "swperc/renorm.hpp"
#include "swperc/rng.hpp"
#include "swperc/small_world.hpp"

using namespace swperc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  double budget_seconds;
  std::function<Outcome(const fs::path&, std::uint64_t)> run;
};

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << body;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Record files of a run: everything except wall-clock timings.
std::map<std::string, std::string> record_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto& p = e.path();
    if (p.filename() == "timings.csv" || p.extension() == ".time") continue;
    out[fs::relative(p, dir).string()] = slurp(p);
  }
  return out;
}

std::vector<Node> distinct_nodes(Node n, std::size_t k, RngStream& rng) {
  std::set<Node> s;
  while (s.size() < k) s.insert(static_cast<Node>(rng.below(n)));
  return {s.begin(), s.end()};
}

// Coupled cascade against active sets.
Outcome coupling(const fs::path& dir, std::uint64_t seed) {
  const int instances = 10000;
  std::ostringstream rec;
  rec << "instance,n,alpha,p,sources,steps,total\n";
  int mismatches = 0;
  for (int i = 0; i < instances; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    const Node n = 5 + static_cast<Node>(rng.below(496));
    const double alpha = 0.2 + 3.3 * rng.uniform();
    const double p = rng.uniform();
    auto g = std::make_shared<const SmallWorldGraph>(sample_small_world(n, alpha, rng));
    const auto gp = percolate(g, p, rng);
    const auto I0 = distinct_nodes(n, 1 + rng.below(4), rng);
    const auto t = coupled_cascade(gp, I0);
    const auto a = active_sets(gp, I0);
    bool same = t.steps() == a.levels.size() + 1 && t.infectious.back().empty();
    for (std::size_t s = 0; same && s < a.levels.size(); ++s) same = t.infectious[s] == a.levels[s];
    mismatches += !same;
    rec << i << ',' << n << ',' << format_real(alpha) << ',' << format_real(p) << ',' << I0.size() << ','
        << t.steps() << ',' << t.total_infected() << '\n';
  }
  write_file(dir / "coupling.csv", rec.str());
  return {mismatches == 0, std::to_string(instances) + " instances, " + std::to_string(mismatches) + " mismatches"};
}

Graph small_world_graph(Node n, const std::vector<NodePair>& bridges) {
  std::vector<NodePair> e;
  for (Node i = 0; i < n; ++i) e.push_back(SmallWorldGraph::ring_edge(n, i));
  e.insert(e.end(), bridges.begin(), bridges.end());
  return Graph(n, e);
}

// Exact enumeration methods agree; Reed-Frost matches the exact law.
Outcome outbreak_laws(const fs::path& dir, std::uint64_t seed) {
  std::ostringstream rec;
  rec << "graph,n,edges,p,k,percolation_enum,cascade_enum\n";
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    Graph g;
    for (;;) {
      const Node n = 5 + static_cast<Node>(rng.below(5));
      const double alpha = 0.5 + 2.5 * rng.uniform();
      g = sample_small_world(n, alpha, rng).to_graph();
      if (g.edge_count() <= 12) break;
    }
    const double p = rng.uniform();
    const auto I0 = distinct_nodes(g.node_count(), 1 + rng.below(2), rng);
    const auto a = exact_outbreak_distribution(g, p, I0, EnumMethod::percolation_enum);
    const auto b = exact_outbreak_distribution(g, p, I0, EnumMethod::cascade_enum);
    for (std::size_t k = 0; k < a.probability.size(); ++k) {
      worst = std::max(worst, std::abs(a.probability[k] - b.probability[k]));
      rec << i << ',' << g.node_count() << ',' << g.edge_count() << ',' << format_real(p) << ',' << k << ','
          << format_real(a.probability[k]) << ',' << format_real(b.probability[k]) << '\n';
    }
  }
  write_file(dir / "enumeration.csv", rec.str());

  struct Fixed {
    Graph g;
    double p;
    std::vector<Node> I0;
  };
  std::vector<NodePair> k5;
  for (Node u = 0; u < 5; ++u)
    for (Node v = u + 1; v < 5; ++v) k5.emplace_back(u, v);
  const std::vector<Fixed> fixed{
      {small_world_graph(6, {{0, 3}, {1, 4}}), 0.4, {0}},
      {Graph(8, std::vector<NodePair>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}}), 0.7, {0}},
      {Graph(7, std::vector<NodePair>{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}}), 0.5, {1}},
      {Graph(5, k5), 0.3, {0}},
      {small_world_graph(10, {{0, 5}, {2, 7}}), 0.6, {0, 5}},
  };
  const int runs = 1000000;
  std::ostringstream mc;
  mc << "graph,k,exact,empirical\n";
  double worst_tv = 0.0;
  for (std::size_t gi = 0; gi < fixed.size(); ++gi) {
    const auto& f = fixed[gi];
    const auto exact = exact_outbreak_distribution(f.g, f.p, f.I0, EnumMethod::cascade_enum);
    std::vector<std::size_t> hist(f.g.node_count() + 1, 0);
    RngStream rng(seed, 1000 + gi);
    for (int r = 0; r < runs; ++r) ++hist[reed_frost(f.g, f.p, f.I0, rng).total_infected()];
    double tv = 0.0;
    for (std::size_t k = 0; k < hist.size(); ++k) {
      const double emp = static_cast<double>(hist[k]) / runs;
      tv += std::abs(emp - exact.probability[k]);
      mc << gi << ',' << k << ',' << format_real(exact.probability[k]) << ',' << hist[k] << '\n';
    }
    worst_tv = std::max(worst_tv, 0.5 * tv);
  }
  write_file(dir / "reed_frost.csv", mc.str());
  std::ostringstream d;
  d << "max entry gap " << worst << ", max TV " << format_real(worst_tv);
  return {worst <= 1e-12 && worst_tv < 0.01, d.str()};
}

// A phase sweep judged by the regime report; every group must be of the
// expected regime and pass.
Outcome sweep_phase(const fs::path& dir, SweepConfig cfg, const std::string& regime) {
  cfg.output = (dir / "sweep").string();
  cfg.threads = 0;
  const auto summary = phase_sweep(cfg);
  const std::size_t cells = cfg.n_values.size() * cfg.alpha_values.size() * cfg.p_values.size();
  std::ostringstream d;
  if (!summary.errors.empty()) return {false, "cell error: " + summary.errors.front()};
  if (summary.records != cells * cfg.trials) {
    return {false, "expected " + std::to_string(cells * cfg.trials) + " records, got " +
                       std::to_string(summary.records)};
  }
  const auto verdicts = regime_report(load_records(cfg.output), cfg.thresholds);
  std::ostringstream rep;
  write_report_csv(rep, verdicts);
  write_file(dir / "report.csv", rep.str());
  bool ok = !verdicts.empty();
  for (const auto& v : verdicts) {
    ok = ok && v.regime == regime && v.verdict == Verdict::pass;
    d << "[a=" << format_real(v.alpha) << " p=" << format_real(v.p) << " " << v.regime << " "
      << to_string(v.verdict) << ": " << v.detail << "] ";
  }
  return {ok, d.str()};
}

SweepConfig sweep(std::vector<Node> ns, std::vector<double> alphas, double p, std::size_t trials,
                  std::uint64_t seed) {
  SweepConfig cfg;
  cfg.n_values = std::move(ns);
  cfg.alpha_values = std::move(alphas);
  cfg.p_values = {p};
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.ell = 20;
  return cfg;
}

Outcome subcritical(const fs::path& dir, std::uint64_t seed) {
  return sweep_phase(dir, sweep({10000, 100000}, {0.5, 1.5, 3.0}, 0.3, 50, seed), "subcritical");
}

Outcome high_alpha(const fs::path& dir, std::uint64_t seed) {
  return sweep_phase(dir, sweep({10000, 100000, 1000000}, {2.5}, 0.9, 30, seed), "alpha>2");
}

Outcome mid_alpha(const fs::path& dir, std::uint64_t seed) {
  return sweep_phase(dir, sweep({10000, 100000, 1000000}, {1.5}, 0.95, 20, seed), "1<alpha<2");
}

Outcome low_alpha(const fs::path& dir, std::uint64_t seed) {
  return sweep_phase(dir, sweep({10000, 100000, 1000000}, {0.5}, 0.95, 20, seed), "alpha<1");
}

// Maximum degree of SW(10^4, alpha).
Outcome degrees(const fs::path& dir, std::uint64_t seed) {
  const Node n = 10000;
  const int samples = 1000;
  const double cap = 4.0 * std::log(static_cast<double>(n)) + 2.0;
  std::ostringstream rec, d;
  rec << "alpha,sample,max_degree\n";
  bool ok = true;
  for (const double alpha : {0.5, 1.5, 3.0}) {
    int within = 0;
    for (int s = 0; s < samples; ++s) {
      RngStream rng(derive_seed(seed, std::bit_cast<std::uint64_t>(alpha)), static_cast<std::uint64_t>(s));
      const auto deg = max_degree(sample_small_world(n, alpha, rng));
      within += static_cast<double>(deg) <= cap;
      rec << format_real(alpha) << ',' << s << ',' << deg << '\n';
    }
    const double frac = static_cast<double>(within) / samples;
    ok = ok && frac >= 0.999;
    d << "alpha " << format_real(alpha) << ": " << format_real(frac) << " within " << format_real(cap) << "; ";
  }
  write_file(dir / "degrees.csv", rec.str());
  return {ok, d.str()};
}

// Supernode isolation and super-bridge rates at alpha = 3, p = 0.5.
Outcome isolation(const fs::path& dir, std::uint64_t seed) {
  std::ostringstream rec, d;
  rec << "ell,trials,isolated,superbridge,isolated_lower_bound,superbridge_upper_bound,coarsening_violations\n";
  bool ok = true;
  for (const Node ell : {4u, 8u, 16u}) {
    const auto r = supernode_isolation_rate(1000, 3.0, 0.5, ell, 100000, derive_seed(seed, ell));
    ok = ok && r.isolated_bound_holds(3.0) && r.superbridge_bound_holds(3.0);
    rec << ell << ',' << r.trials << ',' << r.isolated << ',' << r.superbridge << ','
        << format_real(r.isolated_lower_bound) << ',' << format_real(r.superbridge_upper_bound) << ','
        << r.coarsening_violations << '\n';
    d << "ell " << ell << ": isolated " << format_real(r.rate_isolated) << " >= " << format_real(r.isolated_lower_bound)
      << (r.isolated_bound_holds(3.0) ? " ok" : " FAILED") << ", super-bridge " << format_real(r.rate_superbridge)
      << " <= " << format_real(r.superbridge_upper_bound) << (r.superbridge_bound_holds(3.0) ? " ok" : " FAILED")
      << "; ";
  }
  write_file(dir / "isolation.csv", rec.str());
  return {ok, d.str()};
}

// Coarse-graining violations over the trials of criteria 4 and 8.
Outcome coarsening(const fs::path& root) {
  const fs::path sweep = root / "c4" / "sweep" / "records.csv";
  const fs::path iso = root / "c8" / "isolation.csv";
  if (!fs::exists(sweep) || !fs::exists(iso)) return {false, "criteria 4 and 8 must run first"};
  std::size_t trials = 0, violations = 0;
  for (const auto& r : load_records(sweep.string())) {
    ++trials;
    violations += r.coarsening_violations;
  }
  std::ifstream in(iso);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    trials += std::stoull(f[1]);
    violations += std::stoull(f.back());
  }
  return {violations == 0, std::to_string(trials) + " trials, " + std::to_string(violations) + " violations"};
}

// Galton-Watson extinction.
Outcome extinction(const fs::path& dir, std::uint64_t seed) {
  std::vector<ExtinctionReport> reports;
  reports.push_back(extinction_rate(Offspring::poisson(2.0), 10000, 100000, seed));
  const bool super_ok = std::abs(reports[0].rate - 0.2032) <= 0.005;
  bool sub_ok = true;
  std::ostringstream d;
  d << "poisson:2 " << format_real(reports[0].rate) << "; ";
  for (const auto* spec : {"poisson:0.9", "poisson:0.5", "binomial:10:0.09", "bernoulli:0.9", "empirical:0,0,1,2"}) {
    reports.push_back(extinction_rate(Offspring::parse(spec), 10000, 100000, seed));
    sub_ok = sub_ok && reports.back().rate >= 0.999;
    d << spec << ' ' << format_real(reports.back().rate) << "; ";
  }
  std::ostringstream rec;
  write_extinction_csv(rec, reports);
  write_file(dir / "extinction.csv", rec.str());
  return {super_ok && sub_ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run"};
  std::string workdir = "acceptance_runs";
  std::uint64_t seed = 20261017;
  std::vector<int> only;
  app.add_option("--workdir", workdir, "Directory for run artifacts");
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--only", only, "Run only these criteria (11 reruns whichever ran)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, 60, coupling},   {2, 300, outbreak_laws}, {3, 600, subcritical}, {4, 1800, high_alpha},
      {5, 3600, mid_alpha}, {6, 1800, low_alpha},   {7, 300, degrees},     {8, 600, isolation},
      {10, 120, extinction},
  };
  auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  const fs::path root(workdir);
  fs::remove_all(root);
  fs::create_directories(root);
  bool all = true;
  auto report = [&](int id, const Outcome& o, double secs, double budget) {
    const bool pass = o.pass && secs < budget;
    all = all && pass;
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << " (" << std::fixed
              << std::setprecision(1) << secs << " s of " << budget << " s) " << o.detail << std::endl;
    std::cout.unsetf(std::ios::floatfield);
  };
  auto timed = [](auto&& f) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    return std::pair{o, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
  };

  std::vector<const Criterion*> ran;
  for (const auto& c : criteria) {
    if (!wanted(c.id)) continue;
    const fs::path dir = root / ("c" + std::to_string(c.id));
    fs::create_directories(dir);
    const auto [o, secs] = timed([&] { return c.run(dir, derive_seed(seed, c.id)); });
    report(c.id, o, secs, c.budget_seconds);
    ran.push_back(&c);
    if (c.id == 8 && wanted(9)) {
      const auto [o9, s9] = timed([&] { return coarsening(root); });
      report(9, o9, s9, 60);
    }
  }

  if (wanted(11)) {
    const auto [o, secs] = timed([&] {
      std::ostringstream d;
      bool same = !ran.empty();
      for (const auto* c : ran) {
        const fs::path first = root / ("c" + std::to_string(c->id));
        const fs::path again = root / "rerun" / ("c" + std::to_string(c->id));
        fs::create_directories(again);
        c->run(again, derive_seed(seed, c->id));
        const auto a = record_files(first), b = record_files(again);
        const bool eq = !a.empty() && a == b;
        same = same && eq;
        d << c->id << (eq ? " identical" : " DIFFERS") << " (" << a.size() << " files); ";
      }
      return Outcome{same, d.str()};
    });
    double budget = 0;
    for (const auto* c : ran) budget += c->budget_seconds;
    report(11, o, secs, budget);
  }
  return all ? 0 : 1;
}
