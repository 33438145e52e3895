#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "swperc/errors.hpp"
#include "swperc/harness.hpp"

using namespace swperc;
namespace fs = std::filesystem;

namespace {

SweepConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sweep_config(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("swperc_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

SweepRecord record(Node n, double alpha, double p, std::size_t trial) {
  SweepRecord r;
  r.n = n;
  r.alpha = alpha;
  r.p = p;
  r.trial = trial;
  r.ell = 4;
  return r;
}

}  // namespace

TEST_CASE("sweep config parsing") {
  const auto cfg = parse(
      "[sweep]\n"
      "n_values = 100, 1000\n"
      "alpha_values = 0.5,2.5\n"
      "p_values = 0.2\n"
      "trials = 7\n"
      "seed = 42\n"
      "ell = 6\n"
      "output = out\n"
      "[thresholds]\n"
      "log_base = 2\n"
      "giant_fraction_min = 0.3\n");
  CHECK(cfg.n_values == std::vector<Node>{100, 1000});
  CHECK(cfg.alpha_values == std::vector<double>{0.5, 2.5});
  CHECK(cfg.p_values == std::vector<double>{0.2});
  CHECK(cfg.trials == 7);
  CHECK(cfg.seed == 42);
  CHECK(cfg.ell == 6);
  CHECK(cfg.output == "out");
  CHECK(cfg.thresholds.giant_fraction_min == 0.3);
  CHECK(cfg.thresholds.log(8.0) == doctest::Approx(3.0));
  CHECK(cfg.thresholds.subcritical_p == doctest::Approx(1.0 / 3.0));

  std::ostringstream out;
  write_sweep_config(out, cfg);
  const auto again = parse(out.str());
  CHECK(again.n_values == cfg.n_values);
  CHECK(again.alpha_values == cfg.alpha_values);
  CHECK(again.trials == cfg.trials);
  CHECK(again.thresholds.log_base == "2");
  CHECK(again.thresholds.giant_fraction_min == 0.3);

  const char* bad[] = {
      "n_values = 100\n",
      "[sweep]\nalpha_values = 1\np_values = 0.5\n",
      "[sweep]\nn_values = 100\nalpha_values = 1\np_values = 0.5\nbogus = 1\n",
      "[sweep]\nn_values = 100\nalpha_values = 1\np_values = 0.5\n[thresholds]\nbogus = 1\n",
      "[sweep]\nn_values = 100\nalpha_values = 1\np_values = 1.5\n",
      "[sweep]\nn_values = 100\nalpha_values = 0\np_values = 0.5\n",
      "[sweep]\nn_values = 4\nalpha_values = 1\np_values = 0.5\n",
      "[sweep]\nn_values = 100.5\nalpha_values = 1\np_values = 0.5\n",
      "[sweep]\nn_values = 100\nalpha_values = x\np_values = 0.5\n",
      "[sweep]\nn_values = 100\nalpha_values = 1\np_values = 0.5\ntrials = 0\n",
      "[sweep]\nn_values = 100\nalpha_values = 1\np_values = 0.5\ntrials = two\n",
      "[sweep]\nn_values = 30\nalpha_values = 1\np_values = 0.5\nell = 11\n",
      "[sweep]\nn_values = 100\nalpha_values = 1\np_values = 0.5\n[thresholds]\nlog_base = 1\n",
      "[sweep]\nn_values = 100\nalpha_values = 1\np_values = 0.5\n[thresholds]\nlog_base = ten\n",
  };
  for (const auto* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse(text), InputError);
  }
  CHECK_THROWS_AS(load_sweep_config("/nonexistent/config.ini"), InputError);
}

TEST_CASE("record rows") {
  SweepRecord r = record(1000, 1.5, 0.95, 3);
  r.seed = 18446744073709551615ull;
  r.largest_fraction = 0.123456789;
  r.max_component_size = 123;
  r.diam_lower = 7;
  r.diam_upper = 9;
  r.spread_q50 = 1;
  r.spread_q90 = 2;
  r.spread_q99 = 3;
  r.spread_max = 4;
  r.confined_fraction = 1.0 / 3.0;
  r.max_degree = 11;
  r.restart_iterations = 5;
  r.restart_trigger = RestartTrigger::queue;
  r.restart_reached = 999;
  const auto row = record_csv_row(r);
  const auto back = parse_record_row(row);
  CHECK(record_csv_row(back) == row);
  CHECK(back.confined_fraction == r.confined_fraction);
  CHECK(back.seed == r.seed);
  CHECK(back.restart_trigger == RestartTrigger::queue);
  CHECK(std::count(row.begin(), row.end(), ',') + 1 == static_cast<long>(record_columns().size()));
  CHECK_THROWS_AS(parse_record_row("1,2,3"), InputError);
  CHECK_THROWS_AS(parse_record_row(row.substr(0, row.rfind(',')) + ",x"), InputError);
}

TEST_CASE("trials are deterministic") {
  const Thresholds th;
  const auto a = run_trial(2000, 1.5, 0.7, 4, 11, 5, th);
  const auto b = run_trial(2000, 1.5, 0.7, 4, 11, 5, th);
  CHECK(record_csv_row(a) == record_csv_row(b));
  CHECK(a.seed == trial_seed(11, 2000, 1.5, 0.7, 4));
  CHECK(a.seed != trial_seed(11, 2000, 1.5, 0.7, 5));
  CHECK(a.seed != trial_seed(12, 2000, 1.5, 0.7, 4));
  CHECK(a.seed != trial_seed(11, 2000, 1.5000000000000002, 0.7, 4));
  CHECK(a.diam_lower <= a.diam_upper);
  CHECK(a.largest_fraction == doctest::Approx(a.max_component_size / 2000.0));
  CHECK(a.spread_q50 <= a.spread_q90);
  CHECK(a.spread_q90 <= a.spread_q99);
  CHECK(a.spread_q99 <= a.spread_max);
  CHECK(a.confined_fraction >= 0.0);
  CHECK(a.confined_fraction <= 1.0);

  const auto full = run_trial(500, 2.5, 1.0, 0, 1, 5, th);
  CHECK(full.largest_fraction == 1.0);
  CHECK(full.coarsening_violations == 0);
  const auto empty = run_trial(500, 2.5, 0.0, 0, 1, 5, th);
  CHECK(empty.max_component_size == 1);
  CHECK(empty.diam_upper == 0);
  CHECK(empty.spread_max == 0);
  CHECK(empty.confined_fraction == 1.0);
}

TEST_CASE("sweep writes, resumes and reproduces") {
  const fs::path dir = scratch("sweep");
  SweepConfig cfg;
  cfg.n_values = {300, 200};
  cfg.alpha_values = {2.5, 0.5};
  cfg.p_values = {0.5};
  cfg.trials = 3;
  cfg.seed = 5;
  cfg.ell = 4;
  cfg.threads = 2;
  cfg.output = dir.string();

  const auto s1 = phase_sweep(cfg);
  CHECK(s1.cells == 4);
  CHECK(s1.cells_run == 4);
  CHECK(s1.cells_resumed == 0);
  CHECK(s1.errors.empty());
  CHECK(s1.records == 12);
  const std::string csv = slurp(dir / "records.csv");
  const std::string json = slurp(dir / "records.json");
  CHECK(fs::exists(dir / "timings.csv"));
  CHECK(fs::exists(dir / "config.ini"));
  CHECK(load_sweep_config((dir / "config.ini").string()).n_values == cfg.n_values);

  const auto recs = load_records(dir.string());
  REQUIRE(recs.size() == 12);
  // Canonical order: n, then alpha, then p, then trial.
  CHECK(recs.front().n == 200);
  CHECK(recs.front().alpha == 0.5);
  CHECK(recs.back().n == 300);
  CHECK(recs.back().alpha == 2.5);
  CHECK(recs.back().trial == 2);
  for (const auto& r : recs) CHECK(r.seed == trial_seed(5, r.n, r.alpha, r.p, r.trial));

  const auto j = nlohmann::json::parse(json);
  REQUIRE(j.size() == 12);
  CHECK(j[0]["n"] == 200);
  CHECK(j[0].size() == record_columns().size());

  std::size_t cell_files = 0;
  for (const auto& e : fs::directory_iterator(dir / "cells")) cell_files += e.path().extension() == ".csv";
  CHECK(cell_files == 4);

  fs::path victim;
  for (const auto& e : fs::directory_iterator(dir / "cells")) {
    if (e.path().extension() == ".csv") victim = e.path();
  }
  fs::remove(victim);
  fs::remove(dir / "records.csv");
  const auto s2 = phase_sweep(cfg);
  CHECK(s2.cells_run == 1);
  CHECK(s2.cells_resumed == 3);
  CHECK(slurp(dir / "records.csv") == csv);
  CHECK(slurp(dir / "records.json") == json);

  // A truncated cell is rerun rather than trusted.
  {
    const std::string body = slurp(victim);
    std::ofstream(victim, std::ios::binary | std::ios::trunc) << body.substr(0, body.size() / 2);
  }
  const auto s3 = phase_sweep(cfg);
  CHECK(s3.cells_run == 1);
  CHECK(slurp(dir / "records.csv") == csv);

  const fs::path other = scratch("sweep_fresh");
  cfg.output = other.string();
  cfg.threads = 1;
  phase_sweep(cfg);
  CHECK(slurp(other / "records.csv") == csv);
  CHECK(slurp(other / "records.json") == json);

  cfg.output.clear();
  CHECK_THROWS_AS(phase_sweep(cfg), InputError);
  CHECK_THROWS_AS(load_records((dir / "missing").string()), InputError);
  fs::remove_all(dir);
  fs::remove_all(other);
}

TEST_CASE("regime report") {
  Thresholds th;

  SUBCASE("subcritical pass and fail") {
    std::vector<SweepRecord> rs;
    for (const Node n : {1000u, 10000u}) {
      for (std::size_t t = 0; t < 10; ++t) {
        auto r = record(n, 1.5, 0.2, t);
        r.max_component_size = 10;
        rs.push_back(r);
      }
    }
    auto v = regime_report(rs, th);
    REQUIRE(v.size() == 1);
    CHECK(v[0].regime == "subcritical");
    CHECK(v[0].verdict == Verdict::pass);
    CHECK(report_passes(v));

    for (auto& r : rs) {
      if (r.n == 10000) r.max_component_size = 20;
    }
    v = regime_report(rs, th);
    CHECK(v[0].verdict == Verdict::fail);
    CHECK_FALSE(report_passes(v));
  }

  SUBCASE("a single n is inconclusive") {
    std::vector<SweepRecord> rs;
    for (std::size_t t = 0; t < 5; ++t) {
      auto r = record(1000, 1.5, 0.2, t);
      r.max_component_size = 5;
      rs.push_back(r);
    }
    const auto v = regime_report(rs, th);
    CHECK(v[0].verdict == Verdict::inconclusive);
    CHECK(report_passes(v));
  }

  SUBCASE("alpha > 2") {
    std::vector<SweepRecord> rs;
    for (const Node n : {1000u, 10000u, 100000u}) {
      for (std::size_t t = 0; t < 4; ++t) {
        auto r = record(n, 3.0, 0.9, t);
        r.ell = 64;
        r.largest_fraction = 0.001;
        r.max_component_size = static_cast<std::size_t>(5 * std::log(n));
        r.confined_fraction = 1.0;
        rs.push_back(r);
      }
    }
    auto v = regime_report(rs, th);
    CHECK(v[0].regime == "alpha>2");
    CHECK(v[0].verdict == Verdict::pass);
    rs[5].coarsening_violations = 1;
    v = regime_report(rs, th);
    CHECK(v[0].verdict == Verdict::fail);
  }

  SUBCASE("alpha < 1 and the descriptive band") {
    std::vector<SweepRecord> rs;
    for (std::size_t t = 0; t < 20; ++t) {
      auto r = record(10000, 0.5, 0.95, t);
      r.largest_fraction = 0.9;
      r.diam_upper = 20;
      r.restart_trigger = RestartTrigger::fraction;
      r.restart_iterations = 3;
      rs.push_back(r);
      auto d = record(10000, 1.5, 0.5, t);
      d.largest_fraction = 0.5;
      rs.push_back(d);
    }
    auto v = regime_report(rs, th);
    REQUIRE(v.size() == 2);
    CHECK(v[0].regime == "alpha<1");
    CHECK(v[0].verdict == Verdict::pass);
    CHECK(v[1].regime == "descriptive");
    CHECK(v[1].verdict == Verdict::info);

    rs[0].restart_trigger = RestartTrigger::none;
    rs[2].restart_trigger = RestartTrigger::none;
    v = regime_report(rs, th);
    CHECK(v[0].verdict == Verdict::fail);

    std::ostringstream out;
    write_report_csv(out, v);
    CHECK(out.str().rfind("regime,alpha,p,n_values,verdict,detail\nalpha<1,0.5,0.95,10000,FAIL,", 0) == 0);
  }
}
