#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swperc/analysis.hpp"

namespace swperc {

/// Numeric constants that the model leaves symbolic. Defaults are the
/// calibrated values used by the acceptance sweeps.
struct Thresholds {
  /// Logarithm base for degree and growth checks; "e" or a number > 1.
  std::string log_base = "e";

  std::size_t diameter_exact_limit = 10000;
  std::size_t diameter_bfs_budget = 64;

  double restart_tau1_mult = 2.0;
  double restart_beta = 1.0;
  double restart_k = 10.0;
  double restart_sigma_mult = 1.0;

  double subcritical_p = 1.0 / 3.0;
  double subcritical_log_mult = 60.0;
  double subcritical_trial_fraction = 0.98;
  double subcritical_growth_ratio = 1.5;

  double high_alpha_fraction_max = 0.01;
  double high_alpha_r2_min = 0.8;

  double supercritical_p = 0.95;
  double giant_fraction_min = 0.2;
  double giant_trial_fraction = 0.95;
  double mid_alpha_diam_mult = 5.0;
  double mid_alpha_slope_max = 3.0;
  double low_alpha_diam_mult = 10.0;
  double restart_trial_fraction = 0.95;

  /// log in the configured base.
  double log(double x) const;
};

struct SweepConfig {
  std::vector<Node> n_values;
  std::vector<double> alpha_values;
  std::vector<double> p_values;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  Node ell = 20;
  unsigned threads = 1;
  std::string output;
  Thresholds thresholds;

  /// Throws InputError when a list is empty, trials is 0, or a cell violates
  /// the sampling preconditions.
  void validate() const;
};

/// INI text: a [sweep] section (n_values, alpha_values, p_values, trials,
/// seed, ell, threads, output) and an optional [thresholds] section with any
/// Thresholds field by name. Lists are comma separated.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::string& path);
void write_sweep_config(std::ostream& out, const SweepConfig& cfg);

struct SweepRecord {
  Node n = 0;
  double alpha = 0.0;
  double p = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Node ell = 0;
  double largest_fraction = 0.0;
  std::size_t max_component_size = 0;
  std::uint64_t diam_lower = 0;
  std::uint64_t diam_upper = 0;
  Node spread_q50 = 0;
  Node spread_q90 = 0;
  Node spread_q99 = 0;
  Node spread_max = 0;
  /// Fraction of nodes whose component stays within ring distance 2 ell^2.
  double confined_fraction = 0.0;
  std::size_t max_degree = 0;
  std::size_t coarsening_violations = 0;
  std::size_t restart_iterations = 0;
  RestartTrigger restart_trigger = RestartTrigger::none;
  std::size_t restart_reached = 0;
  double wall_time = 0.0;
};

/// Column names of records.csv, in order.
const std::vector<std::string>& record_columns();
std::string record_csv_row(const SweepRecord& r);
SweepRecord parse_record_row(const std::string& line);

/// Seed of one trial of one cell.
std::uint64_t trial_seed(std::uint64_t seed, Node n, double alpha, double p, std::size_t trial);

/// One full trial: sample, percolate, measure.
SweepRecord run_trial(Node n, double alpha, double p, std::size_t trial, std::uint64_t seed,
                      Node ell, const Thresholds& th);

struct SweepSummary {
  std::size_t cells = 0;
  std::size_t cells_run = 0;
  std::size_t cells_resumed = 0;
  std::vector<std::string> errors;
  std::size_t records = 0;
};

/// Runs every (n, alpha, p) cell. Each finished cell is written atomically
/// to <output>/cells/, and cells already present are reused, so an
/// interrupted sweep resumes where it stopped. Finally records.csv and
/// records.json are assembled in canonical key order; wall times go to
/// timings.csv so that the record files are reproducible byte for byte.
SweepSummary phase_sweep(const SweepConfig& cfg);

/// Reads records.csv (or a directory containing it).
std::vector<SweepRecord> load_records(const std::string& path);

enum class Verdict { pass, fail, inconclusive, info };
const char* to_string(Verdict v);

struct RegimeVerdict {
  std::string regime;
  double alpha = 0.0;
  double p = 0.0;
  std::vector<Node> n_values;
  Verdict verdict = Verdict::inconclusive;
  std::string detail;
};

/// Per (alpha, p) group, checks the frozen thresholds of its regime:
/// subcritical (p below subcritical_p), alpha > 2, 1 < alpha < 2 and
/// alpha < 1 at p >= supercritical_p. Other groups are reported as info.
std::vector<RegimeVerdict> regime_report(const std::vector<SweepRecord>& records,
                                         const Thresholds& th = {});
void write_report_csv(std::ostream& out, const std::vector<RegimeVerdict>& v);
bool report_passes(const std::vector<RegimeVerdict>& v);

}  // namespace swperc
