#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swperc/analysis.hpp"
#include "swperc/rng.hpp"

namespace swperc {

/// Offspring law W of a Galton-Watson process.
class Offspring {
 public:
  enum class Kind { constant, bernoulli, binomial, poisson, empirical };

  static Offspring constant(std::uint64_t k);
  static Offspring bernoulli(double q);
  static Offspring binomial(std::uint64_t trials, double q);
  static Offspring poisson(double lambda);
  /// Resamples uniformly from the given observations.
  static Offspring empirical(std::vector<std::uint64_t> samples);

  /// "constant:K", "bernoulli:Q", "binomial:M:Q", "poisson:L" or
  /// "empirical:a,b,c". Throws InputError on anything else.
  static Offspring parse(const std::string& spec);

  std::uint64_t operator()(RngStream& rng) const;
  double mean() const;
  Kind kind() const { return kind_; }
  /// Inverse of parse().
  std::string describe() const;

 private:
  Offspring(Kind kind) : kind_(kind) {}
  Kind kind_;
  std::uint64_t count_ = 0;
  double param_ = 0.0;
  std::vector<std::uint64_t> samples_;
};

/// B_0 = 1, B_t = B_{t-1} + W_t - 1 until B_t = 0 or the budget runs out.
struct GwTrajectory {
  std::vector<std::uint64_t> B;
  std::vector<std::uint64_t> W;  ///< W[t - 1] is W_t
  /// Extinction time; empty when the process is still alive at the budget.
  std::optional<std::size_t> sigma;

  bool extinct() const { return sigma.has_value(); }
};

GwTrajectory galton_watson(const Offspring& w, std::size_t budget, RngStream& rng);

struct ExtinctionReport {
  std::string offspring;
  std::size_t budget = 0;
  std::size_t trials = 0;
  std::size_t extinct = 0;
  double rate = 0.0;
  /// 95% Wilson score interval.
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Fraction of trials extinct within the budget; trial t uses stream t of
/// `seed`. A run stops early once B_t exceeds the steps left, since it can
/// then no longer reach 0 in time.
ExtinctionReport extinction_rate(const Offspring& w, std::size_t budget, std::size_t trials,
                                 std::uint64_t seed);

void write_extinction_csv(std::ostream& out, std::span<const ExtinctionReport> reports);

struct DominanceReport {
  std::size_t observed = 0;
  std::size_t simulated = 0;
  /// max_k (F_bound(k) - F_observed(k)); non-positive means exact dominance.
  double max_violation = 0.0;
  /// Simultaneous DKW band of both empirical CDFs.
  double band = 0.0;
  double observed_mean = 0.0;
  double bound_mean = 0.0;
  bool holds = false;
};

/// Empirical first-order dominance of the observed per-iteration additions
/// by i.i.d. draws of `bound`: F_observed(k) >= F_bound(k) for all k, up to
/// a DKW band at level `alpha_level`. Throws InputError when nothing was
/// observed or trials is 0.
DominanceReport dominate_check(std::span<const std::uint64_t> observed, const Offspring& bound,
                               std::size_t trials, std::uint64_t seed, double alpha_level = 0.01);
DominanceReport dominate_check(std::span<const BfsTrace> traces, const Offspring& bound,
                               std::size_t trials, std::uint64_t seed, double alpha_level = 0.01);

}  // namespace swperc
