#include "swperc/branching.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "swperc/edge_list.hpp"
#include "swperc/errors.hpp"

namespace swperc {

namespace {

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("offspring probability must lie in [0, 1]");
}

template <typename T>
T parse_field(const std::string& text, const std::string& spec) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("bad offspring spec '" + spec + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

Offspring Offspring::constant(std::uint64_t k) {
  Offspring o(Kind::constant);
  o.count_ = k;
  return o;
}

Offspring Offspring::bernoulli(double q) {
  check_q(q);
  Offspring o(Kind::bernoulli);
  o.param_ = q;
  return o;
}

Offspring Offspring::binomial(std::uint64_t trials, double q) {
  check_q(q);
  Offspring o(Kind::binomial);
  o.count_ = trials;
  o.param_ = q;
  return o;
}

Offspring Offspring::poisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("Poisson mean must be finite and >= 0");
  Offspring o(Kind::poisson);
  o.param_ = lambda;
  return o;
}

Offspring Offspring::empirical(std::vector<std::uint64_t> samples) {
  if (samples.empty()) throw InputError("empirical offspring law needs at least one sample");
  Offspring o(Kind::empirical);
  o.samples_ = std::move(samples);
  return o;
}

Offspring Offspring::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() < 2) throw InputError("bad offspring spec '" + spec + "'");
  const std::string& kind = parts[0];
  if (kind == "constant" && parts.size() == 2) return constant(parse_field<std::uint64_t>(parts[1], spec));
  if (kind == "bernoulli" && parts.size() == 2) return bernoulli(parse_field<double>(parts[1], spec));
  if (kind == "binomial" && parts.size() == 3) {
    return binomial(parse_field<std::uint64_t>(parts[1], spec), parse_field<double>(parts[2], spec));
  }
  if (kind == "poisson" && parts.size() == 2) return poisson(parse_field<double>(parts[1], spec));
  if (kind == "empirical" && parts.size() == 2) {
    std::vector<std::uint64_t> s;
    for (const auto& tok : split(parts[1], ',')) s.push_back(parse_field<std::uint64_t>(tok, spec));
    return empirical(std::move(s));
  }
  throw InputError("bad offspring spec '" + spec + "'");
}

std::uint64_t Offspring::operator()(RngStream& rng) const {
  switch (kind_) {
    case Kind::constant: return count_;
    case Kind::bernoulli: return rng.bernoulli(param_) ? 1 : 0;
    case Kind::binomial: return std::binomial_distribution<std::uint64_t>(count_, param_)(rng);
    case Kind::poisson:
      return param_ == 0.0 ? 0 : std::poisson_distribution<std::uint64_t>(param_)(rng);
    case Kind::empirical: return samples_[rng.below(samples_.size())];
  }
  return 0;
}

double Offspring::mean() const {
  switch (kind_) {
    case Kind::constant: return static_cast<double>(count_);
    case Kind::bernoulli: return param_;
    case Kind::binomial: return static_cast<double>(count_) * param_;
    case Kind::poisson: return param_;
    case Kind::empirical:
      return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
  }
  return 0.0;
}

std::string Offspring::describe() const {
  switch (kind_) {
    case Kind::constant: return "constant:" + std::to_string(count_);
    case Kind::bernoulli: return "bernoulli:" + format_real(param_);
    case Kind::binomial: return "binomial:" + std::to_string(count_) + ":" + format_real(param_);
    case Kind::poisson: return "poisson:" + format_real(param_);
    case Kind::empirical: {
      std::string s = "empirical:";
      for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(samples_[i]);
      }
      return s;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

GwTrajectory galton_watson(const Offspring& w, std::size_t budget, RngStream& rng) {
  if (budget < 1) throw InputError("budget must be at least 1");
  GwTrajectory tr;
  tr.B.push_back(1);
  for (std::size_t t = 1; t <= budget; ++t) {
    const std::uint64_t wt = w(rng);
    tr.W.push_back(wt);
    tr.B.push_back(tr.B.back() + wt - 1);
    if (tr.B.back() == 0) {
      tr.sigma = t;
      break;
    }
  }
  return tr;
}

ExtinctionReport extinction_rate(const Offspring& w, std::size_t budget, std::size_t trials,
                                 std::uint64_t seed) {
  if (trials < 1) throw InputError("trials must be at least 1");
  if (budget < 1) throw InputError("budget must be at least 1");
  ExtinctionReport r;
  r.offspring = w.describe();
  r.budget = budget;
  r.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    RngStream rng(seed, i);
    std::uint64_t b = 1;
    for (std::size_t t = 1; t <= budget; ++t) {
      b = b + w(rng) - 1;
      if (b == 0) {
        ++r.extinct;
        break;
      }
      if (b > budget - t) break;
    }
  }
  const double nt = static_cast<double>(trials);
  r.rate = r.extinct / nt;
  const double z = 1.959963984540054;
  const double denom = 1.0 + z * z / nt;
  const double centre = (r.rate + z * z / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(r.rate * (1.0 - r.rate) / nt + z * z / (4.0 * nt * nt)) / denom;
  r.ci_low = std::max(0.0, centre - half);
  r.ci_high = std::min(1.0, centre + half);
  return r;
}

void write_extinction_csv(std::ostream& out, std::span<const ExtinctionReport> reports) {
  out << "offspring,budget,trials,rate,ci_low,ci_high\n";
  for (const auto& r : reports) {
    out << r.offspring << ',' << r.budget << ',' << r.trials << ',' << format_real(r.rate) << ','
        << format_real(r.ci_low) << ',' << format_real(r.ci_high) << '\n';
  }
}

// ---------------------------------------------------------------------------

DominanceReport dominate_check(std::span<const std::uint64_t> observed, const Offspring& bound,
                               std::size_t trials, std::uint64_t seed, double alpha_level) {
  if (observed.empty()) throw InputError("no observed additions to compare");
  if (trials < 1) throw InputError("trials must be at least 1");
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) throw InputError("alpha_level must lie in (0, 1)");

  std::vector<std::uint64_t> obs(observed.begin(), observed.end());
  std::sort(obs.begin(), obs.end());
  std::vector<std::uint64_t> sim(trials);
  RngStream rng(seed, 0);
  for (auto& x : sim) x = bound(rng);
  std::sort(sim.begin(), sim.end());

  DominanceReport r;
  r.observed = obs.size();
  r.simulated = sim.size();
  r.observed_mean = std::accumulate(obs.begin(), obs.end(), 0.0) / obs.size();
  r.bound_mean = std::accumulate(sim.begin(), sim.end(), 0.0) / sim.size();
  const std::uint64_t top = std::max(obs.back(), sim.back());
  double worst = -1.0;
  for (std::uint64_t k = 0; k <= top; ++k) {
    const double f_obs = static_cast<double>(std::upper_bound(obs.begin(), obs.end(), k) - obs.begin()) / obs.size();
    const double f_sim = static_cast<double>(std::upper_bound(sim.begin(), sim.end(), k) - sim.begin()) / sim.size();
    worst = std::max(worst, f_sim - f_obs);
  }
  r.max_violation = worst;
  const double l = std::log(4.0 / alpha_level);
  r.band = std::sqrt(l / (2.0 * obs.size())) + std::sqrt(l / (2.0 * sim.size()));
  r.holds = worst <= r.band;
  return r;
}

DominanceReport dominate_check(std::span<const BfsTrace> traces, const Offspring& bound,
                               std::size_t trials, std::uint64_t seed, double alpha_level) {
  std::vector<std::uint64_t> obs;
  for (const auto& t : traces) obs.insert(obs.end(), t.additions.begin(), t.additions.end());
  return dominate_check(obs, bound, trials, seed, alpha_level);
}

}  // namespace swperc
