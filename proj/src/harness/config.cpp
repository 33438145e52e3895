#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "swperc/edge_list.hpp"
#include "swperc/errors.hpp"
#include "swperc/harness.hpp"

namespace swperc {

namespace pt = boost::property_tree;

double Thresholds::log(double x) const {
  if (log_base == "e") return std::log(x);
  const double b = std::stod(log_base);
  return std::log(x) / std::log(b);
}

void SweepConfig::validate() const {
  if (n_values.empty() || alpha_values.empty() || p_values.empty()) {
    throw InputError("n_values, alpha_values and p_values must all be non-empty");
  }
  if (trials < 1) throw InputError("trials must be at least 1");
  for (const Node n : n_values) {
    if (n < 5) throw InputError("every n must be at least 5");
    if (ell < 1 || ell > n / 3) throw InputError("ell must lie in [1, n/3] for every n");
  }
  for (const double a : alpha_values) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InputError("every alpha must be positive");
  }
  for (const double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("every p must lie in [0, 1]");
  }
  if (thresholds.log_base != "e") {
    double b = 0.0;
    try {
      b = std::stod(thresholds.log_base);
    } catch (const std::exception&) {
      throw InputError("log_base must be 'e' or a number");
    }
    if (!(b > 1.0)) throw InputError("log_base must exceed 1");
  }
  if (thresholds.restart_tau1_mult <= 0 || thresholds.restart_k <= 0) {
    throw InputError("restart constants must be positive");
  }
}

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  std::vector<T> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (p.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(p, &used);
      if (used != p.size()) throw std::invalid_argument(p);
      if constexpr (std::is_integral_v<T>) {
        if (v < 0 || v != std::floor(v)) throw std::invalid_argument(p);
      }
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw InputError("bad value '" + p + "' in " + key);
    }
  }
  return out;
}

template <typename T>
void read_value(const pt::ptree& sec, const std::string& key, T& target) {
  const auto v = sec.get_optional<std::string>(key);
  if (!v) return;
  std::string text = *v;
  boost::trim(text);
  if constexpr (std::is_same_v<T, std::string>) {
    target = text;
  } else {
    std::istringstream ss(text);
    T value{};
    if (!(ss >> value) || !(ss >> std::ws).eof()) throw InputError("bad value for " + key + ": '" + text + "'");
    target = value;
  }
}

template <typename F>
void for_each_threshold(Thresholds& t, F&& f) {
  f("log_base", t.log_base);
  f("diameter_exact_limit", t.diameter_exact_limit);
  f("diameter_bfs_budget", t.diameter_bfs_budget);
  f("restart_tau1_mult", t.restart_tau1_mult);
  f("restart_beta", t.restart_beta);
  f("restart_k", t.restart_k);
  f("restart_sigma_mult", t.restart_sigma_mult);
  f("subcritical_p", t.subcritical_p);
  f("subcritical_log_mult", t.subcritical_log_mult);
  f("subcritical_trial_fraction", t.subcritical_trial_fraction);
  f("subcritical_growth_ratio", t.subcritical_growth_ratio);
  f("high_alpha_fraction_max", t.high_alpha_fraction_max);
  f("high_alpha_r2_min", t.high_alpha_r2_min);
  f("supercritical_p", t.supercritical_p);
  f("giant_fraction_min", t.giant_fraction_min);
  f("giant_trial_fraction", t.giant_trial_fraction);
  f("mid_alpha_diam_mult", t.mid_alpha_diam_mult);
  f("mid_alpha_slope_max", t.mid_alpha_slope_max);
  f("low_alpha_diam_mult", t.low_alpha_diam_mult);
  f("restart_trial_fraction", t.restart_trial_fraction);
}

std::string value_text(const std::string& s) { return s; }
std::string value_text(double x) { return format_real(x); }
std::string value_text(std::size_t x) { return std::to_string(x); }

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  const auto sweep = tree.get_child_optional("sweep");
  if (!sweep) throw InputError("config has no [sweep] section");

  SweepConfig cfg;
  cfg.n_values = parse_list<Node>(sweep->get<std::string>("n_values", ""), "n_values");
  cfg.alpha_values = parse_list<double>(sweep->get<std::string>("alpha_values", ""), "alpha_values");
  cfg.p_values = parse_list<double>(sweep->get<std::string>("p_values", ""), "p_values");
  read_value(*sweep, "trials", cfg.trials);
  read_value(*sweep, "seed", cfg.seed);
  read_value(*sweep, "ell", cfg.ell);
  read_value(*sweep, "threads", cfg.threads);
  read_value(*sweep, "output", cfg.output);
  for (const auto& [key, value] : *sweep) {
    static const char* known[] = {"n_values", "alpha_values", "p_values", "trials", "seed",
                                  "ell",      "threads",      "output"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw InputError("unknown key '" + key + "' in [sweep]");
    }
  }
  if (const auto th = tree.get_child_optional("thresholds")) {
    std::vector<std::string> seen;
    for_each_threshold(cfg.thresholds, [&](const char* key, auto& target) {
      read_value(*th, key, target);
      seen.emplace_back(key);
    });
    for (const auto& [key, value] : *th) {
      if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
        throw InputError("unknown key '" + key + "' in [thresholds]");
      }
    }
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  return parse_sweep_config(in);
}

void write_sweep_config(std::ostream& out, const SweepConfig& cfg) {
  auto join = [](const auto& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ", ";
      s += value_text(static_cast<double>(xs[i]));
    }
    return s;
  };
  out << "[sweep]\n"
      << "n_values = " << join(cfg.n_values) << '\n'
      << "alpha_values = " << join(cfg.alpha_values) << '\n'
      << "p_values = " << join(cfg.p_values) << '\n'
      << "trials = " << cfg.trials << '\n'
      << "seed = " << cfg.seed << '\n'
      << "ell = " << cfg.ell << '\n'
      << "threads = " << cfg.threads << '\n';
  if (!cfg.output.empty()) out << "output = " << cfg.output << '\n';
  out << "\n[thresholds]\n";
  Thresholds t = cfg.thresholds;
  for_each_threshold(t, [&](const char* key, auto& value) { out << key << " = " << value_text(value) << '\n'; });
}

}  // namespace swperc
