#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "swperc/edge_list.hpp"
#include "swperc/harness.hpp"

namespace swperc {

namespace {

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares y = a + b x. A flat response counts as a perfect fit.
Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double k = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Fit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

template <typename Pred>
double share(const std::vector<SweepRecord>& rs, Pred pred) {
  return static_cast<double>(std::count_if(rs.begin(), rs.end(), pred)) / static_cast<double>(rs.size());
}

using Cells = std::map<Node, std::vector<SweepRecord>>;

struct Check {
  bool failed = false;
  bool unsure = false;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) failed = true;
    detail << what << (ok ? " ok; " : " FAILED; ");
  }
  Verdict verdict() const {
    if (failed) return Verdict::fail;
    if (unsure) return Verdict::inconclusive;
    return Verdict::pass;
  }
};

void check_giant(const Cells& cells, const Thresholds& th, Check& c) {
  for (const auto& [n, rs] : cells) {
    const double s = share(rs, [&](const SweepRecord& r) { return r.largest_fraction >= th.giant_fraction_min; });
    c.require(s >= th.giant_trial_fraction,
              "n=" + std::to_string(n) + " giant share " + format_real(s));
  }
}

void subcritical(const Cells& cells, const Thresholds& th, Check& c) {
  std::vector<double> medians;
  for (const auto& [n, rs] : cells) {
    const double cap = th.subcritical_log_mult * th.log(n);
    const double s = share(rs, [&](const SweepRecord& r) { return r.max_component_size <= cap; });
    c.require(s >= th.subcritical_trial_fraction,
              "n=" + std::to_string(n) + " share<=" + format_real(th.subcritical_log_mult) + "log n " + format_real(s));
    std::vector<double> sizes;
    for (const auto& r : rs) sizes.push_back(static_cast<double>(r.max_component_size));
    medians.push_back(median(sizes));
  }
  if (medians.size() < 2) {
    c.unsure = true;
    c.detail << "growth needs two n values; ";
    return;
  }
  for (std::size_t i = 1; i < medians.size(); ++i) {
    const double ratio = medians[i] / medians[i - 1];
    c.require(ratio <= th.subcritical_growth_ratio, "median ratio " + format_real(ratio));
  }
}

void high_alpha(double alpha, const Cells& cells, const Thresholds& th, Check& c) {
  std::vector<double> x, y;
  for (const auto& [n, rs] : cells) {
    const double worst = std::max_element(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
                           return a.largest_fraction < b.largest_fraction;
                         })->largest_fraction;
    c.require(worst <= th.high_alpha_fraction_max, "n=" + std::to_string(n) + " max fraction " + format_real(worst));

    const double ell = rs.front().ell;
    const double bound = 1.0 - 8.0 / ((alpha - 2.0) * std::pow(ell, (alpha - 2.0) / 2.0));
    double mean = 0, var = 0;
    for (const auto& r : rs) mean += r.confined_fraction;
    mean /= rs.size();
    for (const auto& r : rs) var += (r.confined_fraction - mean) * (r.confined_fraction - mean);
    const double se = rs.size() > 1 ? std::sqrt(var / (rs.size() - 1) / rs.size()) : 0.0;
    c.require(mean >= bound - 3.0 * se, "n=" + std::to_string(n) + " confined " + format_real(mean));

    std::size_t violations = 0;
    for (const auto& r : rs) violations += r.coarsening_violations;
    c.require(violations == 0, "n=" + std::to_string(n) + " coarse-graining violations " + std::to_string(violations));

    std::vector<double> sizes;
    for (const auto& r : rs) sizes.push_back(static_cast<double>(r.max_component_size));
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(median(sizes));
  }
  if (x.size() < 3) {
    c.unsure = true;
    c.detail << "log-growth fit needs three n values; ";
    return;
  }
  const Fit f = linear_fit(x, y);
  c.require(f.r2 >= th.high_alpha_r2_min,
            "median size ~ log n slope " + format_real(f.slope) + " R2 " + format_real(f.r2));
}

void mid_alpha(const Cells& cells, const Thresholds& th, Check& c) {
  check_giant(cells, th, c);
  std::vector<double> x, y;
  for (const auto& [n, rs] : cells) {
    const double ln = th.log(n);
    const double cap = th.mid_alpha_diam_mult * ln * ln;
    const auto worst = std::max_element(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
                         return a.diam_upper < b.diam_upper;
                       })->diam_upper;
    c.require(static_cast<double>(worst) <= cap, "n=" + std::to_string(n) + " max diameter bound " + std::to_string(worst));
    std::vector<double> d;
    for (const auto& r : rs) d.push_back(static_cast<double>(r.diam_upper));
    x.push_back(std::log(ln));
    y.push_back(std::log(std::max(1.0, median(d))));
  }
  if (x.size() < 2) {
    c.unsure = true;
    c.detail << "exponent fit needs two n values; ";
    return;
  }
  const Fit f = linear_fit(x, y);
  c.require(f.slope < th.mid_alpha_slope_max, "polylog exponent " + format_real(f.slope));
}

void low_alpha(const Cells& cells, const Thresholds& th, Check& c) {
  check_giant(cells, th, c);
  for (const auto& [n, rs] : cells) {
    const double ln = th.log(n);
    const auto worst = std::max_element(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
                         return a.diam_upper < b.diam_upper;
                       })->diam_upper;
    c.require(static_cast<double>(worst) <= th.low_alpha_diam_mult * ln,
              "n=" + std::to_string(n) + " max diameter bound " + std::to_string(worst));
    const double sigma = std::ceil(th.restart_sigma_mult * ln);
    const double s = share(rs, [&](const SweepRecord& r) {
      return r.restart_trigger != RestartTrigger::none && static_cast<double>(r.restart_iterations) <= sigma;
    });
    c.require(s >= th.restart_trial_fraction, "n=" + std::to_string(n) + " restart share " + format_real(s));
  }
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    case Verdict::info: return "INFO";
  }
  return "INFO";
}

std::vector<RegimeVerdict> regime_report(const std::vector<SweepRecord>& records, const Thresholds& th) {
  std::map<std::pair<double, double>, Cells> groups;
  for (const auto& r : records) groups[{r.alpha, r.p}][r.n].push_back(r);

  std::vector<RegimeVerdict> out;
  for (const auto& [key, cells] : groups) {
    const auto [alpha, p] = key;
    RegimeVerdict v;
    v.alpha = alpha;
    v.p = p;
    for (const auto& [n, rs] : cells) v.n_values.push_back(n);
    Check c;
    if (p < th.subcritical_p) {
      v.regime = "subcritical";
      subcritical(cells, th, c);
    } else if (alpha > 2.0 && p < 1.0) {
      v.regime = "alpha>2";
      high_alpha(alpha, cells, th, c);
    } else if (alpha > 1.0 && alpha < 2.0 && p >= th.supercritical_p) {
      v.regime = "1<alpha<2";
      mid_alpha(cells, th, c);
    } else if (alpha < 1.0 && p >= th.supercritical_p) {
      v.regime = "alpha<1";
      low_alpha(cells, th, c);
    } else {
      v.regime = "descriptive";
      for (const auto& [n, rs] : cells) {
        std::vector<double> f;
        for (const auto& r : rs) f.push_back(r.largest_fraction);
        const double m = median(f);
        c.detail << "n=" << n << " median fraction " << format_real(m)
                 << (m >= th.giant_fraction_min ? " (giant); " : " (no giant); ");
      }
      v.verdict = Verdict::info;
      v.detail = c.detail.str();
      out.push_back(std::move(v));
      continue;
    }
    v.verdict = c.verdict();
    v.detail = c.detail.str();
    out.push_back(std::move(v));
  }
  return out;
}

void write_report_csv(std::ostream& out, const std::vector<RegimeVerdict>& vs) {
  out << "regime,alpha,p,n_values,verdict,detail\n";
  for (const auto& v : vs) {
    std::string ns;
    for (std::size_t i = 0; i < v.n_values.size(); ++i) {
      if (i) ns += ' ';
      ns += std::to_string(v.n_values[i]);
    }
    std::string detail = v.detail;
    std::replace(detail.begin(), detail.end(), '"', '\'');
    out << v.regime << ',' << format_real(v.alpha) << ',' << format_real(v.p) << ',' << ns << ','
        << to_string(v.verdict) << ",\"" << detail << "\"\n";
  }
}

bool report_passes(const std::vector<RegimeVerdict>& vs) {
  return std::none_of(vs.begin(), vs.end(), [](const auto& v) { return v.verdict == Verdict::fail; });
}

}  // namespace swperc
