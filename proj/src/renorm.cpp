#include "swperc/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "swperc/edge_list.hpp"
#include "swperc/errors.hpp"

namespace swperc {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// EllGraph

EllGraph::EllGraph(const PercolationGraph& gp, Node ell, Node offset)
    : n_(gp.n()), ell_(ell), offset_(offset), m_(0) {
  if (ell < 1 || ell > n_ / 3) {
    throw InputError("ell must lie in [1, n/3], got " + std::to_string(ell) + " for n = " +
                     std::to_string(n_));
  }
  if (offset >= n_) throw InputError("offset out of range");
  m_ = n_ / ell;

  std::vector<SuperPair> links;
  for (const auto& [u, v] : gp.graph().edges()) {
    SuperNode h = interval_of(u), k = interval_of(v);
    if (h == k) continue;
    if (h > k) std::swap(h, k);
    links.emplace_back(h, k);
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  for (const auto& l : links) {
    (ring_adjacent(l.first, l.second) ? super_edges_ : super_bridges_).push_back(l);
  }
  std::vector<NodePair> all(super_edges_.begin(), super_edges_.end());
  all.insert(all.end(), super_bridges_.begin(), super_bridges_.end());
  graph_ = Graph(m_, all);
}

SuperNode EllGraph::interval_of(Node u) const {
  if (u >= n_) throw InputError("node out of range");
  const Node shifted = u >= offset_ ? u - offset_ : u + (n_ - offset_);
  return std::min<SuperNode>(shifted / ell_, m_ - 1);
}

Node EllGraph::interval_begin(SuperNode j) const {
  return static_cast<Node>((std::uint64_t{offset_} + std::uint64_t{j} * ell_) % n_);
}

Node EllGraph::interval_size(SuperNode j) const {
  return j + 1 < m_ ? ell_ : n_ - (m_ - 1) * ell_;
}

bool EllGraph::ring_adjacent(SuperNode h, SuperNode k) const {
  const SuperNode d = (h + m_ - k) % m_;
  return d == 1 || d == m_ - 1;
}

bool EllGraph::has_link(SuperNode h, SuperNode k) const {
  if (h >= m_ || k >= m_) return false;
  const auto nb = graph_.neighbors(h);
  return std::binary_search(nb.begin(), nb.end(), k);
}

// ---------------------------------------------------------------------------
// Supernode BFS

SuperVisit super_component_of(const EllGraph& eg, SuperNode s, LeftOrientation left) {
  const SuperNode m = eg.supernodes();
  if (s >= m) throw InputError("supernode out of range");
  std::vector<std::uint8_t> seen(m, 0);
  std::vector<SuperNode> queue{s};
  seen[s] = 1;
  SuperVisit v;
  v.queue_sizes.push_back(1);
  std::size_t head = 0;
  while (head < queue.size()) {
    const SuperNode w = queue[head++];
    v.visit_order.push_back(w);
    std::size_t xs = 0, ys = 0, added = 0;
    const auto nb = eg.graph().neighbors(w);
    for (const SuperNode x : nb) {
      if (eg.ring_adjacent(w, x) && !seen[x]) {
        seen[x] = 1;
        queue.push_back(x);
        ++xs;
        ++added;
      }
    }
    for (const SuperNode y : nb) {
      if (eg.ring_adjacent(w, y) || seen[y]) continue;
      seen[y] = 1;
      queue.push_back(y);
      ++ys;
      ++added;
      const SuperNode yl = left == LeftOrientation::decreasing ? (y + m - 1) % m : (y + 1) % m;
      if (!seen[yl] && eg.has_link(yl, y)) {
        seen[yl] = 1;
        queue.push_back(yl);
        ++added;
      }
    }
    ++v.iterations;
    v.x_counts.push_back(xs);
    v.y_counts.push_back(ys);
    v.additions.push_back(added);
    v.queue_sizes.push_back(queue.size() - head);
  }
  return v;
}

std::size_t coarsening_violations(const ComponentReport& components, const EllGraph& eg) {
  const SuperNode m = eg.supernodes();
  std::vector<SuperNode> parent(m);
  std::iota(parent.begin(), parent.end(), SuperNode{0});
  auto find = [&](SuperNode x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [a, b] : eg.graph().edges()) {
    const SuperNode ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  }
  std::vector<std::uint64_t> covered(m, 0);
  for (SuperNode j = 0; j < m; ++j) covered[find(j)] += eg.interval_size(j);

  std::size_t violations = 0;
  for (std::size_t c = 0; c < components.count(); ++c) {
    const auto members = components.component(c);
    const SuperNode root = find(eg.interval_of(members.front()));
    bool ok = members.size() <= covered[root];
    for (const Node u : members) ok = ok && find(eg.interval_of(u)) == root;
    if (!ok) ++violations;
  }
  return violations;
}

// ---------------------------------------------------------------------------
// Bridge lengths and isolation rates

double bridge_length_tail(Node n, double alpha, Node x) {
  if (x < 1) throw InputError("bridge length threshold must be at least 1");
  const double c = normalizing_constant(n, alpha);
  double log_none = 0.0;
  for (Node d = n / 2; d > x && d >= 2; --d) {
    const double mult = (n % 2 == 0 && d == n / 2) ? 1.0 : 2.0;
    log_none += mult * std::log1p(-std::pow(static_cast<double>(d), -alpha) / c);
  }
  return -std::expm1(log_none);
}

bool IsolationRates::isolated_bound_holds(double sigmas) const {
  return rate_isolated >= isolated_lower_bound - sigmas * se_isolated;
}

bool IsolationRates::superbridge_bound_holds(double sigmas) const {
  return rate_superbridge <= superbridge_upper_bound + sigmas * se_superbridge;
}

IsolationRates supernode_isolation_rate(Node n, double alpha, double p, Node ell,
                                        std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("trials must be at least 1");
  IsolationRates r;
  r.trials = trials;
  ComponentOptions copt;
  copt.with_diameter = false;
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng(seed, t);
    auto g = std::make_shared<const SmallWorldGraph>(sample_small_world(n, alpha, rng));
    const auto gp = percolate(g, p, rng);
    const EllGraph eg(gp, ell, 0);
    const auto nb = eg.graph().neighbors(0);
    if (nb.empty()) ++r.isolated;
    if (std::any_of(nb.begin(), nb.end(), [&](SuperNode k) { return !eg.ring_adjacent(0, k); })) {
      ++r.superbridge;
    }
    r.coarsening_violations += coarsening_violations(connected_components(gp, copt), eg);
  }
  const double tn = static_cast<double>(trials);
  r.rate_isolated = r.isolated / tn;
  r.rate_superbridge = r.superbridge / tn;
  r.se_isolated = std::sqrt(r.rate_isolated * (1.0 - r.rate_isolated) / tn);
  r.se_superbridge = std::sqrt(r.rate_superbridge * (1.0 - r.rate_superbridge) / tn);
  if (alpha > 2.0) {
    r.isolated_lower_bound = (1.0 - p) * (1.0 - p) * std::exp(-2.0 / (alpha - 2.0));
    r.superbridge_upper_bound = 2.0 / ((alpha - 2.0) * std::pow(static_cast<double>(ell), alpha - 2.0));
  } else {
    r.isolated_lower_bound = 0.0;
    r.superbridge_upper_bound = std::numeric_limits<double>::infinity();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Renormalization schedule

namespace {

double to_double(const mp::cpp_int& x) { return x.convert_to<double>(); }

// e^{beta^k}, ceiled. The mantissa is wide enough to resolve every integer
// below the largest double, which bounds N_m = e^{beta^m} <= n.
using Wide = mp::number<mp::cpp_bin_float<1100, mp::digit_base_2>>;

mp::cpp_int ceil_exp_power(double beta, int k) {
  const Wide v = mp::exp(mp::pow(Wide(beta), k));
  if (v > Wide(std::numeric_limits<double>::max()) * 16) throw SizeError("schedule value too large");
  return mp::ceil(v).convert_to<mp::cpp_int>();
}

double tail_sum(double beta, int from) {
  double sum = 0.0;
  for (int k = from;; ++k) {
    const double term = std::exp(-0.2 * std::pow(beta, k - 1) * (beta - 1.0));
    if (term < 1e-30) break;
    sum += term;
  }
  return sum;
}

}  // namespace

double normalizing_constant_nominal(double n, double alpha) {
  if (!(n >= 5.0)) throw InputError("n must be at least 5");
  if (n <= 1e7) return normalizing_constant(static_cast<Node>(n), alpha);
  // sum_{x<=m} x^-alpha = zeta(alpha) + m^{1-alpha}/(1-alpha) + m^-alpha/2 - alpha m^{-alpha-1}/12 + ...
  const double m = std::floor(n / 2.0);
  if (alpha == 1.0) {
    const double gamma = 0.57721566490153286061;
    return 2.0 * (std::log(m) + gamma + 1.0 / (2.0 * m) - 1.0 / (12.0 * m * m) - 1.0);
  }
  const double partial = boost::math::zeta(alpha) + std::pow(m, 1.0 - alpha) / (1.0 - alpha) +
                         std::pow(m, -alpha) / 2.0 - alpha * std::pow(m, -alpha - 1.0) / 12.0;
  return 2.0 * (partial - 1.0);
}

RenormSchedule make_schedule(double alpha, double n, double p) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw InputError("schedule requires 1 < alpha < 2");
  if (!(n >= 5.0) || !std::isfinite(n)) throw InputError("n must be finite and at least 5");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");

  RenormSchedule s;
  s.alpha = alpha;
  s.n = n;
  s.p = p;
  s.beta = alpha * (3.0 - alpha) / 2.0;
  const double beta = s.beta;

  s.h = 1;
  while (tail_sum(beta, s.h) > 0.01) {
    ++s.h;
    if (s.h > 1000000) throw SizeError("no base index found for this alpha");
  }
  const double lnn = std::log(n);
  s.m = lnn > 1.0 ? static_cast<int>(std::floor(std::log(lnn) / std::log(beta))) : 0;
  s.normalizer = normalizing_constant_nominal(n, alpha);

  const double Nh_real = std::exp(std::pow(beta, s.h));
  s.one_minus_sigma = -std::expm1(std::log(0.98) / Nh_real);
  s.sigma = std::exp(std::log(0.98) / Nh_real);

  if (s.m < s.h) return s;

  mp::cpp_int prev_N = ceil_exp_power(beta, s.h - 1);
  for (int k = s.h; k <= s.m; ++k) {
    ScheduleEntry e;
    e.k = k;
    e.N = ceil_exp_power(beta, k);
    e.C = e.N / prev_N;
    const double Cd = to_double(e.C);
    const double c_pow = std::isfinite(Cd) && Cd > 0.0 ? std::pow(Cd, -0.2) : 0.0;
    if (k == s.h) {
      e.D = e.N;
      const double Nd = to_double(e.N);
      e.delta = p == 1.0 ? 0.0 : (p == 0.0 ? 1.0 : -std::expm1(Nd * std::log(p)));
      e.eps = 0.0;
      e.p = p;
    } else {
      const ScheduleEntry& prev = s.entries.back();
      e.D = 2 * prev.D + 1;
      e.delta = 2.0 * c_pow;
      e.eps = prev.eps + prev.delta + c_pow;
      const double one_minus = 1.0 - prev.eps;
      e.p = s.normalizer * (2.0 - alpha) * (alpha - 1.0) * 0.9 /
            (one_minus * one_minus * (2.0 * (2.0 - alpha) + 0.2));
    }
    s.entries.push_back(std::move(e));
    prev_N = s.entries.back().N;
  }
  return s;
}

void write_schedule_csv(std::ostream& out, const RenormSchedule& s) {
  out << "k,N_k,C_k,delta_k,eps_k,D_k,p_k\n";
  for (const auto& e : s.entries) {
    out << e.k << ',' << e.N.str() << ',' << e.C.str() << ',' << format_real(e.delta) << ','
        << format_real(e.eps) << ',' << e.D.str() << ',' << format_real(e.p) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Interval event

IntervalEvent interval_event_check(const PercolationGraph& gp, Node begin, Node length, double eps,
                                   std::uint64_t D, const DiameterOptions& opt) {
  const Node n = gp.n();
  if (length == 0) throw InputError("empty interval");
  if (length > n || begin >= n) throw InputError("interval does not fit on the ring");

  auto local = [&](Node u) -> Node { return u >= begin ? u - begin : u + (n - begin); };
  std::vector<NodePair> internal;
  for (const auto& [u, v] : gp.graph().edges()) {
    const Node a = local(u), b = local(v);
    if (a < length && b < length) internal.emplace_back(a, b);
  }
  const Graph sub(length, internal);
  ComponentOptions copt;
  copt.diameter = opt;
  const auto rep = connected_components(sub, copt);

  IntervalEvent ev;
  for (const Node a : rep.largest()) ev.witness.push_back(static_cast<Node>((std::uint64_t{a} + begin) % n));
  std::sort(ev.witness.begin(), ev.witness.end());
  ev.witness_diameter = *rep.largest_diameter;
  const bool big = static_cast<double>(rep.largest_size) >= (1.0 - eps) * length;
  ev.holds = big && ev.witness_diameter.connected && ev.witness_diameter.upper <= D;
  return ev;
}

}  // namespace swperc
