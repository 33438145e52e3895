#include "swperc/serialize.hpp"

namespace swperc {

using nlohmann::json;

json to_json(const DiameterBound& d) {
  if (!d.connected) return "inf";
  if (d.exact()) return d.upper;
  return json{{"lower", d.lower}, {"upper", d.upper}};
}

json to_json(const ComponentReport& r) {
  json comps = json::array();
  for (std::size_t i = 0; i < r.count(); ++i) {
    const auto c = r.component(i);
    comps.push_back(std::vector<Node>(c.begin(), c.end()));
  }
  json j{{"n", r.n},
         {"components", std::move(comps)},
         {"largest_size", r.largest_size},
         {"largest_fraction", r.largest_fraction}};
  j["largest_diameter"] = r.largest_diameter ? to_json(*r.largest_diameter) : json(nullptr);
  return j;
}

json to_json(const BfsTrace& t) {
  return json{{"rounds", t.rounds},
              {"queue_sizes", t.queue_sizes},
              {"additions", t.additions},
              {"reached", t.reached},
              {"visited_order", t.visited_order},
              {"terminal_queue", t.terminal_queue},
              {"terminal_removed", t.terminal_removed}};
}

json to_json(const CascadeTrajectory& t) {
  json steps = json::array();
  for (std::size_t i = 0; i < t.steps(); ++i) {
    steps.push_back(json{{"t", i},
                         {"S", t.susceptible(i)},
                         {"I", t.infectious[i]},
                         {"R", t.recovered(i)}});
  }
  return json{{"steps", std::move(steps)},
              {"stabilization_time", t.stabilization_time()},
              {"total_infected", t.total_infected()}};
}

json to_json(const ActiveSets& a) {
  return json{{"levels", a.levels}, {"reachable", a.reachable}};
}

json to_json(const GwTrajectory& t) {
  json j{{"B", t.B}, {"W", t.W}};
  j["sigma"] = t.sigma ? json(*t.sigma) : json("inf");
  return j;
}

json to_json(const ExtinctionReport& r) {
  return json{{"offspring", r.offspring}, {"budget", r.budget}, {"trials", r.trials},
              {"extinct", r.extinct},     {"rate", r.rate},     {"ci_low", r.ci_low},
              {"ci_high", r.ci_high}};
}

json to_json(const EllGraph& eg) {
  return json{{"n", eg.n()},
              {"ell", eg.ell()},
              {"partition_offset", eg.offset()},
              {"supernodes", eg.supernodes()},
              {"super_edges", eg.super_edges()},
              {"super_bridges", eg.super_bridges()}};
}

json to_json(const RenormSchedule& s) {
  json entries = json::array();
  for (const auto& e : s.entries) {
    entries.push_back(json{{"k", e.k},
                           {"N_k", e.N.str()},
                           {"C_k", e.C.str()},
                           {"delta_k", e.delta},
                           {"eps_k", e.eps},
                           {"D_k", e.D.str()},
                           {"p_k", e.p}});
  }
  return json{{"alpha", s.alpha}, {"beta", s.beta},   {"n", s.n},
              {"p", s.p},         {"h", s.h},         {"m", s.m},
              {"normalizer", s.normalizer},           {"sigma", s.sigma},
              {"one_minus_sigma", s.one_minus_sigma}, {"entries", std::move(entries)}};
}

json to_json(const OutbreakDistribution& d) {
  json rows = json::array();
  for (std::size_t k = 0; k < d.probability.size(); ++k) {
    if (d.probability[k] > 0.0) rows.push_back(json{{"total_infected", k}, {"probability", d.probability[k]}});
  }
  return rows;
}

}  // namespace swperc
