#pragma once

#include <json.hpp>

#include "swperc/analysis.hpp"
#include "swperc/branching.hpp"
#include "swperc/epidemic.hpp"
#include "swperc/renorm.hpp"

namespace swperc {

/// An exact diameter becomes an integer, an infinite one the string "inf",
/// a bracketed one {"lower": a, "upper": b}.
nlohmann::json to_json(const DiameterBound& d);
nlohmann::json to_json(const ComponentReport& r);
nlohmann::json to_json(const BfsTrace& t);
nlohmann::json to_json(const CascadeTrajectory& t);
nlohmann::json to_json(const ActiveSets& a);
nlohmann::json to_json(const GwTrajectory& t);
nlohmann::json to_json(const ExtinctionReport& r);
nlohmann::json to_json(const EllGraph& eg);
nlohmann::json to_json(const RenormSchedule& s);
nlohmann::json to_json(const OutbreakDistribution& d);

}  // namespace swperc
