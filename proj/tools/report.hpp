#pragma once

#include <iosfwd>

#include <json.hpp>

#include "qgraph/experiments.hpp"
#include "qgraph/ground_state.hpp"
#include "qgraph/line_krein.hpp"
#include "qgraph/oracle.hpp"

namespace qgraph::cli {

nlohmann::ordered_json to_json(const GroundState& gs);
nlohmann::ordered_json to_json(const CritResult& r);
nlohmann::ordered_json to_json(const ComparisonReport& r);
nlohmann::ordered_json to_json(const LineGroundState& gs);

void print_ground_state(std::ostream& out, const GroundState& gs);
void print_crit(std::ostream& out, const CritResult& r);
void print_comparison(std::ostream& out, const ComparisonReport& r);

}  // namespace qgraph::cli
