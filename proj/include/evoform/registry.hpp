#pragma once

#include <map>
#include <string>
#include <vector>

#include "evoform/gelfand_triple.hpp"
#include "evoform/scenarios.hpp"

namespace evoform {

/// Scenario parameters travel as strings (straight from config files); the
/// registry validates and converts. std::map keeps listings deterministic.
using ParamMap = std::map<std::string, std::string>;

struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::string defaults;  // printable "key=value ..." list
};

/// All registered scenario names with their parameter defaults.
const std::vector<ScenarioInfo>& scenario_registry();

/// Builds a named scenario over the given triple. Every scenario accepts
/// horizon and omega on top of its own parameters; unknown names, unknown
/// keys, and malformed numbers throw std::invalid_argument with a message
/// naming the offender.
Scenario<double> make_scenario(const std::string& name, const ParamMap& params,
                               const GelfandTriple<double>& triple);

}  // namespace evoform
