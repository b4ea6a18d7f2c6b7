#pragma once

#include <string>

#include "sll/environment.hpp"
#include "sll/strategy.hpp"

namespace sll {

// Environment <-> {"lambda","rho","cost","n","signal"}; the signal object is
// {"kind":"binary","pi":..} or {"kind":"tabulated","atoms":[[q,mass],..]}.
std::string environment_to_json(const Environment& env);
Environment environment_from_json(const std::string& json);

std::string strategy_to_json(const Strategy& s);
Strategy strategy_from_json(const std::string& json);

}  // namespace sll
