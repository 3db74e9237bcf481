#pragma once
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "hygro/building.hpp"

namespace hygro {

// A scenario file parsed, validated, and assembled into a dimensionless
// building model, with dimensional and dimensionless echoes for audit.
struct Scenario {
    std::string name;
    BuildingModel model;
    double cadence = 0.1;
    std::string dimensional_echo;    // the validated input, normalized
    std::string dimensionless_echo;  // every computed group, JSON text
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const nlohmann::json& j);

Scheme scheme_from_name(const std::string& name);  // df | euler-implicit | euler-explicit
std::string scheme_name(Scheme s);

}  // namespace hygro
