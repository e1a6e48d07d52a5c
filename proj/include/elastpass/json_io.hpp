#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "elastpass/conditions.hpp"
#include "elastpass/models.hpp"
#include "elastpass/passivity.hpp"
#include "elastpass/synthesis.hpp"

namespace elastpass {

// Run configuration as accepted by the command-line tools:
//   { "plant": {"Jm":..,"Bm":..,"K":..,"Bf":..},
//     "gains": {"Gt":..,"Gm":..,"Im":..},
//     "env":   {"kind":"null"} | {"kind":"spring","Kd":..},
//     "gear":  {"n":..} }            (gear optional)
struct RunConfig {
  ClosedLoopCase caseSpec;
  std::optional<double> gearRatio;

  // case with the gear reflection applied (identity when absent)
  ClosedLoopCase effectiveCase() const;
};

// Strict schema validation; unknown keys and missing required fields are
// ConfigError.
RunConfig parseRunConfig(const nlohmann::json& j);
RunConfig loadRunConfig(const std::string& path);

nlohmann::json toJson(const PlantParams& p);
nlohmann::json toJson(const ControllerGains& g);
nlohmann::json toJson(const VirtualEnv& e);
nlohmann::json toJson(const ClosedLoopCase& c);
nlohmann::json toJson(const PassivityVerdict& v);
nlohmann::json toJson(const conditions::ConditionReport& r);
nlohmann::json toJson(const MechNetwork& net);

// atomic file write: temp file in the same directory, then rename
void writeFileAtomic(const std::string& path, const std::string& content);

}  // namespace elastpass
