// Scenario configuration: sectioned key-value text (INI style) with strict
// validation. Unknown keys are errors, physical quantities carry their unit
// in the key name, and missing keys fall back to the documented defaults.
// The canonical serialization (fixed section and key order, shortest exact
// float formatting) feeds the SHA-256 config hash stamped into every output
// file header.
#pragma once

#include <string>
#include <vector>

#include "lamsa/scenario.hpp"

namespace lamsa {

struct ScenarioConfig {
  ScenarioParams params;
  std::string hash;  // SHA-256 of the canonical serialization
};

ScenarioParams default_params();

// Parses config text; throws ConfigError with a line number on unknown keys,
// unit-suffix mismatches, type errors or invariant violations.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config(const std::string& path);

// Canonical effective-config serialization (defaults merged in).
std::string serialize_config(const ScenarioParams& params);
std::string config_hash(const ScenarioParams& params);

inline constexpr const char* kToolVersion = "lamsa 0.1.0";

}  // namespace lamsa
