#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "gca/ca.hpp"
#include "gca/oracle.hpp"

namespace gca {

inline constexpr const char* kToolVersion = "0.1.0";

/// Named groups, shifts, maps, patterns and configurations from a problem
/// file. All cross-references are resolved and every map is verified at
/// load; unknown keys anywhere are rejected.
struct ProblemFile {
  std::map<std::string, GroupPtr> groups;
  std::map<std::string, ShiftPtr> shifts;
  std::map<std::string, Hom> maps;
  std::map<std::string, Pattern> patterns;
  std::map<std::string, PeriodicConfiguration> configs;
  Budget defaults;
};

ProblemFile parse_problem_text(const std::string& text);
ProblemFile parse_problem(const std::string& path);

// --- JSON codecs (shared by reports and tests) --------------------------
nlohmann::json pattern_to_json(const Pattern& p);
Pattern pattern_from_json(const nlohmann::json& j, const GroupPtr& g, int dim);
nlohmann::json config_to_json(const PeriodicConfiguration& c);
PeriodicConfiguration config_from_json(const nlohmann::json& j, const GroupPtr& g);
nlohmann::json shift_to_json(const ShiftPtr& x);
nlohmann::json report_to_json(const DecisionReport& r);

struct CommandOptions {
  std::map<std::string, std::string> args;  // command-specific arguments
  Budget budget;
  bool cross_check = false;
};

/// Dispatches one CLI command against a parsed problem file and returns the
/// structured report. Property-false outcomes are normal results; only
/// resource and validation failures escape as exceptions.
nlohmann::json run_command(const std::string& command, const CommandOptions& opts,
                           const ProblemFile& pf);

/// Space-time rendering: one row per step, identity mapped to white (text:
/// '.'); other elements get a deterministic palette by element index.
std::string render_orbit_text(const Hom& f, const PeriodicConfiguration& c0, int steps);
std::string render_orbit_pgm(const Hom& f, const PeriodicConfiguration& c0, int steps);

}  // namespace gca
