#pragma once

// Scenario configuration: a flat JSON document (optionally completed from a
// named preset) resolved into validated core objects.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ddosc/closed_propagator.hpp"
#include "ddosc/observables.hpp"
#include "ddosc/oracle.hpp"
#include "ddosc/schedule.hpp"

namespace ddosc::scenarios {

using Json = nlohmann::ordered_json;

/// Invalid configuration; `path` names the offending key ("/tau", "/pulses/2/width").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::free;
  double omega_D = 0.0;
  double delta = 0.0;
  double tau = 0.27;
  double jitter = 0.2;  ///< relative half-range used when D_* are not given
  double D_delta = 0.0, D_tau = 0.0, D_omega = 0.0;
  std::uint64_t seed = 1;
  std::vector<Pulse> pulses;

  double eta() const { return tau > 0.0 ? delta / tau : 0.0; }
};

struct SweepAxis {
  std::string key;
  std::vector<Json> values;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::string preset;
  PhysicalParams params;
  ScheduleSpec schedule;
  Engine engine = Engine::closed;
  MatchingMode matching = MatchingMode::kernel_continuous;
  CoefficientModel coefficients = CoefficientModel::derived;
  double t_end = 20.0;
  std::size_t samples = 2001;
  double window_start = 5.0, window_end = 20.0;
  double dt = 1e-3;
  int bath_modes = 4001;
  double bath_cutoff = 40.0;
  SuppressionOptions suppression;
  int seeds = 10;  ///< realizations used by compare-dd
  std::vector<SweepAxis> sweep;
  /// Fully resolved flat document (defaults filled, sweep removed): hashed for provenance.
  Json resolved;

  Schedule build_schedule() const;
  std::vector<double> grid() const;
};

/// Every key the flat schema accepts, in documentation order.
const std::vector<std::string>& known_keys();

/// Merges `doc` over its preset (if any) without validating.
Json complete_document(const Json& doc);

/// Validates and resolves a complete document.
ScenarioConfig resolve(const Json& doc);

/// complete_document + resolve.
ScenarioConfig parse_config(const Json& doc);
ScenarioConfig parse_config_text(const std::string& text);

/// Applies "key=value" (value parsed as JSON, else taken as a string).
void apply_override(Json& doc, const std::string& assignment);

/// FNV-1a 64-bit hash of the canonical dump, as 16 hex digits.
std::string config_hash(const Json& resolved);

}  // namespace ddosc::scenarios
