#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddosc/scenarios/config.hpp"

namespace ddosc::scenarios {

enum class ValidateLevel { fast, full };

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool informational = false;  ///< reported but never fails the run
  bool passed = false;
  std::string detail;
};

struct ValidateOptions {
  ValidateLevel level = ValidateLevel::fast;
  /// Test hook: perturb one root of every random quartic before checking residuals.
  bool corrupt_root = false;
  std::uint64_t seed = 20240601;
};

struct ValidateReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  Json to_json() const;
};

/// Quartic property statistics over `count` random complex quartics.
struct QuarticSuiteStats {
  double max_residual = 0.0;
  double max_vieta = 0.0;
  double max_pairing = 0.0;
  int companion_fallbacks = 0;
};

QuarticSuiteStats quartic_property_suite(int count, std::uint64_t seed, bool corrupt_root = false);

ValidateReport validate(const ValidateOptions& opts);

}  // namespace ddosc::scenarios
