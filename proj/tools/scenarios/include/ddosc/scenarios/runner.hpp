#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddosc/scenarios/config.hpp"

namespace ddosc::scenarios {

inline constexpr const char* kToolVersion = "0.3.0";

/// In-memory result of one scenario run.
struct RunResult {
  ScenarioConfig config;
  Schedule schedule;
  Trajectory trajectory;
  ObservableSeries observables;
  std::optional<SuppressionSeries> suppression;  ///< against free evolution, pulsed schedules only
  std::vector<double> bath_norm;                 ///< discrete-bath engine only
  Json summary;
};

/// Propagates with the configured engine and computes observables and summary scalars.
RunResult execute(const ScenarioConfig& cfg);

/// Record of an emitted run: hash, provenance, files, summary.
Json run_record(const RunResult& r, const std::vector<std::string>& files);

/// CSV text for a run (header plus one row per grid point, 12 significant digits).
std::string timeseries_csv(const RunResult& r);

/// Writes `text` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& text);

/// execute + `<out_dir>/<stem>.csv` + `<out_dir>/<stem>.json`. Returns the record.
Json run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                  const std::string& stem = "");

/// Worker count: explicit value if > 0, else $DDOSC_WORKERS, else hardware concurrency.
unsigned resolve_workers(unsigned requested);

struct SweepOptions {
  std::size_t cap = 10'000;
  unsigned workers = 0;
  bool write_runs = true;  ///< emit per-run CSV/JSON under <out_dir>/<name>/
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<std::vector<Json>> points;  ///< axis values per run, lexicographic in axis order
  std::vector<Json> records;
  std::string aggregate_csv;
};

/// Expands the sweep axes of `doc` (a completed document) into resolved configs,
/// first axis slowest. Throws ConfigError when the cap is exceeded.
std::vector<std::pair<std::vector<Json>, ScenarioConfig>> expand_sweep(const Json& doc,
                                                                       std::size_t cap);

SweepResult run_sweep(const Json& doc, const std::filesystem::path& out_dir,
                      const SweepOptions& opts = {});

struct CompareReport {
  double regular_window_avg = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> irregular_window_avg;
  double irregular_mean = 0.0;
  double gap = 0.0;  ///< regular - irregular mean (window-averaged n1)
  std::vector<double> times;
  std::vector<double> n1_regular, n1_irregular_mean;
  std::vector<double> S_times, S_regular, S_irregular_mean;
  Json to_json() const;
};

/// Regular run once, irregular run per seed, all against one free reference.
CompareReport compare_dd(const ScenarioConfig& regular, const ScenarioConfig& irregular,
                         const std::vector<std::uint64_t>& seeds, unsigned workers = 0);

/// Builds the regular / irregular pair from one completed document.
std::pair<ScenarioConfig, ScenarioConfig> compare_pair(const Json& doc);

/// `omega,F` CSV of the filter function of the configured schedule at T = t_end.
std::string filter_csv(const ScenarioConfig& cfg, double omega_min, double omega_max,
                       std::size_t points);

/// "%.12g"
std::string fmt12(double x);

}  // namespace ddosc::scenarios
