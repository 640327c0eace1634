#pragma once

// Piecewise-constant detuning control: rectangular pulses that shift both mode
// frequencies by a common amount while ON.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ddosc {

struct Pulse {
  double t_on = 0.0;
  double width = 0.0;      ///< ON duration, > 0
  double amplitude = 0.0;  ///< detuning applied while ON

  double t_off() const noexcept { return t_on + width; }
};

/// Nominal pulse train parameters.
struct PulseTrain {
  double omega_D = 0.0;
  double delta = 0.0;
  double tau = 0.0;

  double duty_cycle() const noexcept { return tau > 0.0 ? delta / tau : 0.0; }
};

/// Half-ranges of the uniform cycle-to-cycle jitter X_k = X + D_X * xi_k, xi_k ~ U[-1, 1].
struct JitterSpec {
  double D_delta = 0.0;
  double D_tau = 0.0;
  double D_omega = 0.0;
  std::uint64_t seed = 0;

  /// D_X = fraction * X for all three parameters (the +-20% default uses 0.2).
  static JitterSpec relative(const PulseTrain& base, double fraction, std::uint64_t seed);
};

enum class ScheduleKind { free, regular, irregular, custom };

const char* to_string(ScheduleKind k) noexcept;

/// Constant-detuning interval [t0, t1].
struct Segment {
  double t0 = 0.0;
  double t1 = 0.0;
  double detuning = 0.0;
};

class Schedule {
 public:
  Schedule() = default;
  Schedule(ScheduleKind kind, std::vector<Pulse> pulses, double horizon, PulseTrain base = {},
           std::optional<std::uint64_t> seed = std::nullopt);

  ScheduleKind kind() const noexcept { return kind_; }
  const std::vector<Pulse>& pulses() const noexcept { return pulses_; }
  double horizon() const noexcept { return horizon_; }
  const PulseTrain& base() const noexcept { return base_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  /// Partition of [0, horizon] into maximal-by-pulse constant-detuning segments.
  const std::vector<Segment>& segments() const noexcept { return segments_; }

  /// Fraction of [0, horizon] spent ON.
  double on_fraction() const;

  /// Short human-readable descriptor used in provenance records.
  std::string describe() const;

 private:
  void build_segments();

  ScheduleKind kind_ = ScheduleKind::free;
  std::vector<Pulse> pulses_;
  double horizon_ = 0.0;
  PulseTrain base_;
  std::optional<std::uint64_t> seed_;
  std::vector<Segment> segments_;
};

Schedule free_schedule(double horizon);

/// Pulses at n*tau of width delta, truncated at the horizon. delta == tau means always ON.
Schedule regular_schedule(double omega_D, double delta, double tau, double horizon);

/// Jittered cycles laid end to end: pulse k starts at sum_{j<k} tau_j.
Schedule irregular_schedule(const PulseTrain& base, const JitterSpec& jitter, double horizon);

/// User-supplied pulses; validated for ordering, positivity and containment.
Schedule custom_schedule(std::vector<Pulse> pulses, double horizon);

/// Detuning at time t; pulses are left-closed, right-open.
double detuning_at(const Schedule& s, double t);

/// phi(t) = integral_0^t f(t') dt', exact for rectangular pulses.
double phase_integral(const Schedule& s, double t);

/// F(omega) = |integral_0^T exp(i [omega t + phi(t)]) dt|^2, integrated exactly per segment.
double filter_function(const Schedule& s, double omega, double T);

}  // namespace ddosc
