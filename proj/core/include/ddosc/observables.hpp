#pragma once

// Mode occupations, inter-mode coherence, Cauchy-Schwarz witness and the
// time-domain suppression factor.

#include <optional>
#include <vector>

#include "ddosc/model.hpp"
#include "ddosc/trajectory.hpp"

namespace ddosc {

struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> n1, n2;
  std::vector<cplx> coherence;  ///< <a1^dag a2>
  std::vector<double> witness;  ///< |n12|^2 - n1 n2, <= 0 for separable states
  std::vector<double> abs_A1_sq, abs_A2_sq;
};

/// Occupations via probability conservation: the leaked weight 1 - |A1|^2 - |A2|^2
/// carries the bath occupation n_B evaluated at the bath peak frequency.
/// Throws PhysicalityError when |A1|^2 + |A2|^2 exceeds 1 + norm_slack.
ObservableSeries observables(const Trajectory& traj, const PhysicalParams& params,
                             double norm_slack = 1e-6);

struct SuppressionOptions {
  double t_min = 2.0;     ///< transient cut; 2 / Omega for Omega = 1
  double epsilon = 1e-9;  ///< denominator floor
};

struct SuppressionSeries {
  std::vector<double> times;
  std::vector<double> S;  ///< clipped to <= 1
  std::size_t skipped = 0;
  std::size_t clipped = 0;
};

/// S(t) = 1 - |x_dd(t) - x_free(0)| / |x_free(t) - x_free(0)| for t >= t_min.
SuppressionSeries suppression(const std::vector<double>& times, const std::vector<double>& dd,
                              const std::vector<double>& free, const SuppressionOptions& opts = {});

/// Suppression on n1.
SuppressionSeries suppression(const ObservableSeries& dd, const ObservableSeries& free,
                              const SuppressionOptions& opts = {});

/// Trapezoidal mean over the points of (times, values) that fall inside [t_a, t_b].
double window_average(const std::vector<double>& times, const std::vector<double>& values,
                      double t_a, double t_b);

double window_average(const SuppressionSeries& s, double t_a, double t_b);

struct TrendOptions {
  double rise_after = 0.5;       ///< monotonic_rise ignores t <= rise_after
  double rise_slack = 1e-6;
  double hysteresis = 1e-6;      ///< derivative steps smaller than this are ignored
  std::optional<double> revival_window_end;  ///< count revivals only for t <= this
};

struct TrendReport {
  bool monotonic_rise = false;        ///< n1 nondecreasing (within slack) after rise_after
  bool monotonic_relaxation = false;  ///< n1 nonincreasing (within slack) after rise_after
  int revival_count = 0;
  double witness_max = 0.0;
};

TrendReport trend_checks(const ObservableSeries& s, const TrendOptions& opts = {});

/// Sign changes of the discrete derivative of `x` on points with t <= t_end.
int revival_count(const std::vector<double>& t, const std::vector<double>& x, double hysteresis,
                  std::optional<double> t_end = std::nullopt);

}  // namespace ddosc
