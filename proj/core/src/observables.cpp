#include "ddosc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddosc/errors.hpp"

namespace ddosc {

ObservableSeries observables(const Trajectory& traj, const PhysicalParams& params,
                             double norm_slack) {
  if (traj.times.size() != traj.states.size())
    throw ContractError("observables: times and states are not aligned");
  const double nB = thermal_occupation(params.Omega_bath, params.T_B);
  const std::size_t n = traj.size();
  ObservableSeries o;
  o.times = traj.times;
  for (auto* v : {&o.n1, &o.n2, &o.witness, &o.abs_A1_sq, &o.abs_A2_sq}) v->resize(n);
  o.coherence.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SegmentState& s = traj.states[k];
    const double p1 = std::norm(s.A1), p2 = std::norm(s.A2);
    if (!std::isfinite(p1 + p2) || p1 + p2 > 1.0 + norm_slack) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "|A1|^2 + |A2|^2 = %.9g exceeds 1 at t = %.9g", p1 + p2,
                    traj.times[k]);
      throw PhysicalityError(buf, traj.times[k]);
    }
    const double leak = 1.0 - p1 - p2;
    o.abs_A1_sq[k] = p1;
    o.abs_A2_sq[k] = p2;
    o.n1[k] = p1 * params.n10 + p2 * params.n20 + leak * nB;
    o.n2[k] = p2 * params.n10 + p1 * params.n20 + leak * nB;
    o.coherence[k] =
        std::conj(s.A1) * s.A2 * params.n10 + std::conj(s.A2) * s.A1 * params.n20 + leak * nB;
    o.witness[k] = std::norm(o.coherence[k]) - o.n1[k] * o.n2[k];
  }
  return o;
}

SuppressionSeries suppression(const std::vector<double>& times, const std::vector<double>& dd,
                              const std::vector<double>& free, const SuppressionOptions& opts) {
  if (dd.size() != times.size() || free.size() != times.size())
    throw ContractError("suppression: series lengths differ");
  if (times.empty()) throw ContractError("suppression: empty series");
  if (!(opts.epsilon >= 0.0)) throw ContractError("suppression: epsilon must be >= 0");
  SuppressionSeries out;
  const double ref = free.front();
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < opts.t_min) continue;
    const double den = std::abs(free[k] - ref);
    if (den < opts.epsilon) {
      ++out.skipped;
      continue;
    }
    double S = 1.0 - std::abs(dd[k] - ref) / den;
    if (S > 1.0) {
      S = 1.0;
      ++out.clipped;
    }
    out.times.push_back(times[k]);
    out.S.push_back(S);
  }
  return out;
}

SuppressionSeries suppression(const ObservableSeries& dd, const ObservableSeries& free,
                              const SuppressionOptions& opts) {
  if (dd.times != free.times) throw ContractError("suppression: time grids differ");
  return suppression(dd.times, dd.n1, free.n1, opts);
}

double window_average(const std::vector<double>& times, const std::vector<double>& values,
                      double t_a, double t_b) {
  if (times.size() != values.size()) throw ContractError("window_average: length mismatch");
  if (!(t_a < t_b)) throw ContractError("window_average: need t_a < t_b");
  double area = 0.0, span = 0.0;
  std::size_t count = 0;
  double tp = 0.0, vp = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t_a || times[k] > t_b) continue;
    if (count > 0) {
      area += 0.5 * (values[k] + vp) * (times[k] - tp);
      span += times[k] - tp;
    }
    tp = times[k];
    vp = values[k];
    ++count;
  }
  if (count == 0) throw ContractError("window_average: empty window");
  if (count == 1) return vp;
  return area / span;
}

double window_average(const SuppressionSeries& s, double t_a, double t_b) {
  return window_average(s.times, s.S, t_a, t_b);
}

int revival_count(const std::vector<double>& t, const std::vector<double>& x, double hysteresis,
                  std::optional<double> t_end) {
  if (t.size() != x.size()) throw ContractError("revival_count: length mismatch");
  int sign = 0, changes = 0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (t_end && t[k] > *t_end) break;
    const double d = x[k] - x[k - 1];
    if (std::abs(d) <= hysteresis) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) ++changes;
    sign = s;
  }
  return changes;
}

TrendReport trend_checks(const ObservableSeries& s, const TrendOptions& opts) {
  TrendReport r;
  bool rise = true, relax = true;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.n1.size(); ++k) {
    if (s.times[k] <= opts.rise_after) continue;
    if (s.n1[k] < hi - opts.rise_slack) rise = false;
    if (s.n1[k] > lo + opts.rise_slack) relax = false;
    hi = std::max(hi, s.n1[k]);
    lo = std::min(lo, s.n1[k]);
  }
  r.monotonic_rise = rise;
  r.monotonic_relaxation = relax;
  r.revival_count = revival_count(s.times, s.n1, opts.hysteresis, opts.revival_window_end);
  r.witness_max = s.witness.empty() ? 0.0
                                    : *std::max_element(s.witness.begin(), s.witness.end());
  return r;
}

}  // namespace ddosc
