#include "ddosc/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "ddosc/errors.hpp"

namespace ddosc {

namespace {

// Boundaries closer than this (relative to the horizon) are the same instant.
constexpr double kSnap = 1e-12;

constexpr int kMaxResample = 100;

double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

// (exp(i k L) - 1) / (i k), continuous through k = 0.
std::complex<double> segment_integral(double k, double L) {
  const double x = 0.5 * k * L;
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return L * sinc * std::polar(1.0, x);
}

}  // namespace

JitterSpec JitterSpec::relative(const PulseTrain& base, double fraction, std::uint64_t seed) {
  JitterSpec j;
  j.D_delta = fraction * std::abs(base.delta);
  j.D_tau = fraction * std::abs(base.tau);
  j.D_omega = fraction * std::abs(base.omega_D);
  j.seed = seed;
  return j;
}

const char* to_string(ScheduleKind k) noexcept {
  switch (k) {
    case ScheduleKind::free: return "free";
    case ScheduleKind::regular: return "regular";
    case ScheduleKind::irregular: return "irregular";
    case ScheduleKind::custom: return "custom";
  }
  return "unknown";
}

Schedule::Schedule(ScheduleKind kind, std::vector<Pulse> pulses, double horizon, PulseTrain base,
                   std::optional<std::uint64_t> seed)
    : kind_(kind), pulses_(std::move(pulses)), horizon_(horizon), base_(base), seed_(seed) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
    throw ParameterError("schedule horizon must be > 0");
  const double eps = kSnap * horizon_;
  double last_off = 0.0;
  for (std::size_t k = 0; k < pulses_.size(); ++k) {
    const Pulse& p = pulses_[k];
    if (!(p.width > 0.0) || !std::isfinite(p.width) || !std::isfinite(p.amplitude))
      throw ParameterError("pulse " + std::to_string(k) + ": width must be > 0");
    if (p.t_on < -eps || p.t_off() > horizon_ + eps)
      throw ParameterError("pulse " + std::to_string(k) + " exceeds [0, horizon]");
    if (p.t_on < last_off - eps)
      throw ParameterError("pulse " + std::to_string(k) + " overlaps its predecessor");
    last_off = p.t_off();
  }
  build_segments();
}

void Schedule::build_segments() {
  segments_.clear();
  const double eps = kSnap * horizon_;
  double t = 0.0;
  for (const Pulse& p : pulses_) {
    const double on = std::clamp(p.t_on, 0.0, horizon_);
    const double off = std::clamp(p.t_off(), 0.0, horizon_);
    if (on > t + eps) segments_.push_back({t, on, 0.0});
    const double start = (on > t + eps) ? on : t;
    if (off > start + eps) {
      segments_.push_back({start, off, p.amplitude});
      t = off;
    }
  }
  if (horizon_ > t + eps) {
    segments_.push_back({t, horizon_, 0.0});
  } else if (!segments_.empty()) {
    segments_.back().t1 = horizon_;
  }
}

double Schedule::on_fraction() const {
  double on = 0.0;
  for (const Pulse& p : pulses_) on += p.width;
  return on / horizon_;
}

std::string Schedule::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == ScheduleKind::regular || kind_ == ScheduleKind::irregular) {
    os << "(omega_D=" << base_.omega_D << ", delta=" << base_.delta << ", tau=" << base_.tau
       << ")";
  }
  if (kind_ == ScheduleKind::custom) os << "(" << pulses_.size() << " pulses)";
  if (seed_) os << " seed=" << *seed_;
  return os.str();
}

Schedule free_schedule(double horizon) { return Schedule(ScheduleKind::free, {}, horizon); }

Schedule regular_schedule(double omega_D, double delta, double tau, double horizon) {
  if (!(delta > 0.0) || !(tau > 0.0) || !(horizon > 0.0))
    throw ParameterError("regular_schedule: delta, tau and horizon must be > 0");
  if (delta > tau)
    throw ParameterError("regular_schedule: pulse width delta exceeds period tau (0 < delta <= tau)");

  const double eps = kSnap * horizon;
  const bool always_on = (delta == tau);
  std::vector<Pulse> pulses;
  for (long n = 0;; ++n) {
    const double t_on = static_cast<double>(n) * tau;
    if (t_on >= horizon - eps) break;
    double t_off = always_on ? static_cast<double>(n + 1) * tau : t_on + delta;
    t_off = std::min(t_off, horizon);
    if (t_off - t_on <= eps) break;
    pulses.push_back({t_on, t_off - t_on, omega_D});
  }
  return Schedule(ScheduleKind::regular, std::move(pulses), horizon, {omega_D, delta, tau});
}

Schedule irregular_schedule(const PulseTrain& base, const JitterSpec& jitter, double horizon) {
  if (!(base.delta > 0.0) || !(base.tau > 0.0) || !(horizon > 0.0))
    throw ParameterError("irregular_schedule: delta, tau and horizon must be > 0");
  if (base.delta > base.tau)
    throw ParameterError("irregular_schedule: pulse width delta exceeds period tau");
  if (jitter.D_delta < 0.0 || jitter.D_tau < 0.0 || jitter.D_omega < 0.0)
    throw ParameterError("irregular_schedule: jitter half-ranges must be >= 0");
  if (base.delta - jitter.D_delta >= base.tau + jitter.D_tau)
    throw ParameterError(
        "irregular_schedule: no draw can satisfy 0 < delta_k < tau_k "
        "(delta - D_delta >= tau + D_tau)");
  if (base.tau - jitter.D_tau <= 0.0)
    throw ParameterError("irregular_schedule: tau - D_tau must stay > 0");

  std::mt19937_64 rng(jitter.seed);
  const double eps = kSnap * horizon;
  std::vector<Pulse> pulses;
  double start = 0.0;
  while (start < horizon - eps) {
    double d = 0.0;
    double t = 0.0;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxResample && !ok; ++attempt) {
      d = base.delta + jitter.D_delta * uniform_pm1(rng);
      t = base.tau + jitter.D_tau * uniform_pm1(rng);
      ok = (d > 0.0 && d < t);
    }
    if (!ok) d = 0.99 * t;
    const double w = base.omega_D + jitter.D_omega * uniform_pm1(rng);
    const double off = std::min(start + d, horizon);
    if (off - start > eps) pulses.push_back({start, off - start, w});
    start += t;
  }
  return Schedule(ScheduleKind::irregular, std::move(pulses), horizon, base, jitter.seed);
}

Schedule custom_schedule(std::vector<Pulse> pulses, double horizon) {
  std::stable_sort(pulses.begin(), pulses.end(),
                   [](const Pulse& a, const Pulse& b) { return a.t_on < b.t_on; });
  return Schedule(ScheduleKind::custom, std::move(pulses), horizon);
}

double detuning_at(const Schedule& s, double t) {
  if (!(t >= 0.0 && t <= s.horizon()))
    throw DomainError("detuning_at: t outside [0, horizon]");
  const auto& ps = s.pulses();
  auto it = std::upper_bound(ps.begin(), ps.end(), t,
                             [](double x, const Pulse& p) { return x < p.t_on; });
  if (it == ps.begin()) return 0.0;
  --it;
  return (t < it->t_off()) ? it->amplitude : 0.0;
}

double phase_integral(const Schedule& s, double t) {
  if (!(t >= 0.0 && t <= s.horizon()))
    throw DomainError("phase_integral: t outside [0, horizon]");
  double phi = 0.0;
  for (const Pulse& p : s.pulses()) {
    if (p.t_on >= t) break;
    phi += p.amplitude * (std::min(p.t_off(), t) - p.t_on);
  }
  return phi;
}

double filter_function(const Schedule& s, double omega, double T) {
  if (!(T >= 0.0) || T > s.horizon() * (1.0 + kSnap))
    throw DomainError("filter_function: T outside [0, horizon]");
  std::complex<double> acc{};
  double phi = 0.0;
  for (const Segment& seg : s.segments()) {
    if (seg.t0 >= T) break;
    const double b = std::min(seg.t1, T);
    const double L = b - seg.t0;
    const double k = omega + seg.detuning;
    acc += std::polar(1.0, omega * seg.t0 + phi) * segment_integral(k, L);
    phi += seg.detuning * L;
  }
  return std::norm(acc);
}

}  // namespace ddosc
