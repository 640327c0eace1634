#include "ddosc/trajectory.hpp"

#include "ddosc/errors.hpp"

namespace ddosc {

const char* to_string(MatchingMode m) noexcept {
  switch (m) {
    case MatchingMode::derivative_continuous: return "derivative_continuous";
    case MatchingMode::kernel_continuous: return "kernel_continuous";
  }
  return "unknown";
}

const char* to_string(Engine e) noexcept {
  switch (e) {
    case Engine::closed: return "closed";
    case Engine::kernel: return "kernel";
    case Engine::discrete_bath: return "discrete_bath";
  }
  return "unknown";
}

std::vector<double> uniform_grid(double t_end, std::size_t samples) {
  if (!(t_end > 0.0)) throw ParameterError("uniform_grid: t_end must be > 0");
  if (samples < 2) throw ParameterError("uniform_grid: need at least 2 samples");
  std::vector<double> t(samples);
  const double h = t_end / static_cast<double>(samples - 1);
  for (std::size_t k = 0; k < samples; ++k) t[k] = h * static_cast<double>(k);
  t.back() = t_end;
  return t;
}

SegmentState initial_state(const PhysicalParams& p, double initial_detuning) {
  SegmentState s;
  s.t = 0.0;
  s.A1 = 1.0;
  s.A2 = 0.0;
  s.dA1 = cplx(0.0, -(p.omega1 + initial_detuning));
  s.dA2 = cplx(0.0, -p.g);
  return s;
}

}  // namespace ddosc
