#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddosc/model.hpp"

namespace ddosc {

/// Amplitudes and their time derivatives at one instant.
struct SegmentState {
  double t = 0.0;
  cplx A1, A2;
  cplx dA1, dA2;

  double norm() const { return std::norm(A1) + std::norm(A2); }
};

/// How amplitudes are carried across a detuning switch.
///
/// derivative_continuous copies (A1, A2, dA1, dA2). kernel_continuous copies
/// (A1, A2) and keeps the memory integral continuous, which shifts each
/// derivative by -i * (jump in detuning) * A_i.
enum class MatchingMode { derivative_continuous, kernel_continuous };

const char* to_string(MatchingMode m) noexcept;

enum class Engine { closed, kernel, discrete_bath };

const char* to_string(Engine e) noexcept;

struct Provenance {
  Engine engine = Engine::closed;
  MatchingMode matching = MatchingMode::kernel_continuous;
  CoefficientModel coefficients = CoefficientModel::derived;
  std::string schedule;
  std::optional<std::uint64_t> seed;
  int fallback_segments = 0;  ///< segments propagated numerically (closed engine)
  int companion_roots = 0;    ///< segments whose quartic used the companion fallback
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SegmentState> states;
  Provenance provenance;

  std::size_t size() const noexcept { return times.size(); }
};

/// Uniform grid of `samples` points on [0, t_end].
std::vector<double> uniform_grid(double t_end, std::size_t samples);

/// A1 = 1, A2 = 0, dA1 = -i (w1 + d0), dA2 = -i g: consistent with a vanishing
/// memory integral at t = 0 under initial detuning d0.
SegmentState initial_state(const PhysicalParams& p, double initial_detuning);

}  // namespace ddosc
