#pragma once

// Piecewise-exact propagation: on each constant-detuning segment the amplitudes
// are a sum of four exponentials fixed by the quartic roots and the state at the
// segment start; segments are chained by a MatchingMode rule.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ddosc/model.hpp"
#include "ddosc/oracle.hpp"
#include "ddosc/quartic.hpp"
#include "ddosc/schedule.hpp"
#include "ddosc/trajectory.hpp"

namespace ddosc {

/// One exponential mode: (A1, A2) gets C * (x, y) * exp(lambda (t - t0)).
/// Coupled modes have x = 1 and y = ratio; decoupled modes live on one amplitude only.
struct Eigenmode {
  cplx lambda;
  cplx x{1.0, 0.0};
  cplx y;
  cplx constant;

  cplx ratio() const { return y / x; }
};

/// d/dt (A1, A2, dA1, dA2) = K (A1, A2, dA1, dA2), integrated by RK4 when the
/// closed form is rejected.
struct NumericalSegment {
  Matrix4c K{};
  double max_step = 1e-3;
};

struct SegmentSolution {
  double t0 = 0.0;
  double t1 = 0.0;
  SecondOrderCoeffs coeffs;
  std::array<Eigenmode, 4> modes{};
  RootSet roots;
  double condition = 1.0;   ///< 1-norm condition estimate of the constant system
  bool decoupled = false;   ///< cross operators vanish; modes split per amplitude
  SegmentState start;       ///< state the constants were fitted to
  std::optional<NumericalSegment> fallback;  ///< set when the closed form was rejected
};

/// r_k = -(l_k^2 + alpha l_k + beta) / c(l_k). Returns nullopt when the cross
/// operator vanishes identically (decoupled-mode pathway).
std::optional<std::array<cplx, 4>> mode_ratios(std::span<const cplx, 4> lambdas,
                                               const SecondOrderCoeffs& c);

struct SegmentOptions {
  double condition_limit = 1e12;
  double fallback_step = 1e-3;
  const RootSet* previous_roots = nullptr;  ///< seeds branch tracking
};

SegmentSolution solve_segment(const SecondOrderCoeffs& c, const SegmentState& init, double t1,
                              const SegmentOptions& opts = {});

SegmentState eval(const SegmentSolution& seg, double t);

struct PropagateOptions {
  CoefficientModel coefficients = CoefficientModel::derived;
  double condition_limit = 1e12;
  double fallback_step = 1e-3;
};

Trajectory propagate(const PhysicalParams& params, const Schedule& schedule, MatchingMode matching,
                     std::span<const double> grid, const PropagateOptions& opts = {});

/// State after a detuning switch d_before -> d_after under the given rule.
SegmentState apply_matching(const SegmentState& before, double d_before, double d_after,
                            MatchingMode matching);

}  // namespace ddosc
