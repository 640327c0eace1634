#include "ddosc/closed_propagator.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "ddosc/errors.hpp"

namespace ddosc {

namespace {

constexpr double kRatioTiny = 1e-12;
constexpr double kReconstructTol = 1e-10;
constexpr double kTimeSnap = 1e-12;

// (x, y) spanning the null space of [[P1, c], [c~, P2]] at a root.
std::pair<cplx, cplx> null_vector(const SecondOrderCoeffs& c, cplx l) {
  const cplx P1 = c.diag1(l), P2 = c.diag2(l);
  const cplx c1 = c.cross(l), c2 = c.cross_tilde(l);
  if (std::abs(c1) > kRatioTiny * (std::abs(P1) + std::abs(c1))) return {1.0, -P1 / c1};
  if (std::abs(c2) > kRatioTiny * (std::abs(P2) + std::abs(c2))) return {-P2 / c2, 1.0};
  return std::abs(P1) <= std::abs(P2) ? std::pair<cplx, cplx>{1.0, 0.0}
                                      : std::pair<cplx, cplx>{0.0, 1.0};
}

// Roots of s^2 + a s + b, stable against cancellation.
std::array<cplx, 2> quadratic_roots(cplx a, cplx b) {
  const cplx disc = std::sqrt(a * a - 4.0 * b);
  const cplx qq = -0.5 * (a + (std::real(std::conj(a) * disc) >= 0.0 ? disc : -disc));
  if (qq == cplx{}) return {cplx{}, cplx{}};
  return {qq, b / qq};
}

SegmentState state_from_vector(double t, const Vector4c& x) {
  return {t, x[0], x[1], x[2], x[3]};
}

Vector4c vector_from_state(const SegmentState& s) { return {s.A1, s.A2, s.dA1, s.dA2}; }

double state_distance(const SegmentState& a, const SegmentState& b) {
  return std::max({std::abs(a.A1 - b.A1), std::abs(a.A2 - b.A2), std::abs(a.dA1 - b.dA1),
                   std::abs(a.dA2 - b.dA2)});
}

double state_scale(const SegmentState& s) {
  return 1.0 + std::max({std::abs(s.A1), std::abs(s.A2), std::abs(s.dA1), std::abs(s.dA2)});
}

SegmentSolution make_fallback(SegmentSolution seg, const SegmentOptions& opts) {
  seg.fallback = NumericalSegment{first_order_matrix(seg.coeffs), opts.fallback_step};
  return seg;
}

}  // namespace

std::optional<std::array<cplx, 4>> mode_ratios(std::span<const cplx, 4> lambdas,
                                               const SecondOrderCoeffs& c) {
  if (c.decoupled()) return std::nullopt;
  std::array<cplx, 4> r{};
  for (int k = 0; k < 4; ++k) {
    const cplx l = lambdas[k];
    r[k] = -c.diag1(l) / c.cross(l);
  }
  return r;
}

SegmentSolution solve_segment(const SecondOrderCoeffs& c, const SegmentState& init, double t1,
                              const SegmentOptions& opts) {
  if (!(t1 >= init.t)) throw DomainError("solve_segment: t1 precedes the segment start");
  SegmentSolution seg;
  seg.t0 = init.t;
  seg.t1 = t1;
  seg.coeffs = c;
  seg.start = init;

  if (c.decoupled()) {
    seg.decoupled = true;
    const auto r1 = quadratic_roots(c.alpha, c.beta);
    const auto r2 = quadratic_roots(c.alpha_tilde, c.beta_tilde);
    const QuarticCoeffs qc = quartic_coeffs(c);
    seg.roots.roots = {r1[0], r1[1], r2[0], r2[1]};
    for (int k = 0; k < 4; ++k) seg.roots.residuals[k] = normalized_residual(qc, seg.roots.roots[k]);
    for (int k = 0; k < 2; ++k) {
      seg.modes[k] = {r1[k], 1.0, 0.0, {}};
      seg.modes[k + 2] = {r2[k], 0.0, 1.0, {}};
    }
  } else {
    RootSet rs = solve_quartic(quartic_coeffs(c));
    if (opts.previous_roots) rs = track_branches(*opts.previous_roots, rs);
    seg.roots = rs;
    for (int k = 0; k < 4; ++k) {
      const auto [x, y] = null_vector(c, rs.roots[k]);
      seg.modes[k] = {rs.roots[k], x, y, {}};
    }
  }

  Eigen::Matrix4cd M;
  for (int k = 0; k < 4; ++k) {
    const Eigenmode& m = seg.modes[k];
    M(0, k) = m.x;
    M(1, k) = m.y;
    M(2, k) = m.lambda * m.x;
    M(3, k) = m.lambda * m.y;
  }
  Eigen::Vector4cd rhs(init.A1, init.A2, init.dA1, init.dA2);
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(M);
  if (!lu.isInvertible()) {
    seg.condition = std::numeric_limits<double>::infinity();
    return make_fallback(std::move(seg), opts);
  }
  const Eigen::Matrix4cd Minv = lu.inverse();
  auto one_norm = [](const Eigen::Matrix4cd& X) { return X.cwiseAbs().colwise().sum().maxCoeff(); };
  seg.condition = one_norm(M) * one_norm(Minv);
  if (!std::isfinite(seg.condition) || seg.condition > opts.condition_limit)
    return make_fallback(std::move(seg), opts);

  const Eigen::Vector4cd C = lu.solve(rhs);
  for (int k = 0; k < 4; ++k) seg.modes[k].constant = C(k);

  const SegmentState back = eval(seg, seg.t0);
  if (!(state_distance(back, init) <= kReconstructTol * state_scale(init)))
    return make_fallback(std::move(seg), opts);
  return seg;
}

SegmentState eval(const SegmentSolution& seg, double t) {
  const double tol = kTimeSnap * std::max(1.0, std::abs(seg.t1));
  if (!(t >= seg.t0 - tol && t <= seg.t1 + tol))
    throw DomainError("eval: t outside the segment");
  const double dt = std::clamp(t, seg.t0, seg.t1) - seg.t0;
  if (seg.fallback) {
    const Vector4c x =
        integrate_linear4(seg.fallback->K, vector_from_state(seg.start), dt, seg.fallback->max_step);
    return state_from_vector(t, x);
  }
  SegmentState s;
  s.t = t;
  for (const Eigenmode& m : seg.modes) {
    const cplx e = m.constant * std::exp(m.lambda * dt);
    s.A1 += e * m.x;
    s.A2 += e * m.y;
    s.dA1 += e * m.lambda * m.x;
    s.dA2 += e * m.lambda * m.y;
  }
  return s;
}

SegmentState apply_matching(const SegmentState& before, double d_before, double d_after,
                            MatchingMode matching) {
  SegmentState s = before;
  if (matching == MatchingMode::kernel_continuous) {
    const cplx shift{0.0, -(d_after - d_before)};
    s.dA1 += shift * s.A1;
    s.dA2 += shift * s.A2;
  }
  return s;
}

Trajectory propagate(const PhysicalParams& params, const Schedule& schedule, MatchingMode matching,
                     std::span<const double> grid, const PropagateOptions& opts) {
  params.validate();
  const double horizon = schedule.horizon();
  const double eps = kTimeSnap * std::max(1.0, horizon);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= -eps && grid[k] <= horizon + eps))
      throw DomainError("propagate: grid point outside [0, horizon]");
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw ContractError("propagate: grid must be strictly increasing");
  }

  Trajectory traj;
  traj.times.assign(grid.begin(), grid.end());
  traj.states.reserve(grid.size());
  traj.provenance.engine = Engine::closed;
  traj.provenance.matching = matching;
  traj.provenance.coefficients = opts.coefficients;
  traj.provenance.schedule = schedule.describe();
  traj.provenance.seed = schedule.seed();

  const auto& segs = schedule.segments();
  SegmentState state = initial_state(params, segs.front().detuning);
  SegmentOptions sopts{opts.condition_limit, opts.fallback_step, nullptr};
  RootSet previous;
  std::size_t gi = 0;

  for (std::size_t s = 0; s < segs.size(); ++s) {
    const Segment& seg = segs[s];
    state.t = seg.t0;
    const SecondOrderCoeffs c = second_order_coeffs(params, seg.detuning, opts.coefficients);
    const SegmentSolution sol = solve_segment(c, state, seg.t1, sopts);
    if (sol.fallback) ++traj.provenance.fallback_segments;
    if (sol.roots.method == RootMethod::companion_fallback) ++traj.provenance.companion_roots;
    previous = sol.roots;
    sopts.previous_roots = sol.decoupled ? nullptr : &previous;

    // A grid point sitting on a switch belongs to the segment that ends there.
    while (gi < grid.size() && grid[gi] <= seg.t1 + eps) {
      SegmentState v = eval(sol, std::clamp(grid[gi], seg.t0, seg.t1));
      v.t = grid[gi];
      traj.states.push_back(v);
      ++gi;
    }
    if (s + 1 < segs.size()) {
      const SegmentState end = eval(sol, seg.t1);
      state = apply_matching(end, seg.detuning, segs[s + 1].detuning, matching);
    }
  }
  while (gi < grid.size()) {  // only reachable through the snap tolerance
    traj.states.push_back(traj.states.empty() ? state : traj.states.back());
    traj.states.back().t = grid[gi++];
  }
  return traj;
}

}  // namespace ddosc
