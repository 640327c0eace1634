#include "ddosc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "ddosc/errors.hpp"

namespace ddosc {

namespace {

const cplx I{0.0, 1.0};

Vector4c mat_vec(const Matrix4c& K, const Vector4c& x) {
  Vector4c y{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) y[i] += K[i][j] * x[j];
  return y;
}

// Union of switch times and grid times, sorted and de-duplicated.
std::vector<double> breakpoints(const Schedule& s, std::span<const double> grid) {
  std::vector<double> b;
  b.reserve(grid.size() + 2 * s.segments().size() + 2);
  b.push_back(0.0);
  for (const Segment& seg : s.segments()) b.push_back(seg.t1);
  for (double t : grid) b.push_back(t);
  std::sort(b.begin(), b.end());
  const double eps = 1e-12 * std::max(1.0, s.horizon());
  std::vector<double> out;
  for (double t : b) {
    if (out.empty() || t > out.back() + eps) out.push_back(t);
  }
  return out;
}

void check_grid(const Schedule& s, std::span<const double> grid) {
  const double eps = 1e-12 * std::max(1.0, s.horizon());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= -eps && grid[k] <= s.horizon() + eps))
      throw DomainError("grid point outside [0, horizon]");
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw ContractError("grid must be strictly increasing");
  }
}

// Detuning in force on (a, b): the segment containing the midpoint.
double detuning_on(const Schedule& s, double a, double b) {
  return detuning_at(s, std::min(0.5 * (a + b), s.horizon()));
}

}  // namespace

Vector4c integrate_linear4(const Matrix4c& K, const Vector4c& x0, double duration, double max_step) {
  if (!(duration >= 0.0)) throw DomainError("integrate_linear4: negative duration");
  if (!(max_step > 0.0)) throw ParameterError("integrate_linear4: max_step must be > 0");
  Vector4c x = x0;
  if (duration == 0.0) return x;
  const long n = std::max(1L, static_cast<long>(std::ceil(duration / max_step - 1e-9)));
  const double h = duration / static_cast<double>(n);
  for (long s = 0; s < n; ++s) {
    const Vector4c k1 = mat_vec(K, x);
    Vector4c t;
    for (int i = 0; i < 4; ++i) t[i] = x[i] + 0.5 * h * k1[i];
    const Vector4c k2 = mat_vec(K, t);
    for (int i = 0; i < 4; ++i) t[i] = x[i] + 0.5 * h * k2[i];
    const Vector4c k3 = mat_vec(K, t);
    for (int i = 0; i < 4; ++i) t[i] = x[i] + h * k3[i];
    const Vector4c k4 = mat_vec(K, t);
    for (int i = 0; i < 4; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return x;
}

Matrix4c first_order_matrix(const SecondOrderCoeffs& c) {
  Matrix4c K{};
  K[0][2] = 1.0;
  K[1][3] = 1.0;
  K[2][0] = -c.beta;
  K[2][1] = -(c.bath_cross + c.gamma_cross);
  K[2][2] = -c.alpha;
  K[2][3] = -c.velocity_cross;
  K[3][0] = -(c.bath_cross + c.gamma_cross_tilde);
  K[3][1] = -c.beta_tilde;
  K[3][2] = -c.velocity_cross_tilde;
  K[3][3] = -c.alpha_tilde;
  return K;
}

// ---------------------------------------------------------------------------
// Kernel reduction

namespace {

struct KernelRhs {
  cplx w1, w2, g, G0, rate;

  std::array<cplx, 3> operator()(const std::array<cplx, 3>& y) const {
    return {-I * w1 * y[0] - I * g * y[1] - y[2], -I * w2 * y[1] - I * g * y[0] - y[2],
            G0 * (y[0] + y[1]) - rate * y[2]};
  }
};

KernelRhs kernel_rhs(const PhysicalParams& p, double d) {
  return {p.omega1 + d, p.omega2 + d, p.g, 0.5 * p.Gamma * p.gamma_bath,
          cplx{p.gamma_bath, p.Omega_bath}};
}

double spectral_radius(const KernelRhs& f) {
  Eigen::Matrix3cd A;
  A << -I * f.w1, -I * f.g, -1.0, -I * f.g, -I * f.w2, -1.0, f.G0, f.G0, -f.rate;
  return A.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Trajectory integrate_kernel(const PhysicalParams& params, const Schedule& schedule,
                            std::span<const double> grid, const KernelOptions& opts) {
  params.validate();
  if (!(opts.dt > 0.0)) throw ParameterError("integrate_kernel: dt must be > 0");
  check_grid(schedule, grid);

  double rho = 0.0;
  for (const Segment& seg : schedule.segments())
    rho = std::max(rho, spectral_radius(kernel_rhs(params, seg.detuning)));
  if (opts.dt * rho > opts.stability_limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "integrate_kernel: dt=%.3g is unstable for |lambda|max=%.3g; use dt <= %.3g",
                  opts.dt, rho, 2.0 / rho);
    throw NumericalError(buf);
  }

  Trajectory traj;
  traj.times.assign(grid.begin(), grid.end());
  traj.states.reserve(grid.size());
  traj.provenance.engine = Engine::kernel;
  traj.provenance.schedule = schedule.describe();
  traj.provenance.seed = schedule.seed();

  std::array<cplx, 3> y{1.0, 0.0, 0.0};
  const auto bps = breakpoints(schedule, grid);
  const double eps = 1e-12 * std::max(1.0, schedule.horizon());
  std::size_t gi = 0;
  double d_prev = schedule.segments().front().detuning;

  auto record = [&](double t, double d) {
    const KernelRhs f = kernel_rhs(params, d);
    const auto dy = f(y);
    traj.states.push_back({t, y[0], y[1], dy[0], dy[1]});
  };

  for (std::size_t b = 0; b < bps.size(); ++b) {
    if (b > 0) {
      const double a = bps[b - 1], e = bps[b];
      const double d = detuning_on(schedule, a, e);
      d_prev = d;
      const KernelRhs f = kernel_rhs(params, d);
      const long n = std::max(1L, static_cast<long>(std::ceil((e - a) / opts.dt - 1e-9)));
      const double h = (e - a) / static_cast<double>(n);
      for (long s = 0; s < n; ++s) {
        const auto k1 = f(y);
        std::array<cplx, 3> t;
        for (int i = 0; i < 3; ++i) t[i] = y[i] + 0.5 * h * k1[i];
        const auto k2 = f(t);
        for (int i = 0; i < 3; ++i) t[i] = y[i] + 0.5 * h * k2[i];
        const auto k3 = f(t);
        for (int i = 0; i < 3; ++i) t[i] = y[i] + h * k3[i];
        const auto k4 = f(t);
        for (int i = 0; i < 3; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
    }
    while (gi < grid.size() && std::abs(grid[gi] - bps[b]) <= eps) record(grid[gi++], d_prev);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Discrete bath

double bath_mode_occupation(double w, double T_B) {
  return w > 0.0 ? thermal_occupation(w, T_B) : 0.0;
}

namespace {

// Column of the single-particle propagator: two system amplitudes + N bath amplitudes.
struct Column {
  cplx a1, a2;
  std::vector<cplx> b;
};

class BathStepper {
 public:
  BathStepper(std::vector<double> w, std::vector<double> kappa, double g)
      : w_(std::move(w)), k_(std::move(kappa)), g_(g) {
    const std::size_t n = w_.size();
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &tmp_}) v->b.resize(n);
  }

  void step(Column& y, double w1, double w2, double h) {
    rhs(y, k1_, w1, w2);
    axpy(y, k1_, 0.5 * h, tmp_);
    rhs(tmp_, k2_, w1, w2);
    axpy(y, k2_, 0.5 * h, tmp_);
    rhs(tmp_, k3_, w1, w2);
    axpy(y, k3_, h, tmp_);
    rhs(tmp_, k4_, w1, w2);
    const double c = h / 6.0;
    y.a1 += c * (k1_.a1 + 2.0 * k2_.a1 + 2.0 * k3_.a1 + k4_.a1);
    y.a2 += c * (k1_.a2 + 2.0 * k2_.a2 + 2.0 * k3_.a2 + k4_.a2);
    for (std::size_t j = 0; j < y.b.size(); ++j)
      y.b[j] += c * (k1_.b[j] + 2.0 * k2_.b[j] + 2.0 * k3_.b[j] + k4_.b[j]);
  }

 private:
  void rhs(const Column& y, Column& dy, double w1, double w2) const {
    cplx s{};
    const cplx src = y.a1 + y.a2;
    for (std::size_t j = 0; j < y.b.size(); ++j) {
      s += k_[j] * y.b[j];
      dy.b[j] = -I * (w_[j] * y.b[j] + k_[j] * src);
    }
    dy.a1 = -I * (w1 * y.a1 + g_ * y.a2 + s);
    dy.a2 = -I * (w2 * y.a2 + g_ * y.a1 + s);
  }

  static void axpy(const Column& y, const Column& k, double h, Column& out) {
    out.a1 = y.a1 + h * k.a1;
    out.a2 = y.a2 + h * k.a2;
    for (std::size_t j = 0; j < y.b.size(); ++j) out.b[j] = y.b[j] + h * k.b[j];
  }

  std::vector<double> w_, k_;
  double g_;
  Column k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

DiscreteBathResult integrate_discrete_bath(const PhysicalParams& params, const Schedule& schedule,
                                           std::span<const double> grid, const BathOptions& opts) {
  params.validate();
  check_grid(schedule, grid);
  if (opts.modes < 2) throw ParameterError("integrate_discrete_bath: need at least 2 modes");
  if (!(opts.cutoff > 0.0)) throw ParameterError("integrate_discrete_bath: cutoff must be > 0");
  if (!(opts.dt > 0.0)) throw ParameterError("integrate_discrete_bath: dt must be > 0");

  const int N = opts.modes;
  const double half = opts.cutoff * params.gamma_bath;
  const double dw = 2.0 * half / static_cast<double>(N - 1);
  if (!(2.0 * std::numbers::pi / dw > schedule.horizon()))
    throw ParameterError(
        "integrate_discrete_bath: recurrence time 2 pi / d_omega is shorter than the horizon; "
        "increase modes or decrease cutoff");

  DiscreteBathResult out;
  out.frequencies.resize(N);
  out.couplings.resize(N);
  std::vector<double> occ(N);
  for (int j = 0; j < N; ++j) {
    const double w = params.Omega_bath - half + dw * j;
    out.frequencies[j] = w;
    // Weighted so that sum_j kappa_j^2 exp(-i w_j t) reproduces the memory kernel G(t).
    out.couplings[j] = std::sqrt(params.gamma_bath * spectral_density(w, params) * dw);
    occ[j] = bath_mode_occupation(w, params.T_B);
  }

  BathStepper stepper(out.frequencies, out.couplings, params.g);
  Column c1{1.0, 0.0, std::vector<cplx>(N)};
  Column c2{0.0, 1.0, std::vector<cplx>(N)};

  const std::size_t n = grid.size();
  out.trajectory.times.assign(grid.begin(), grid.end());
  out.trajectory.provenance.engine = Engine::discrete_bath;
  out.trajectory.provenance.schedule = schedule.describe();
  out.trajectory.provenance.seed = schedule.seed();
  for (auto* v : {&out.norm, &out.bath_population, &out.bath_population2, &out.weighted1,
                  &out.weighted2})
    v->reserve(n);
  out.C2.reserve(n);
  out.weighted_cross.reserve(n);

  const auto bps = breakpoints(schedule, grid);
  const double eps = 1e-12 * std::max(1.0, schedule.horizon());
  std::size_t gi = 0;
  double d_prev = schedule.segments().front().detuning;

  auto record = [&](double t) {
    double p1 = 0.0, p2 = 0.0, w1 = 0.0, w2 = 0.0;
    cplx x{}, s{};
    for (int j = 0; j < N; ++j) {
      const double a = std::norm(c1.b[j]), b = std::norm(c2.b[j]);
      p1 += a;
      p2 += b;
      w1 += a * occ[j];
      w2 += b * occ[j];
      x += std::conj(c1.b[j]) * c2.b[j] * occ[j];
      s += out.couplings[j] * c1.b[j];
    }
    const double wa = params.omega1 + d_prev, wb = params.omega2 + d_prev;
    const cplx dA1 = -I * (wa * c1.a1 + params.g * c1.a2 + s);
    const cplx dA2 = -I * (wb * c1.a2 + params.g * c1.a1 + s);
    out.trajectory.states.push_back({t, c1.a1, c1.a2, dA1, dA2});
    out.norm.push_back(std::norm(c1.a1) + std::norm(c1.a2) + p1);
    out.bath_population.push_back(p1);
    out.bath_population2.push_back(p2);
    out.C2.push_back(c2.a2);
    out.weighted1.push_back(w1);
    out.weighted2.push_back(w2);
    out.weighted_cross.push_back(x);
  };

  for (std::size_t b = 0; b < bps.size(); ++b) {
    if (b > 0) {
      const double a = bps[b - 1], e = bps[b];
      const double d = detuning_on(schedule, a, e);
      d_prev = d;
      const long steps = std::max(1L, static_cast<long>(std::ceil((e - a) / opts.dt - 1e-9)));
      const double h = (e - a) / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s) {
        stepper.step(c1, params.omega1 + d, params.omega2 + d, h);
        stepper.step(c2, params.omega1 + d, params.omega2 + d, h);
      }
    }
    while (gi < n && std::abs(grid[gi] - bps[b]) <= eps) record(grid[gi++]);
  }
  return out;
}

BathObservables observables_from_bath(const DiscreteBathResult& run, const PhysicalParams& params) {
  const std::size_t n = run.trajectory.size();
  if (run.weighted1.size() != n || run.C2.size() != n)
    throw ContractError("observables_from_bath: inconsistent run");
  const double nB = thermal_occupation(params.Omega_bath, params.T_B);
  BathObservables o;
  for (auto* v : {&o.n1_explicit, &o.n2_explicit, &o.n1_closure, &o.n2_closure}) v->resize(n);
  o.coherence_explicit.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = run.trajectory.states[k];
    const double a1 = std::norm(s.A1), a2 = std::norm(s.A2), c2 = std::norm(run.C2[k]);
    // Row 1 of the propagator is (A1, A2, B_1j); row 2 is (A2, C2, B_2j).
    o.n1_explicit[k] = a1 * params.n10 + a2 * params.n20 + run.weighted1[k];
    o.n2_explicit[k] = a2 * params.n10 + c2 * params.n20 + run.weighted2[k];
    o.coherence_explicit[k] =
        std::conj(s.A1) * s.A2 * params.n10 + std::conj(s.A2) * run.C2[k] * params.n20 +
        run.weighted_cross[k];
    o.n1_closure[k] = a1 * params.n10 + a2 * params.n20 + (1.0 - a1 - a2) * nB;
    o.n2_closure[k] = a2 * params.n10 + a1 * params.n20 + (1.0 - a1 - a2) * nB;
  }
  return o;
}

}  // namespace ddosc
