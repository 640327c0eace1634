#pragma once

// Independent numerical engines used to validate the closed form:
//  * kernel reduction: the exponential memory kernel turns the integro-differential
//    amplitude equations into a 3-variable linear ODE (A1, A2, M), integrated by RK4;
//  * discrete bath: the reservoir is replaced by N explicit modes sampled from the
//    Lorentzian density and the full (2 + N)-amplitude system is integrated by RK4.

#include <array>
#include <span>
#include <vector>

#include "ddosc/model.hpp"
#include "ddosc/schedule.hpp"
#include "ddosc/trajectory.hpp"

namespace ddosc {

using Matrix4c = std::array<std::array<cplx, 4>, 4>;
using Vector4c = std::array<cplx, 4>;

/// Advances dx/dt = K x over `duration` with classical RK4, step <= max_step.
Vector4c integrate_linear4(const Matrix4c& K, const Vector4c& x0, double duration, double max_step);

/// First-order form of the second-order amplitude equations for one segment.
Matrix4c first_order_matrix(const SecondOrderCoeffs& c);

/// (A1, A2, M) with M(t) = integral_0^t G(t - s) (A1 + A2)(s) ds.
struct KernelState {
  double t = 0.0;
  cplx A1{1.0, 0.0}, A2, M;
};

struct KernelOptions {
  double dt = 1e-3;
  /// RK4 stays stable for dt * |lambda| below ~2.8 on the imaginary axis.
  double stability_limit = 2.5;
};

/// RK4 on (A1, A2, M); steps end exactly on every switch and grid time.
Trajectory integrate_kernel(const PhysicalParams& params, const Schedule& schedule,
                            std::span<const double> grid, const KernelOptions& opts = {});

struct BathOptions {
  int modes = 4001;
  double cutoff = 40.0;  ///< grid half-width in units of gamma_bath
  double dt = 1e-3;
};

/// Discrete-bath run. Column 1 of the single-particle propagator gives
/// (A1, A2, B_1j); column 2 gives (A2, C2, B_2j). Bath sums are reduced on the fly.
struct DiscreteBathResult {
  Trajectory trajectory;
  std::vector<double> norm;            ///< |A1|^2 + |A2|^2 + sum |B_1j|^2
  std::vector<double> bath_population; ///< sum_j |B_1j|^2, the leaked probability
  std::vector<double> bath_population2;///< sum_j |B_2j|^2
  std::vector<cplx> C2;                ///< coefficient of a2(0) in a2(t)
  std::vector<double> weighted1;       ///< sum_j |B_1j|^2 n(w_j)
  std::vector<double> weighted2;       ///< sum_j |B_2j|^2 n(w_j)
  std::vector<cplx> weighted_cross;    ///< sum_j conj(B_1j) B_2j n(w_j)
  std::vector<double> frequencies;
  std::vector<double> couplings;
};

DiscreteBathResult integrate_discrete_bath(const PhysicalParams& params, const Schedule& schedule,
                                           std::span<const double> grid,
                                           const BathOptions& opts = {});

/// Occupation of a bath mode at frequency w: thermal for w > 0, zero otherwise.
double bath_mode_occupation(double w, double T_B);

/// AENs and coherence from a discrete-bath run, both with explicit per-mode bath
/// sums and with the probability-conservation closure at a single n_B.
struct BathObservables {
  std::vector<double> n1_explicit, n2_explicit;
  std::vector<cplx> coherence_explicit;
  std::vector<double> n1_closure, n2_closure;
};

BathObservables observables_from_bath(const DiscreteBathResult& run, const PhysicalParams& params);

}  // namespace ddosc
