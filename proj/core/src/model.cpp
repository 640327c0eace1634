#include "ddosc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ddosc/errors.hpp"

namespace ddosc {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ParameterError(msg);
}

}  // namespace

void PhysicalParams::validate() const {
  require(std::isfinite(omega1) && std::isfinite(omega2) && std::isfinite(g) &&
              std::isfinite(Omega_bath),
          "physical parameters must be finite");
  require(gamma_bath > 0.0 && std::isfinite(gamma_bath), "gamma_bath must be > 0");
  require(Gamma >= 0.0 && std::isfinite(Gamma), "Gamma must be >= 0");
  require(T_B >= 0.0 && std::isfinite(T_B), "T_B must be >= 0");
  require(n10 >= 0.0 && std::isfinite(n10), "n10 must be >= 0");
  require(n20 >= 0.0 && std::isfinite(n20), "n20 must be >= 0");
}

double thermal_occupation(double omega, double T_B) {
  if (!(omega > 0.0)) throw DomainError("thermal_occupation: omega must be > 0");
  if (T_B < 0.0) throw DomainError("thermal_occupation: T_B must be >= 0");
  if (T_B == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / T_B);
}

double spectral_density(double omega, const PhysicalParams& p) {
  const double x = omega - p.Omega_bath;
  const double w = p.gamma_bath;
  return p.Gamma * w / (2.0 * std::numbers::pi) / (x * x + w * w);
}

cplx memory_kernel(double delta_t, const PhysicalParams& p) {
  if (delta_t < 0.0) throw DomainError("memory_kernel: delta_t must be >= 0");
  const cplx rate{p.gamma_bath, p.Omega_bath};
  return 0.5 * p.Gamma * p.gamma_bath * std::exp(-rate * delta_t);
}

const char* to_string(CoefficientModel m) noexcept {
  return m == CoefficientModel::derived ? "derived" : "printed";
}

bool SecondOrderCoeffs::decoupled() const noexcept {
  return velocity_cross == cplx{} && velocity_cross_tilde == cplx{} && bath_cross == cplx{} &&
         gamma_cross == cplx{} && gamma_cross_tilde == cplx{};
}

SecondOrderCoeffs second_order_coeffs(const PhysicalParams& p, double detuning,
                                      CoefficientModel model) {
  const cplx I{0.0, 1.0};
  const double w = p.gamma_bath;
  const double W = p.Omega_bath;
  const double w1 = p.omega1 + detuning;
  const double w2 = p.omega2 + detuning;

  SecondOrderCoeffs c;
  c.model = model;
  c.alpha = w + I * (W + w1);
  c.alpha_tilde = w + I * (W + w2);
  c.beta = 0.5 * p.Gamma * w - w1 * W + I * (w * w1);
  c.beta_tilde = 0.5 * p.Gamma * w - w2 * W + I * (w * w2);
  c.gamma_cross = I * p.g * cplx{w, W};
  c.gamma_cross_tilde = c.gamma_cross;
  if (model == CoefficientModel::derived) {
    c.velocity_cross = I * p.g;
    c.velocity_cross_tilde = I * p.g;
    c.bath_cross = 0.5 * p.Gamma * w;
  }
  return c;
}

QuarticCoeffs QuarticCoeffs::from_monic(cplx A, cplx B, cplx C, cplx D) {
  QuarticCoeffs q;
  q.A = A;
  q.B = B;
  q.C = C;
  q.D = D;
  const cplx A2 = A * A;
  q.p = B - 0.375 * A2;
  q.q = C - 0.5 * A * B + 0.125 * A2 * A;
  q.r = D - 0.25 * A * C + 0.0625 * A2 * B - (3.0 / 256.0) * A2 * A2;
  q.shift = 0.25 * A;
  return q;
}

double QuarticCoeffs::max_modulus() const {
  return std::max({std::abs(A), std::abs(B), std::abs(C), std::abs(D)});
}

QuarticCoeffs quartic_coeffs(const SecondOrderCoeffs& c) {
  // det = (l^2 + a l + b)(l^2 + a~ l + b~) - (v l + k)(v~ l + k~)
  const cplx k = c.bath_cross + c.gamma_cross;
  const cplx kt = c.bath_cross + c.gamma_cross_tilde;
  const cplx& v = c.velocity_cross;
  const cplx& vt = c.velocity_cross_tilde;
  const cplx A = c.alpha + c.alpha_tilde;
  const cplx B = c.alpha * c.alpha_tilde + c.beta + c.beta_tilde - v * vt;
  const cplx C = c.alpha * c.beta_tilde + c.alpha_tilde * c.beta - (v * kt + vt * k);
  const cplx D = c.beta * c.beta_tilde - k * kt;
  return QuarticCoeffs::from_monic(A, B, C, D);
}

}  // namespace ddosc
