#pragma once

// Physical model of two coupled bosonic modes sharing one Lorentzian reservoir.
//
// Units: hbar = k_B = 1, frequencies in units of the bath peak (Omega = 1 by
// convention). The single-excitation amplitudes obey
//
//   dA1/dt = -i w1 A1 - i g A2 - M,   dA2/dt = -i w2 A2 - i g A1 - M,
//   dM/dt  = (Gamma gamma / 2)(A1 + A2) - (gamma + i Omega) M,
//
// where M is the memory integral of the exponential kernel. Eliminating M gives
// two coupled second-order equations whose coefficients live in SecondOrderCoeffs.

#include <complex>

namespace ddosc {

using cplx = std::complex<double>;

struct PhysicalParams {
  double omega1 = 1.0;      ///< bare frequency of mode 1
  double omega2 = 1.0;      ///< bare frequency of mode 2
  double g = 0.1;           ///< direct mode-mode hopping
  double Gamma = 15.0;      ///< overall system-bath coupling strength
  double gamma_bath = 1.0;  ///< Lorentzian half-width (inverse memory time)
  double Omega_bath = 1.0;  ///< bath peak frequency
  double T_B = 1.0;         ///< bath temperature
  double n10 = 1.0;         ///< initial occupation of mode 1
  double n20 = 0.0;         ///< initial occupation of mode 2

  /// Throws ParameterError when an invariant is violated.
  void validate() const;

  bool symmetric() const noexcept { return omega1 == omega2; }
};

/// Mean occupation 1/(exp(omega/T) - 1); exactly 0 at T = 0.
double thermal_occupation(double omega, double T_B);

/// Lorentzian spectral density J(w) = (Gamma gamma / 2 pi) / ((w - Omega)^2 + gamma^2).
double spectral_density(double omega, const PhysicalParams& p);

/// Memory kernel G(dt) = (Gamma gamma / 2) exp(-(gamma + i Omega) dt), dt >= 0.
cplx memory_kernel(double delta_t, const PhysicalParams& p);

/// Which second-order coefficient set to build.
///
/// `derived` eliminates the memory integral from the first-order equations and
/// keeps every cross term: the mode-2 velocity coupling i g dA2/dt and the
/// bath-mediated displacement coupling Gamma gamma / 2. `printed` keeps only the
/// cross coefficient i g (gamma + i Omega); it is retained for comparison and does
/// not reproduce the first-order dynamics when g != 0 or Gamma != 0.
enum class CoefficientModel { derived, printed };

const char* to_string(CoefficientModel m) noexcept;

/// Coefficients of
///   A1'' + alpha A1' + beta A1 + c(d/dt) A2 = 0
///   A2'' + alpha~ A2' + beta~ A2 + c~(d/dt) A1 = 0
/// with cross operators c(s) = velocity_cross s + bath_cross + gamma_cross.
struct SecondOrderCoeffs {
  cplx alpha, alpha_tilde;
  cplx beta, beta_tilde;
  cplx gamma_cross, gamma_cross_tilde;        ///< i g (gamma + i Omega)
  cplx velocity_cross, velocity_cross_tilde;  ///< i g (derived) or 0 (printed)
  cplx bath_cross;                            ///< Gamma gamma / 2 (derived) or 0
  CoefficientModel model = CoefficientModel::derived;

  cplx diag1(cplx s) const { return (s + alpha) * s + beta; }
  cplx diag2(cplx s) const { return (s + alpha_tilde) * s + beta_tilde; }
  cplx cross(cplx s) const { return velocity_cross * s + bath_cross + gamma_cross; }
  cplx cross_tilde(cplx s) const {
    return velocity_cross_tilde * s + bath_cross + gamma_cross_tilde;
  }
  /// Characteristic determinant diag1 * diag2 - cross * cross_tilde.
  cplx determinant(cplx s) const { return diag1(s) * diag2(s) - cross(s) * cross_tilde(s); }

  /// True when both cross operators vanish identically (modes decouple).
  bool decoupled() const noexcept;
};

/// Coefficients for a segment where both mode frequencies are shifted by `detuning`.
SecondOrderCoeffs second_order_coeffs(const PhysicalParams& p, double detuning,
                                      CoefficientModel model = CoefficientModel::derived);

/// Monic quartic l^4 + A l^3 + B l^2 + C l + D and its depressed form
/// y^4 + p y^2 + q y + r under l = y - shift, shift = A/4.
struct QuarticCoeffs {
  cplx A, B, C, D;
  cplx p, q, r;
  cplx shift;

  static QuarticCoeffs from_monic(cplx A, cplx B, cplx C, cplx D);
  cplx eval(cplx lambda) const { return (((lambda + A) * lambda + B) * lambda + C) * lambda + D; }
  double max_modulus() const;
};

QuarticCoeffs quartic_coeffs(const SecondOrderCoeffs& c);

}  // namespace ddosc
