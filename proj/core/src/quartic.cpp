#include "ddosc/quartic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ddosc/errors.hpp"

namespace ddosc {

namespace {

constexpr double kFallbackResidual = 1e-9;

cplx principal_cbrt(cplx z) {
  if (z == cplx{}) return {};
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

// Both roots of x^2 + b x + c without cancellation.
std::array<cplx, 2> quadratic_roots(cplx b, cplx c) {
  const cplx disc = std::sqrt(b * b - 4.0 * c);
  const cplx t = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
  if (t == cplx{}) return {cplx{}, cplx{}};
  return {t, c / t};
}

double cubic_residual(cplx c2, cplx c1, cplx c0, cplx z) {
  const double az = std::abs(z);
  const double scale = az * az * az + std::abs(c2) * az * az + std::abs(c1) * az + std::abs(c0);
  const double f = std::abs(((z + c2) * z + c1) * z + c0);
  return scale > 0.0 ? f / scale : f;
}

// Up to two Newton steps, each kept only when it lowers the residual.
template <class F, class DF, class Res>
cplx polish(cplx z, F f, DF df, Res res) {
  double best = res(z);
  for (int it = 0; it < 2 && best > 0.0; ++it) {
    const cplx d = df(z);
    if (d == cplx{}) break;
    const cplx trial = z - f(z) / d;
    const double rt = res(trial);
    if (!(rt < best)) break;
    z = trial;
    best = rt;
  }
  return z;
}

RootSet finish(const QuarticCoeffs& qc, const std::array<cplx, 4>& roots, RootMethod method) {
  RootSet rs;
  rs.method = method;
  for (int k = 0; k < 4; ++k) {
    rs.roots[k] = roots[k];
    rs.residuals[k] = normalized_residual(qc, roots[k]);
  }
  return rs;
}

std::array<cplx, 4> polish_all(const QuarticCoeffs& qc, std::array<cplx, 4> roots) {
  auto f = [&](cplx l) { return qc.eval(l); };
  auto df = [&](cplx l) { return ((4.0 * l + 3.0 * qc.A) * l + 2.0 * qc.B) * l + qc.C; };
  auto res = [&](cplx l) { return normalized_residual(qc, l); };
  for (auto& l : roots) l = polish(l, f, df, res);
  return roots;
}

}  // namespace

const char* to_string(RootMethod m) noexcept {
  return m == RootMethod::radicals ? "radicals" : "companion-fallback";
}

double RootSet::max_residual() const {
  return *std::max_element(residuals.begin(), residuals.end());
}

double normalized_residual(const QuarticCoeffs& qc, cplx lambda) {
  const double s = 1.0 + std::abs(lambda);
  return std::abs(qc.eval(lambda)) / ((1.0 + qc.max_modulus()) * s * s * s * s);
}

std::array<cplx, 3> solve_cubic(cplx c2, cplx c1, cplx c0) {
  const cplx shift = c2 / 3.0;
  const cplx P = c1 - c2 * c2 / 3.0;
  const cplx Q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const cplx disc = std::sqrt(0.25 * Q * Q + P * P * P / 27.0);
  const cplx w_plus = -0.5 * Q + disc;
  const cplx w_minus = -0.5 * Q - disc;
  const cplx w = std::abs(w_plus) >= std::abs(w_minus) ? w_plus : w_minus;

  // u^3 = w and u v = -P/3 pin v to the branch matching u.
  const cplx u = principal_cbrt(w);
  const cplx v = (u == cplx{}) ? cplx{} : -P / (3.0 * u);
  const cplx e1 = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const cplx e2 = std::conj(e1);

  std::array<cplx, 3> z{u + v - shift, e1 * u + e2 * v - shift, e2 * u + e1 * v - shift};
  auto f = [&](cplx x) { return ((x + c2) * x + c1) * x + c0; };
  auto df = [&](cplx x) { return (3.0 * x + 2.0 * c2) * x + c1; };
  auto res = [&](cplx x) { return cubic_residual(c2, c1, c0, x); };
  for (auto& x : z) x = polish(x, f, df, res);
  return z;
}

ResolventSolution resolvent(cplx p, cplx q, cplx r) {
  if (q == cplx{}) throw DomainError("resolvent: q = 0 has no Ferrari factor with a != 0");
  const auto z = solve_cubic(-0.5 * p, -r, 0.5 * r * p - 0.125 * q * q);
  ResolventSolution s;
  s.z0 = *std::max_element(z.begin(), z.end(), [&](cplx x, cplx y) {
    return std::abs(2.0 * x - p) < std::abs(2.0 * y - p);
  });
  s.a = std::sqrt(2.0 * s.z0 - p);
  s.b = -q / (2.0 * s.a);
  s.m = s.z0 + s.b;
  s.n = s.z0 - s.b;
  return s;
}

RootSet solve_depressed_quartic(cplx p, cplx q, cplx r) {
  const auto qc = QuarticCoeffs::from_monic(cplx{}, p, q, r);
  std::array<cplx, 4> y{};
  if (p == cplx{} && q == cplx{} && r == cplx{}) return finish(qc, y, RootMethod::radicals);

  if (q == cplx{}) {
    // Biquadratic: y^2 = w with w^2 + p w + r = 0.
    const auto w = quadratic_roots(p, r);
    const cplx s0 = std::sqrt(w[0]);
    const cplx s1 = std::sqrt(w[1]);
    y = {s0, -s0, s1, -s1};
  } else {
    const auto s = resolvent(p, q, r);
    const auto first = quadratic_roots(s.a, s.m);
    const auto second = quadratic_roots(-s.a, s.n);
    y = {first[0], first[1], second[0], second[1]};
  }
  y = polish_all(qc, y);
  auto rs = finish(qc, y, RootMethod::radicals);
  if (!(rs.max_residual() <= kFallbackResidual)) {
    rs = finish(qc, companion_roots(cplx{}, p, q, r), RootMethod::companion_fallback);
  }
  return rs;
}

RootSet solve_quartic(const QuarticCoeffs& qc) {
  const RootSet depressed = solve_depressed_quartic(qc.p, qc.q, qc.r);
  std::array<cplx, 4> l{};
  for (int k = 0; k < 4; ++k) l[k] = depressed.roots[k] - qc.shift;
  l = polish_all(qc, l);
  RootSet rs = finish(qc, l, depressed.method);
  if (!(rs.max_residual() <= kFallbackResidual)) {
    rs = finish(qc, companion_roots(qc.A, qc.B, qc.C, qc.D), RootMethod::companion_fallback);
  }
  return rs;
}

std::array<cplx, 4> companion_roots(cplx A, cplx B, cplx C, cplx D) {
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  M(0, 0) = -A;
  M(0, 1) = -B;
  M(0, 2) = -C;
  M(0, 3) = -D;
  M(1, 0) = 1.0;
  M(2, 1) = 1.0;
  M(3, 2) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("companion_roots: QR iteration did not converge for coefficients A=" +
                         std::to_string(std::abs(A)) + " B=" + std::to_string(std::abs(B)) +
                         " C=" + std::to_string(std::abs(C)) + " D=" + std::to_string(std::abs(D)) +
                         " (moduli)");
  }
  std::array<cplx, 4> out{};
  for (int k = 0; k < 4; ++k) out[k] = solver.eigenvalues()(k);
  return out;
}

std::array<int, 4> optimal_pairing(const std::array<cplx, 4>& prev,
                                   const std::array<cplx, 4>& next) {
  auto lex_less = [](const std::array<int, 4>& pa, const std::array<int, 4>& pb,
                     const std::array<cplx, 4>& v) {
    for (int k = 0; k < 4; ++k) {
      const cplx a = v[pa[k]];
      const cplx b = v[pb[k]];
      if (a.real() != b.real()) return a.real() < b.real();
      if (a.imag() != b.imag()) return a.imag() < b.imag();
    }
    return false;
  };

  std::array<int, 4> perm{0, 1, 2, 3};
  std::array<int, 4> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int k = 0; k < 4; ++k) cost += std::abs(next[perm[k]] - prev[k]);
    const double tie = 1e-14 * (1.0 + std::min(cost, best_cost));
    if (cost < best_cost - tie) {
      best_cost = cost;
      best = perm;
    } else if (std::abs(cost - best_cost) <= tie && lex_less(perm, best, next)) {
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

RootSet track_branches(const RootSet& prev, const RootSet& next) {
  const auto perm = optimal_pairing(prev.roots, next.roots);
  RootSet out = next;
  for (int k = 0; k < 4; ++k) {
    out.roots[k] = next.roots[perm[k]];
    out.residuals[k] = next.residuals[perm[k]];
  }
  return out;
}

double pairing_distance(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b) {
  std::array<int, 4> perm{0, 1, 2, 3};
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a[k] - b[perm[k]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace ddosc
