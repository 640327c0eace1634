#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ddosc/errors.hpp"
#include "ddosc/quartic.hpp"

using namespace ddosc;

namespace {

QuarticCoeffs from_roots(const std::array<cplx, 4>& r) {
  const cplx e1 = r[0] + r[1] + r[2] + r[3];
  const cplx e2 = r[0] * r[1] + r[0] * r[2] + r[0] * r[3] + r[1] * r[2] + r[1] * r[3] + r[2] * r[3];
  const cplx e3 = r[0] * r[1] * r[2] + r[0] * r[1] * r[3] + r[0] * r[2] * r[3] + r[1] * r[2] * r[3];
  const cplx e4 = r[0] * r[1] * r[2] * r[3];
  return QuarticCoeffs::from_monic(-e1, e2, -e3, e4);
}

double bottleneck(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b) {
  std::array<int, 4> perm{0, 1, 2, 3};
  double best = 1e300;
  do {
    double m = 0.0;
    for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(a[k] - b[perm[k]]));
    best = std::min(best, m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST(Cubic, RecoversKnownRoots) {
  const cplx r0{1.0, 2.0}, r1{-0.5, 0.1}, r2{3.0, -1.0};
  const cplx c2 = -(r0 + r1 + r2), c1 = r0 * r1 + r0 * r2 + r1 * r2, c0 = -r0 * r1 * r2;
  auto z = solve_cubic(c2, c1, c0);
  for (const cplx& r : {r0, r1, r2}) {
    double d = 1e300;
    for (const cplx& x : z) d = std::min(d, std::abs(x - r));
    EXPECT_LT(d, 1e-12);
  }
}

TEST(Cubic, TripleRootAtZero) {
  auto z = solve_cubic(0.0, 0.0, 0.0);
  for (const cplx& x : z) EXPECT_LT(std::abs(x), 1e-15);
}

TEST(Quartic, KnownRootsRecovered) {
  const std::array<cplx, 4> r{cplx{-0.3, -1.2}, cplx{-0.05, 0.9}, cplx{-2.0, 4.0}, cplx{0.1, 0.0}};
  const auto q = from_roots(r);
  const RootSet rs = solve_quartic(q);
  EXPECT_LT(bottleneck(rs.roots, r), 1e-11);
  EXPECT_LT(rs.max_residual(), 1e-13);
  EXPECT_EQ(rs.method, RootMethod::radicals);
}

TEST(Quartic, BiquadraticRoute) {
  // y^4 - 5 y^2 + 4 = (y^2 - 1)(y^2 - 4): q = 0.
  const auto q = QuarticCoeffs::from_monic(0.0, -5.0, 0.0, 4.0);
  EXPECT_EQ(q.q, cplx{});
  EXPECT_THROW(resolvent(q.p, q.q, q.r), DomainError);
  const RootSet rs = solve_quartic(q);
  EXPECT_LT(bottleneck(rs.roots, {1.0, -1.0, 2.0, -2.0}), 1e-14);
}

TEST(Quartic, RepeatedRoots) {
  const auto q = from_roots({cplx{1.0, 1.0}, cplx{1.0, 1.0}, cplx{-1.0, 0.5}, cplx{-1.0, 0.5}});
  const RootSet rs = solve_quartic(q);
  EXPECT_LT(rs.max_residual(), 1e-9);
  // Double roots are only determined to ~sqrt(eps).
  EXPECT_LT(bottleneck(rs.roots, {cplx{1.0, 1.0}, cplx{1.0, 1.0}, cplx{-1.0, 0.5}, cplx{-1.0, 0.5}}),
            1e-6);
}

TEST(Quartic, ResolventFactorization) {
  const auto q = QuarticCoeffs::from_monic({0.2, 1.0}, {-1.0, 0.5}, {0.7, -0.3}, {2.0, 1.0});
  const ResolventSolution s = resolvent(q.p, q.q, q.r);
  // (y^2 + a y + m)(y^2 - a y + n) expands to y^4 + (m + n - a^2) y^2 + a (n - m) y + m n.
  EXPECT_LT(std::abs(s.m + s.n - s.a * s.a - q.p), 1e-12);
  EXPECT_LT(std::abs(s.a * (s.n - s.m) - q.q), 1e-12);
  EXPECT_LT(std::abs(s.m * s.n - q.r), 1e-12);
  // z0 is a root of the resolvent cubic.
  const cplx z = s.z0;
  const cplx cubic = z * z * z - 0.5 * q.p * z * z - q.r * z + (0.5 * q.r * q.p - q.q * q.q / 8.0);
  EXPECT_LT(std::abs(cubic), 1e-12);
}

TEST(Quartic, RandomSuiteAgainstCompanion) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double s = std::pow(10.0, 1.5 * u(rng));
    const auto q = QuarticCoeffs::from_monic({s * u(rng), s * u(rng)}, {s * s * u(rng), s * s * u(rng)},
                                             {s * s * s * u(rng), s * s * s * u(rng)},
                                             {s * s * s * s * u(rng), s * s * s * s * u(rng)});
    const RootSet rs = solve_quartic(q);
    ASSERT_LT(rs.max_residual(), 1e-9) << "case " << i;
    const auto comp = companion_roots(q.A, q.B, q.C, q.D);
    double scale = 1.0;
    for (const cplx& l : comp) scale = std::max(scale, std::abs(l));
    EXPECT_LT(pairing_distance(rs.roots, comp) / scale, 1e-8) << "case " << i;
    EXPECT_LT(bottleneck(rs.roots, comp) / scale, 1e-8);
  }
}

TEST(Quartic, NormalizedResidualDefinition) {
  const auto q = QuarticCoeffs::from_monic(1.0, 2.0, 3.0, 4.0);
  const cplx l{0.5, -0.25};
  const double expect = std::abs(q.eval(l)) / ((1.0 + 4.0) * std::pow(1.0 + std::abs(l), 4));
  EXPECT_NEAR(normalized_residual(q, l), expect, 1e-15);
}

TEST(Branches, TrackingUndoesPermutation) {
  RootSet prev;
  prev.roots = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
  RootSet next;
  next.roots = {prev.roots[2] + 1e-3, prev.roots[0] - 1e-3, prev.roots[3], prev.roots[1]};
  next.residuals = {0.1, 0.2, 0.3, 0.4};
  const RootSet t = track_branches(prev, next);
  for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(t.roots[k] - prev.roots[k]), 2e-3);
  // Residuals travel with their roots.
  EXPECT_EQ(t.residuals[0], 0.2);
  EXPECT_EQ(t.residuals[2], 0.1);
  const auto perm = optimal_pairing(prev.roots, next.roots);
  EXPECT_EQ(perm, (std::array<int, 4>{1, 3, 0, 2}));
  EXPECT_NEAR(pairing_distance(prev.roots, next.roots), 1e-3, 1e-15);
}
