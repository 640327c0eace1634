#pragma once

// Closed-form complex quartic roots via the resolvent cubic and Ferrari's
// factorization, with a companion-matrix eigenvalue oracle.

#include <array>
#include <complex>

#include "ddosc/model.hpp"

namespace ddosc {

enum class RootMethod { radicals, companion_fallback };

const char* to_string(RootMethod m) noexcept;

struct RootSet {
  std::array<cplx, 4> roots{};
  /// |P(l)| / ((1 + max coefficient modulus) (1 + |l|)^4) for each root.
  std::array<double, 4> residuals{};
  RootMethod method = RootMethod::radicals;

  double max_residual() const;
};

/// Root of the resolvent cubic and the factor constants of
/// y^4 + p y^2 + q y + r = (y^2 + a y + m)(y^2 - a y + n).
struct ResolventSolution {
  cplx z0, a, b, m, n;
};

/// Normalized residual used throughout: |P(l)| / ((1 + max|coef|) (1 + |l|)^4).
double normalized_residual(const QuarticCoeffs& qc, cplx lambda);

/// Roots of z^3 + c2 z^2 + c1 z + c0 by Cardano's construction.
std::array<cplx, 3> solve_cubic(cplx c2, cplx c1, cplx c0);

/// Resolvent root with the largest |2 z0 - p| and the derived factor constants.
/// Requires q != 0 (otherwise a may vanish and b is undefined).
ResolventSolution resolvent(cplx p, cplx q, cplx r);

RootSet solve_depressed_quartic(cplx p, cplx q, cplx r);

/// Roots l_k = y_k - A/4 with residuals measured against the original quartic.
RootSet solve_quartic(const QuarticCoeffs& qc);

/// Eigenvalues of the 4x4 companion matrix. Throws NumericalError on non-convergence.
std::array<cplx, 4> companion_roots(cplx A, cplx B, cplx C, cplx D);

/// Reorders `next` so that sum_k |next_k - prev_k| is minimal over all 24 pairings.
RootSet track_branches(const RootSet& prev, const RootSet& next);

/// Permutation form of the same assignment: result[k] is the index into `next`
/// that is paired with prev[k].
std::array<int, 4> optimal_pairing(const std::array<cplx, 4>& prev,
                                   const std::array<cplx, 4>& next);

/// Largest |a_k - b_perm(k)| under the optimal pairing.
double pairing_distance(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b);

}  // namespace ddosc
