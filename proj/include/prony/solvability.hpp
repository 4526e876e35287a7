#pragma once

#include <prony/hyperbolic.hpp>
#include <prony/solve.hpp>

namespace prony {

struct SolvabilityVerdict {
  int rank = 0;                  // numerical rank of the extended Hankel
  bool minor_nonsingular = false;
  bool solvable = false;
  std::optional<bool> hyperbolic;     // set only when the full Hankel solves
  std::optional<bool> real_solvable;  // ditto
  double condition_estimate = 0.0;
};

/// Rank test for the d x (d+1) extended Hankel matrix plus the leading
/// principal minor test that decides whether a (possibly reduced) spike
/// representation exists.  `tol` is the relative singular-value cutoff for
/// the minor; pass 0 for the 2d*eps default.
inline SolvabilityVerdict solvable(const Vector& mu, int d,
                                   const Tolerances& tol = {}) {
  if (static_cast<int>(mu.size()) < 2 * d)
    throw InvalidArgument("solvable: need 2d moments");
  SolvabilityVerdict verdict;
  const auto ext_sv = detail::singular_values(extended_hankel_matrix(mu, d));
  verdict.rank = detail::numerical_rank(ext_sv, rank_factor(d, tol));
  if (verdict.rank == 0) {
    // zero moment vector; the empty signal solves it
    verdict.minor_nonsingular = true;
    verdict.solvable = true;
    verdict.condition_estimate = 1.0;
    return verdict;
  }
  const auto minor_sv =
      detail::singular_values(hankel_matrix(mu, verdict.rank));
  verdict.condition_estimate = minor_sv.condition();
  verdict.minor_nonsingular =
      minor_sv.max() > 0.0 &&
      minor_sv.min() > rank_factor(d, tol) * minor_sv.max();
  verdict.solvable = verdict.minor_nonsingular;
  return verdict;
}

/// Real solvability: with a nonsingular full Hankel matrix, the moment vector
/// has a real d-spike solution exactly when the denominator polynomial has
/// only real roots.  When the Hankel matrix is singular the hypothesis fails
/// and the optionals stay empty; the rank fields still report what was found.
inline SolvabilityVerdict real_solvable(const Vector& mu, int d,
                                        const Tolerances& tol = {}) {
  SolvabilityVerdict verdict = solvable(mu, d, tol);
  if (verdict.rank != d || !verdict.minor_nonsingular) return verdict;
  const MonicPolynomial q = hankel_map(mu, d, tol);
  const bool hyp = hyperbolicity(q, tol).hyperbolic;
  verdict.hyperbolic = hyp;
  verdict.real_solvable = hyp;
  return verdict;
}

/// Sylvester criterion on the d x d Hankel matrix: every leading principal
/// minor strictly positive.  Positive definiteness of the moment matrix is
/// the classical certificate that the sequence extends to a nonnegative
/// measure's moments.
inline bool hamburger_positive_definite(const Vector& mu, int d) {
  const Matrix m = hankel_matrix(mu, d);
  for (int k = 1; k <= d; ++k) {
    const double det = m.topLeftCorner(k, k).partialPivLu().determinant();
    if (!(det > 0.0)) return false;
  }
  return true;
}

}  // namespace prony
