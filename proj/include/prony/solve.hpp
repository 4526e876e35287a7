#pragma once

#include <prony/moments.hpp>
#include <prony/roots.hpp>
#include <prony/types.hpp>

#include <sstream>

namespace prony {

namespace detail {

struct SingularValues {
  Vector sigma;
  double max() const { return sigma.size() ? sigma[0] : 0.0; }
  double min() const { return sigma.size() ? sigma[sigma.size() - 1] : 0.0; }
  double condition() const {
    return (sigma.size() && min() > 0.0) ? max() / min()
                                         : std::numeric_limits<double>::infinity();
  }
};

inline SingularValues singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return {svd.singularValues()};
}

inline int numerical_rank(const SingularValues& sv, double rel_threshold) {
  const double cut = rel_threshold * sv.max();
  int r = 0;
  for (int i = 0; i < sv.sigma.size(); ++i)
    if (sv.sigma[i] > cut) ++r;
  return r;
}

}  // namespace detail

/// Denominator of the moment problem: solves M_d(mu) c = -(m_d,...,m_{2d-1})
/// for the low coefficients of a monic degree-d polynomial, via column-pivoted
/// QR.  Throws SingularHankel when the Hankel matrix is numerically singular
/// at the rank tolerance.
inline MonicPolynomial hankel_map(const Vector& mu, int d,
                                  const Tolerances& tol = {}) {
  if (static_cast<int>(mu.size()) < 2 * d)
    throw InvalidArgument("hankel_map: need 2d moments");
  const Matrix m = hankel_matrix(mu, d);
  const auto sv = detail::singular_values(m);
  if (sv.max() == 0.0 || sv.min() <= rank_factor(d, tol) * sv.max()) {
    std::ostringstream msg;
    msg << "hankel_map: singular Hankel matrix (condition " << sv.condition()
        << ")";
    throw SingularHankel(msg.str());
  }
  MonicPolynomial q;
  q.low = m.colPivHouseholderQr().solve(-mu.segment(d, d).eval());
  return q;
}

struct AmplitudeFit {
  Vector values;
  double residual = 0.0;  // max-norm of V a - mu
};

struct ComplexAmplitudeFit {
  ComplexVector values;
  double residual = 0.0;
};

namespace detail {

inline void check_separation(double min_gap, double scale,
                             const Tolerances& tol) {
  if (min_gap < tol.vandermonde * (1.0 + scale))
    throw NearDegenerateVandermonde(
        "amplitudes_from_nodes: node separation " + std::to_string(min_gap) +
        " below tolerance");
}

}  // namespace detail

/// Least-squares amplitudes for known real nodes: minimizes the residual of
/// the full 2d x d Vandermonde system V a = mu, V(k,j) = x_j^k.
inline AmplitudeFit amplitudes_from_nodes(const Vector& mu,
                                          const Vector& nodes,
                                          const Tolerances& tol = {}) {
  const int d = static_cast<int>(nodes.size());
  const int n = static_cast<int>(mu.size());
  if (n < d) throw InvalidArgument("amplitudes_from_nodes: need >= d moments");
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      min_gap = std::min(min_gap, std::abs(nodes[i] - nodes[j]));
  if (d > 1)
    detail::check_separation(min_gap, nodes.cwiseAbs().maxCoeff(), tol);

  Matrix v(n, d);
  Vector p = Vector::Ones(d);
  for (int k = 0; k < n; ++k) {
    v.row(k) = p;
    p = p.cwiseProduct(nodes);
  }
  AmplitudeFit fit;
  fit.values = v.colPivHouseholderQr().solve(mu);
  fit.residual = (v * fit.values - mu).cwiseAbs().maxCoeff();
  return fit;
}

/// Complex-node overload; mu stays real, amplitudes may come out complex.
inline ComplexAmplitudeFit amplitudes_from_nodes(const Vector& mu,
                                                 const ComplexVector& nodes,
                                                 const Tolerances& tol = {}) {
  const int d = static_cast<int>(nodes.size());
  const int n = static_cast<int>(mu.size());
  if (n < d) throw InvalidArgument("amplitudes_from_nodes: need >= d moments");
  double min_gap = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (int i = 0; i < d; ++i) {
    scale = std::max(scale, std::abs(nodes[i]));
    for (int j = i + 1; j < d; ++j)
      min_gap = std::min(min_gap, std::abs(nodes[i] - nodes[j]));
  }
  if (d > 1) detail::check_separation(min_gap, scale, tol);

  ComplexMatrix v(n, d);
  ComplexVector p = ComplexVector::Ones(d);
  for (int k = 0; k < n; ++k) {
    v.row(k) = p;
    p = p.cwiseProduct(nodes);
  }
  ComplexAmplitudeFit fit;
  fit.values = v.colPivHouseholderQr().solve(mu.cast<Complex>().eval());
  fit.residual =
      (v * fit.values - mu.cast<Complex>()).cwiseAbs().maxCoeff();
  return fit;
}

/// Full solve pipeline for a length-2d moment vector:
///   1. numerical rank r of the d x (d+1) extended Hankel matrix;
///   2. solvability test on the leading r x r minor;
///   3. full-rank path: denominator solve, roots, amplitude fit, with the
///      real/complex split decided by the root classification tolerance;
///   4. deficient path: reduced r-spike solve against all 2d moments.
inline SolveOutcome prony_solve(const Vector& mu, int d,
                                const Tolerances& tol = {}) {
  if (d < 1) throw InvalidArgument("prony_solve: d must be positive");
  if (static_cast<int>(mu.size()) != 2 * d)
    throw InvalidArgument("prony_solve: moment vector must have length 2d");

  SolveOutcome out;
  const auto ext_sv = detail::singular_values(extended_hankel_matrix(mu, d));
  const int r = detail::numerical_rank(ext_sv, rank_factor(d, tol));
  out.rank = r;

  if (r == 0) {
    // zero moment vector: the empty signal reproduces it
    out.result = RankDeficient{0, SpikeSignal{Vector(0), Vector(0)}};
    out.condition = 1.0;
    out.residual = mu.cwiseAbs().maxCoeff();
    return out;
  }

  const auto minor_sv = detail::singular_values(hankel_matrix(mu, r));
  if (minor_sv.max() == 0.0 ||
      minor_sv.min() <= rank_factor(d, tol) * minor_sv.max()) {
    std::ostringstream msg;
    msg << "leading " << r << "x" << r << " minor singular (condition "
        << minor_sv.condition() << ") with extended rank " << r;
    out.result = Unsolvable{msg.str()};
    out.condition = minor_sv.condition();
    return out;
  }
  out.condition = minor_sv.condition();

  // Reduced or full denominator system over the first 2r moments.
  MonicPolynomial q;
  q.low = hankel_matrix(mu, r)
              .colPivHouseholderQr()
              .solve(-mu.segment(r, r).eval());
  const ComplexRootSet roots = polynomial_roots(q);

  bool all_real = true;
  for (int i = 0; i < r; ++i)
    all_real = all_real && nearly_real(roots.roots[i], tol.real);

  if (all_real) {
    Vector x(r);
    for (int i = 0; i < r; ++i) x[i] = roots.roots[i].real();
    std::sort(x.data(), x.data() + r);
    const AmplitudeFit fit = amplitudes_from_nodes(mu, x, tol);
    SpikeSignal signal{fit.values, x};
    out.residual = fit.residual;
    if (r == d)
      out.result = RealSolution{signal.canonical()};
    else
      out.result = RankDeficient{r, signal.canonical()};
    return out;
  }

  if (r == d) {
    const ComplexAmplitudeFit fit = amplitudes_from_nodes(mu, roots.roots, tol);
    out.residual = fit.residual;
    out.result = ComplexSolution{fit.values, roots.roots};
    return out;
  }

  // Deficient and genuinely complex: no real reduced representative.
  out.result = RankDeficient{r, std::nullopt};
  return out;
}

}  // namespace prony
