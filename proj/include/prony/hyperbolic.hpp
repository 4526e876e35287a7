#pragma once

#include <prony/roots.hpp>
#include <prony/types.hpp>

#include <cmath>
#include <vector>

namespace prony {

namespace detail {

// Dense polynomials for the Sturm machinery: coefficients low to high, the
// back entry is the (nonzero) leading coefficient.
using Poly = std::vector<double>;

inline double poly_max_norm(const Poly& p) {
  double m = 0.0;
  for (double c : p) m = std::max(m, std::abs(c));
  return m;
}

inline double poly_eval(const Poly& p, double x) {
  double acc = 0.0;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    acc = acc * x + p[i];
  return acc;
}

inline Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i)
    d[i - 1] = static_cast<double>(i) * p[i];
  return d;
}

/// Drop numerically-zero leading coefficients (relative to max-norm).
inline void poly_trim(Poly& p, double rel = 1e-12) {
  const double cut = rel * poly_max_norm(p);
  while (!p.empty() && std::abs(p.back()) <= cut) p.pop_back();
}

/// Remainder of a by b, classic long division in doubles.
inline Poly poly_remainder(Poly a, const Poly& b) {
  const int db = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    const double factor = a.back() / b.back();
    const int shift = static_cast<int>(a.size()) - 1 - db;
    for (int i = 0; i <= db; ++i) a[shift + i] -= factor * b[i];
    a.pop_back();
  }
  return a;
}

}  // namespace detail

/// Canonical Sturm chain p_0 = Q, p_1 = Q', p_{k+1} = -rem(p_{k-1}, p_k),
/// every element rescaled to unit max-norm (a positive factor, so sign
/// patterns are untouched).  A remainder whose max-norm falls below 1e-12 of
/// the working scale terminates the chain; the last element is then a
/// numerical gcd of (Q, Q').
inline std::vector<detail::Poly> sturm_chain(const MonicPolynomial& q) {
  using detail::Poly;
  const int d = q.degree();
  std::vector<Poly> chain;
  Poly p0(d + 1);
  for (int i = 0; i < d; ++i) p0[i] = q.low[i];
  p0[d] = 1.0;
  const double s0 = detail::poly_max_norm(p0);
  for (double& c : p0) c /= s0;
  chain.push_back(p0);
  if (d == 0) return chain;

  Poly p1 = detail::poly_derivative(p0);
  const double s1 = detail::poly_max_norm(p1);
  for (double& c : p1) c /= s1;
  chain.push_back(p1);

  while (chain.back().size() > 1) {
    Poly r = detail::poly_remainder(chain[chain.size() - 2], chain.back());
    detail::poly_trim(r);
    const double norm = detail::poly_max_norm(r);
    if (norm <= 1e-12) break;
    for (double& c : r) c = -c / norm;
    chain.push_back(std::move(r));
  }
  return chain;
}

namespace detail {

inline int sign_variations(const std::vector<Poly>& chain, double x) {
  int variations = 0;
  int prev = 0;
  for (const Poly& p : chain) {
    const double v = poly_eval(p, x);
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++variations;
    prev = s;
  }
  return variations;
}

}  // namespace detail

/// Number of distinct real roots of a monic polynomial, by Sturm sign
/// variations over (-B, B] with B past the Cauchy root bound.  Valid with
/// repeated roots: the canonical chain counts each distinct root once.
inline int sturm_distinct_real_roots(const MonicPolynomial& q) {
  if (q.degree() == 0) return 0;
  const auto chain = sturm_chain(q);
  const double bound = 2.0 + q.low.cwiseAbs().maxCoeff();
  return detail::sign_variations(chain, -bound) -
         detail::sign_variations(chain, bound);
}

/// Discriminant of a monic polynomial via the Sylvester resultant of (Q, Q').
inline double discriminant(const MonicPolynomial& q) {
  const int d = q.degree();
  if (d <= 1) return 1.0;
  const Vector c = q.full_coefficients();  // c[0..d], c[d] = 1
  Vector cp(d);                            // derivative coefficients
  for (int i = 1; i <= d; ++i) cp[i - 1] = i * c[i];
  const int n = 2 * d - 1;
  Matrix syl = Matrix::Zero(n, n);
  for (int row = 0; row < d - 1; ++row)      // d-1 shifted copies of Q
    for (int i = 0; i <= d; ++i) syl(row, row + i) = c[d - i];
  for (int row = 0; row < d; ++row)          // d shifted copies of Q'
    for (int i = 0; i < d; ++i) syl(d - 1 + row, row + i) = cp[d - 1 - i];
  const double res = syl.partialPivLu().determinant();
  const int sign_exp = (d * (d - 1) / 2) % 2;
  return sign_exp ? -res : res;
}

/// Discriminant scaled to a dimensionless magnitude: divided by
/// max(1, ||coefficients||_inf)^(2d-2).
inline double discriminant_relative(const MonicPolynomial& q) {
  const int d = q.degree();
  if (d <= 1) return 1.0;
  const double scale = std::max(1.0, q.low.cwiseAbs().maxCoeff());
  return discriminant(q) / std::pow(scale, 2 * d - 2);
}

struct HyperbolicityReport {
  bool hyperbolic = false;
  bool on_boundary = false;        // |relative discriminant| below 1e-10
  bool root_fallback_used = false; // verdict taken from explicit roots
  int distinct_real_roots = 0;
  double rel_discriminant = 0.0;
};

/// Are all roots of q real?  Generic inputs are decided by the Sturm count
/// (hyperbolic iff distinct real roots == degree - gcd degree, which handles
/// repeated roots).  Inputs within 1e-10 relative discriminant of the
/// multiple-root boundary switch to the explicit root classification with the
/// imaginary-part tolerance, and carry the on_boundary flag.
inline HyperbolicityReport hyperbolicity(const MonicPolynomial& q,
                                         const Tolerances& tol = {}) {
  constexpr double kBoundaryRelDisc = 1e-10;
  HyperbolicityReport rep;
  const int d = q.degree();
  rep.rel_discriminant = discriminant_relative(q);
  if (d <= 1) {
    rep.hyperbolic = true;
    rep.distinct_real_roots = d;
    return rep;
  }
  rep.on_boundary = std::abs(rep.rel_discriminant) < kBoundaryRelDisc;
  if (rep.on_boundary) {
    rep.root_fallback_used = true;
    const ComplexRootSet roots = polynomial_roots(q);
    bool all_real = true;
    for (int i = 0; i < d; ++i)
      all_real = all_real && nearly_real(roots.roots[i], tol.real);
    rep.hyperbolic = all_real;
    rep.distinct_real_roots = sturm_distinct_real_roots(q);
    return rep;
  }
  const auto chain = sturm_chain(q);
  const double bound = 2.0 + q.low.cwiseAbs().maxCoeff();
  rep.distinct_real_roots = detail::sign_variations(chain, -bound) -
                            detail::sign_variations(chain, bound);
  const int gcd_degree = static_cast<int>(chain.back().size()) - 1;
  rep.hyperbolic = rep.distinct_real_roots == d - gcd_degree;
  return rep;
}

inline bool is_hyperbolic(const MonicPolynomial& q, const Tolerances& tol = {}) {
  return hyperbolicity(q, tol).hyperbolic;
}

}  // namespace prony
