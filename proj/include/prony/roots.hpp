#pragma once

#include <prony/types.hpp>

#include <cmath>

namespace prony {

namespace detail {

/// Parlett-Reinsch balancing: diagonal similarity with powers of two that
/// equalizes row/column norms.  Exact in floating point, so it changes the
/// eigenvalue problem's conditioning but not its spectrum.
inline void balance_in_place(Matrix& a) {
  const int n = static_cast<int>(a.rows());
  const double radix = 2.0;
  bool done = false;
  int guard = 0;
  while (!done && guard++ < 100) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        r += std::abs(a(i, j));
        c += std::abs(a(j, i));
      }
      if (r == 0.0 || c == 0.0) continue;
      const double s = r + c;
      double f = 1.0;
      while (c < r / radix) {
        c *= radix;
        r /= radix;
        f *= radix;
      }
      while (c >= r * radix) {
        c /= radix;
        r *= radix;
        f /= radix;
      }
      if ((r + c) < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

/// Residual scale for a root estimate: sum |c_i| |z|^i + |z|^d.
inline double residual_scale(const MonicPolynomial& q, Complex z) {
  const double az = std::abs(z);
  double p = 1.0, s = 0.0;
  for (int i = 0; i < q.degree(); ++i) {
    s += std::abs(q.low[i]) * p;
    p *= az;
  }
  return s + p;
}

}  // namespace detail

/// All d complex roots of a monic polynomial via the balanced companion
/// matrix, each polished by a few Newton steps.  Output is sorted by
/// (real part, imaginary part) so equal inputs give bitwise equal outputs.
///
/// Throws NonConvergence if the eigensolver fails or a refined root still has
/// relative residual above 1e-6.
inline ComplexRootSet polynomial_roots(const MonicPolynomial& q) {
  const int d = q.degree();
  ComplexRootSet out;
  if (d == 0) return out;

  std::vector<Complex> roots;
  roots.reserve(d);
  if (d == 1) {
    roots.push_back(Complex(-q.low[0], 0.0));
  } else {
    Matrix companion = Matrix::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) companion(i + 1, i) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -q.low[i];
    detail::balance_in_place(companion);
    Eigen::EigenSolver<Matrix> es(companion, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
      throw NonConvergence("polynomial_roots: companion eigensolver failed");
    for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()[i]);
  }

  // Newton polish; keep the iterate with the smallest residual.
  for (Complex& z : roots) {
    Complex best = z;
    double best_abs = std::abs(q.evaluate(best));
    Complex cur = z;
    for (int it = 0; it < 8; ++it) {
      const Complex fp = q.derivative_at(cur);
      if (std::abs(fp) == 0.0) break;
      cur -= q.evaluate(cur) / fp;
      const double a = std::abs(q.evaluate(cur));
      if (a < best_abs) {
        best_abs = a;
        best = cur;
      } else {
        break;
      }
    }
    z = best;
  }

  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  double max_res = 0.0, max_rel = 0.0;
  for (Complex z : roots) {
    const double r = std::abs(q.evaluate(z));
    max_res = std::max(max_res, r);
    max_rel = std::max(max_rel, r / detail::residual_scale(q, z));
  }
  if (max_rel > 1e-6)
    throw NonConvergence("polynomial_roots: residual " + std::to_string(max_rel) +
                         " above tolerance after refinement");

  out.roots.resize(d);
  for (int i = 0; i < d; ++i) out.roots[i] = roots[i];
  out.max_residual = max_res;
  return out;
}

}  // namespace prony
