#pragma once

#include <prony/types.hpp>

namespace prony {

/// Power moments m_k = sum_j a_j x_j^k for k = 0..count-1.
inline Vector moments(const SpikeSignal& f, int count) {
  const int d = f.size();
  Vector m = Vector::Zero(count);
  Vector p = Vector::Ones(d);
  for (int k = 0; k < count; ++k) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      s += f.amplitudes[j] * p[j];
      p[j] *= f.nodes[j];
    }
    m[k] = s;
  }
  return m;
}

/// Monic polynomial with the given roots: prod_j (z - x_j).
inline MonicPolynomial vieta(const Vector& nodes) {
  const int d = static_cast<int>(nodes.size());
  Vector c = Vector::Zero(d + 1);
  c[0] = 1.0;  // degree-0 product
  for (int j = 0; j < d; ++j) {
    // multiply the current polynomial by (z - nodes[j])
    for (int k = j + 1; k >= 1; --k) c[k] = c[k - 1] - nodes[j] * c[k];
    c[0] = -nodes[j] * c[0];
  }
  MonicPolynomial q;
  q.low = c.head(d);
  return q;
}

/// d x d Hankel matrix with entry (i,j) = m_{i+j}; consumes m_0..m_{2d-2}.
inline Matrix hankel_matrix(const Vector& mu, int d) {
  if (static_cast<int>(mu.size()) < 2 * d - 1)
    throw InvalidArgument("hankel_matrix: need at least 2d-1 moments");
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = mu[i + j];
  return m;
}

/// d x (d+1) extended Hankel matrix, entry (i,j) = m_{i+j}; consumes
/// m_0..m_{2d-1}.
inline Matrix extended_hankel_matrix(const Vector& mu, int d) {
  if (static_cast<int>(mu.size()) < 2 * d)
    throw InvalidArgument("extended_hankel_matrix: need at least 2d moments");
  Matrix m(d, d + 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= d; ++j) m(i, j) = mu[i + j];
  return m;
}

/// Truncated moment/denominator convolution b_k = m_0 c_k + ... + m_k c_0 for
/// k = 0..d-1 (the implicit leading coefficient of q never enters).
inline Vector pade_numerator(const Vector& mu, const MonicPolynomial& q) {
  const int d = q.degree();
  if (static_cast<int>(mu.size()) < d)
    throw InvalidArgument("pade_numerator: need at least d moments");
  Vector b = Vector::Zero(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i <= k; ++i) b[k] += mu[i] * q.low[k - i];
  return b;
}

}  // namespace prony
