#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace prony {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Moment sequence (m_0, m_1, ..., m_{k-1}); a d-spike problem uses k = 2d.
using MomentVector = Eigen::VectorXd;

// -------------------------------------------------------------------------
// Error taxonomy.  Every failure mode that callers are expected to catch has
// its own type; all derive from std::runtime_error.
// -------------------------------------------------------------------------

struct InvalidArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularHankel : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NearDegenerateVandermonde : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCluster : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoFeasiblePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotRealSolvable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GenericityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -------------------------------------------------------------------------
// Core value types.
// -------------------------------------------------------------------------

/// Linear combination of d point masses: F(x) = sum_j a_j * delta(x - x_j).
/// Canonical form keeps nodes sorted ascending, amplitudes riding along.
struct SpikeSignal {
  Vector amplitudes;
  Vector nodes;

  int size() const { return static_cast<int>(nodes.size()); }

  /// Sort nodes ascending, permuting amplitudes identically.
  SpikeSignal canonical() const {
    const int d = size();
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return nodes[a] < nodes[b]; });
    SpikeSignal out;
    out.amplitudes.resize(d);
    out.nodes.resize(d);
    for (int j = 0; j < d; ++j) {
      out.amplitudes[j] = amplitudes[idx[j]];
      out.nodes[j] = nodes[idx[j]];
    }
    return out;
  }
};

/// Monic polynomial z^d + c_{d-1} z^{d-1} + ... + c_0, stored by its d low
/// coefficients (c_0, ..., c_{d-1}); the leading 1 is implicit.
struct MonicPolynomial {
  Vector low;

  int degree() const { return static_cast<int>(low.size()); }

  /// All d+1 coefficients, low to high, last entry 1.
  Vector full_coefficients() const {
    Vector c(degree() + 1);
    c.head(degree()) = low;
    c[degree()] = 1.0;
    return c;
  }

  template <typename Scalar>
  Scalar evaluate(Scalar z) const {
    Scalar acc = Scalar(1);
    for (int i = degree() - 1; i >= 0; --i) acc = acc * z + Scalar(low[i]);
    return acc;
  }

  template <typename Scalar>
  Scalar derivative_at(Scalar z) const {
    const int d = degree();
    Scalar acc = Scalar(d);
    for (int i = d - 1; i >= 1; --i) acc = acc * z + Scalar(i) * Scalar(low[i]);
    return acc;
  }
};

/// Roots of a monic polynomial, sorted by (real part, imaginary part).
struct ComplexRootSet {
  ComplexVector roots;
  double max_residual = 0.0;  // max |Q(root)| over the set, absolute
};

// -------------------------------------------------------------------------
// Solve outcome: tagged union over the four ways a moment vector can relate
// to the d-spike model.
// -------------------------------------------------------------------------

struct RealSolution {
  SpikeSignal signal;
};

struct ComplexSolution {
  ComplexVector amplitudes;
  ComplexVector nodes;
};

struct RankDeficient {
  int rank = 0;
  std::optional<SpikeSignal> reduced;  // r-spike solution when it is real
};

struct Unsolvable {
  std::string diagnostic;
};

struct SolveOutcome {
  std::variant<RealSolution, ComplexSolution, RankDeficient, Unsolvable> result;

  int rank = 0;            // numerical rank of the extended Hankel matrix
  double condition = 0.0;  // condition estimate of the solved linear system
  double residual = 0.0;   // max-norm moment reproduction error of the output

  bool is_real() const { return std::holds_alternative<RealSolution>(result); }
  bool is_complex() const {
    return std::holds_alternative<ComplexSolution>(result);
  }
  bool is_rank_deficient() const {
    return std::holds_alternative<RankDeficient>(result);
  }
  bool is_unsolvable() const {
    return std::holds_alternative<Unsolvable>(result);
  }

  const SpikeSignal& signal() const {
    return std::get<RealSolution>(result).signal;
  }
};

// -------------------------------------------------------------------------
// Shared numeric knobs.
// -------------------------------------------------------------------------

/// Tolerances used across the solve pipeline.  rank <= 0 selects the default
/// threshold 2d * machine epsilon (relative to the largest singular value).
struct Tolerances {
  double rank = 0.0;
  double real = 1e-8;        // |Im z| <= real * (1 + |Re z|) counts as real
  double vandermonde = 1e-12;  // node separation guard, relative
};

inline double rank_factor(int d, const Tolerances& tol) {
  return tol.rank > 0.0
             ? tol.rank
             : 2.0 * d * std::numeric_limits<double>::epsilon();
}

inline bool nearly_real(Complex z, double tol_real) {
  return std::abs(z.imag()) <= tol_real * (1.0 + std::abs(z.real()));
}

}  // namespace prony
