#pragma once

#include <prony/hyperbolic.hpp>
#include <prony/moments.hpp>
#include <prony/solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace prony {

// -------------------------------------------------------------------------
// Linear systems cutting moment-constrained families of denominators.
// -------------------------------------------------------------------------

/// Constraint rows on a monic degree-d polynomial imposed by fixing the
/// moments m_0..m_q of any signal it annihilates:
///
///     sum_{i=1..d} mu_{k-i} u_i = -mu_k        for k = d..q,
///
/// where u_i multiplies z^{d-i}.  With q = 2d-1 this is the full denominator
/// system; for d <= q < 2d-1 the solution set has dimension 2d-1-q.
struct LinearVarietySystem {
  int d = 0;
  int q = 0;
  Matrix rows;  // (q-d+1) x d, entry (k-d, i-1) = mu_{k-i}
  Vector rhs;   // -(mu_d, ..., mu_q)

  /// Variety-indexed unknowns of a monic polynomial: u_i = low[d-i].
  Vector unknowns_from_polynomial(const MonicPolynomial& p) const {
    Vector u(d);
    for (int i = 1; i <= d; ++i) u[i - 1] = p.low[d - i];
    return u;
  }

  MonicPolynomial polynomial_from_unknowns(const Vector& u) const {
    MonicPolynomial p;
    p.low.resize(d);
    for (int i = 1; i <= d; ++i) p.low[d - i] = u[i - 1];
    return p;
  }

  double residual(const MonicPolynomial& p) const {
    if (rows.rows() == 0) return 0.0;
    return (rows * unknowns_from_polynomial(p) - rhs).cwiseAbs().maxCoeff();
  }

  /// Residual of the polynomial with the given roots (coefficients by vieta).
  double residual_for_nodes(const Vector& nodes) const {
    return residual(vieta(nodes));
  }
};

inline LinearVarietySystem variety_linear_system(const Vector& mu, int d,
                                                 int q) {
  if (q < d || q > 2 * d - 1)
    throw InvalidArgument("variety_linear_system: need d <= q <= 2d-1");
  if (static_cast<int>(mu.size()) < q + 1)
    throw InvalidArgument("variety_linear_system: need q+1 moments");
  LinearVarietySystem sys;
  sys.d = d;
  sys.q = q;
  sys.rows.resize(q - d + 1, d);
  sys.rhs.resize(q - d + 1);
  for (int k = d; k <= q; ++k) {
    for (int i = 1; i <= d; ++i) sys.rows(k - d, i - 1) = mu[k - i];
    sys.rhs[k - d] = -mu[k];
  }
  return sys;
}

/// Denominator at one point of the (2d-1-q)-parameter family: the first q+1
/// moments come from `mu`, the remaining ones from `free_moments`.
inline MonicPolynomial sample_variety(const Vector& mu, int d, int q,
                                      const Vector& free_moments,
                                      const Tolerances& tol = {}) {
  if (static_cast<int>(free_moments.size()) != 2 * d - 1 - q)
    throw InvalidArgument("sample_variety: need 2d-1-q free moments");
  Vector full(2 * d);
  full.head(q + 1) = mu.head(q + 1);
  full.tail(2 * d - 1 - q) = free_moments;
  return hankel_map(full, d, tol);
}

// -------------------------------------------------------------------------
// The one-parameter family over a fixed 2d-1 moment prefix.
// -------------------------------------------------------------------------

/// Affine line of denominators c(t) = slope * t + intercept obtained by
/// letting the last moment t = m_{2d-1} run while m_0..m_{2d-2} stay fixed.
/// The Hankel matrix depends only on the fixed prefix, hence is constant in t.
struct PronyCurve {
  int d = 0;
  Vector mu_tilde;  // the 2d-1 fixed moments
  Vector intercept;  // low coefficients at t = 0
  Vector slope;      // derivative of the low coefficients in t

  MonicPolynomial at(double t) const {
    MonicPolynomial p;
    p.low = intercept + t * slope;
    return p;
  }

  /// Length-2d moment vector of the curve point with last moment t.
  Vector full_moments(double t) const {
    Vector mu(2 * d);
    mu.head(2 * d - 1) = mu_tilde;
    mu[2 * d - 1] = t;
    return mu;
  }
};

/// Builds the curve by two solves against the same (constant) Hankel matrix:
/// the intercept from the RHS with the last moment zeroed, the slope from the
/// RHS with only a unit last moment.  An interpolation self-check at three t
/// values guards against assembly mistakes.
inline PronyCurve prony_curve(const Vector& mu_tilde, int d,
                              const Tolerances& tol = {}) {
  if (static_cast<int>(mu_tilde.size()) != 2 * d - 1)
    throw InvalidArgument("prony_curve: need exactly 2d-1 moments");
  const Matrix m = hankel_matrix(mu_tilde, d);
  const auto sv = detail::singular_values(m);
  if (sv.max() == 0.0 || sv.min() <= rank_factor(d, tol) * sv.max())
    throw SingularHankel("prony_curve: Hankel matrix of the fixed prefix is singular");
  const auto qr = m.colPivHouseholderQr();

  Vector rhs0 = Vector::Zero(d);
  for (int i = 0; i + 1 < d; ++i) rhs0[i] = -mu_tilde[d + i];
  Vector rhs1 = Vector::Zero(d);
  rhs1[d - 1] = -1.0;

  PronyCurve curve;
  curve.d = d;
  curve.mu_tilde = mu_tilde;
  curve.intercept = qr.solve(rhs0);
  curve.slope = qr.solve(rhs1);

  const double scale =
      1.0 + curve.intercept.cwiseAbs().maxCoeff() +
      curve.slope.cwiseAbs().maxCoeff();
  const double budget = 1e-10 + 1e-12 * sv.condition();
  for (double t : {0.0, 1.0, -1.0}) {
    const MonicPolynomial direct = hankel_map(curve.full_moments(t), d, tol);
    const double err =
        (direct.low - curve.at(t).low).cwiseAbs().maxCoeff() / scale;
    if (err > budget)
      throw NonConvergence("prony_curve: affine interpolation check failed");
  }
  return curve;
}

// -------------------------------------------------------------------------
// Tracing and scenario diagnostics along the curve.
// -------------------------------------------------------------------------

struct CurveSample {
  double t = 0.0;
  MonicPolynomial poly;
  bool hyperbolic = false;
  bool on_boundary = false;
  bool amplitudes_defined = false;
  Vector nodes;       // sorted; only when hyperbolic
  Vector amplitudes;  // aligned with nodes
  double min_gap = std::numeric_limits<double>::infinity();
  double max_abs_amplitude = 0.0;
  double moment_residual = 0.0;
};

struct BoundaryCrossing {
  double t_star = 0.0;   // refined discriminant root
  double t_lo = 0.0;     // bracketing grid points
  double t_hi = 0.0;
  bool hyperbolic_below = false;  // verdict at the t < t_star side
  bool hyperbolic_above = false;
};

struct CurveTrace {
  PronyCurve curve;
  std::vector<CurveSample> samples;
  std::vector<BoundaryCrossing> crossings;
};

namespace detail {

inline CurveSample evaluate_curve_point(const PronyCurve& curve, double t,
                                        const Tolerances& tol) {
  CurveSample s;
  s.t = t;
  s.poly = curve.at(t);
  const HyperbolicityReport rep = hyperbolicity(s.poly, tol);
  s.hyperbolic = rep.hyperbolic;
  s.on_boundary = rep.on_boundary;
  if (!s.hyperbolic) return s;
  const ComplexRootSet roots = polynomial_roots(s.poly);
  const int d = curve.d;
  s.nodes.resize(d);
  for (int i = 0; i < d; ++i) s.nodes[i] = roots.roots[i].real();
  std::sort(s.nodes.data(), s.nodes.data() + d);
  for (int i = 0; i + 1 < d; ++i)
    s.min_gap = std::min(s.min_gap, s.nodes[i + 1] - s.nodes[i]);
  try {
    const AmplitudeFit fit =
        amplitudes_from_nodes(curve.full_moments(t), s.nodes, tol);
    s.amplitudes = fit.values;
    s.amplitudes_defined = true;
    s.moment_residual = fit.residual;
    s.max_abs_amplitude = s.amplitudes.cwiseAbs().maxCoeff();
  } catch (const NearDegenerateVandermonde&) {
    // node collision at this exact t: leave amplitudes undefined
  }
  return s;
}

}  // namespace detail

/// Uniform scan of the curve over [t_min, t_max].  Each sample carries the
/// denominator, the hyperbolicity classification, and (on the hyperbolic
/// part) nodes, amplitudes, the minimal node gap and the largest |amplitude|.
/// Sign changes of the discriminant between neighbouring samples are refined
/// to boundary crossings by bisection (80 steps or 1e-9 relative width).
inline CurveTrace trace_curve(const PronyCurve& curve, double t_min,
                              double t_max, int steps,
                              const Tolerances& tol = {}) {
  if (steps < 2) throw InvalidArgument("trace_curve: need at least 2 steps");
  if (!(t_min < t_max)) throw InvalidArgument("trace_curve: empty range");
  CurveTrace trace;
  trace.curve = curve;
  trace.samples.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = t_min + (t_max - t_min) * i / (steps - 1);
    trace.samples.push_back(detail::evaluate_curve_point(curve, t, tol));
  }
  const auto disc = [&](double t) { return discriminant(curve.at(t)); };
  for (int i = 0; i + 1 < steps; ++i) {
    double lo = trace.samples[i].t, hi = trace.samples[i + 1].t;
    double flo = disc(lo), fhi = disc(hi);
    if (flo == 0.0 || flo * fhi > 0.0) continue;
    BoundaryCrossing crossing;
    crossing.t_lo = lo;
    crossing.t_hi = hi;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = disc(mid);
      if (fmid == 0.0) {
        lo = hi = mid;
        break;
      }
      if (flo * fmid < 0.0) {
        hi = mid;
        fhi = fmid;
      } else {
        lo = mid;
        flo = fmid;
      }
      if (hi - lo <= 1e-9 * (1.0 + std::abs(mid))) break;
    }
    crossing.t_star = 0.5 * (lo + hi);
    crossing.hyperbolic_below = trace.samples[i].hyperbolic;
    crossing.hyperbolic_above = trace.samples[i + 1].hyperbolic;
    trace.crossings.push_back(crossing);
  }
  return trace;
}

struct CollisionApproach {
  double t_star = 0.0;
  int side = 0;  // +1: approached from t > t_star, -1: from below
  std::vector<double> offsets;          // |t - t_star|, decreasing
  std::vector<double> gaps;             // colliding-pair node gap
  std::vector<double> pair_amplitudes;  // max |a| over the colliding pair
  bool amplitude_monotone = false;      // grows as the offset shrinks
};

struct EscapeCheck {
  double t = 0.0;
  bool checked = false;  // end sample was hyperbolic with amplitudes
  int escaping_index = -1;
  double escaping_magnitude = 0.0;
  double max_other_magnitude = 0.0;
  bool exactly_one = false;
  bool monotone_growth = false;  // extreme |node| grows toward the range end
};

struct CollisionReport {
  std::vector<CollisionApproach> approaches;
  std::vector<EscapeCheck> escapes;
};

struct CollisionThresholds {
  std::vector<double> offsets = {1e-2, 1e-4, 1e-6};
  double escaping_above = 1e2;  // |node| beyond this counts as escaped
  double bounded_below = 10.0;  // all other |node|s must stay under this
};

/// Scenario diagnostics for a traced curve: amplitude growth at each
/// hyperbolicity-boundary crossing (node collision), and the single-escaping-
/// node picture at the extreme |t| samples.
inline CollisionReport collision_diagnostics(
    const CurveTrace& trace, const CollisionThresholds& thresholds = {},
    const Tolerances& tol = {}) {
  CollisionReport report;
  const PronyCurve& curve = trace.curve;

  for (const BoundaryCrossing& crossing : trace.crossings) {
    for (int side : {-1, +1}) {
      const double probe =
          crossing.t_star + side * thresholds.offsets.front();
      if (!is_hyperbolic(curve.at(probe), tol)) continue;
      CollisionApproach approach;
      approach.t_star = crossing.t_star;
      approach.side = side;
      for (double offset : thresholds.offsets) {
        const CurveSample s = detail::evaluate_curve_point(
            curve, crossing.t_star + side * offset, tol);
        if (!s.hyperbolic || !s.amplitudes_defined) continue;
        // the colliding pair is the one realizing the minimal gap
        int pair = 0;
        for (int i = 0; i + 1 < s.nodes.size(); ++i)
          if (s.nodes[i + 1] - s.nodes[i] <
              s.nodes[pair + 1] - s.nodes[pair])
            pair = i;
        approach.offsets.push_back(offset);
        approach.gaps.push_back(s.min_gap);
        approach.pair_amplitudes.push_back(std::max(
            std::abs(s.amplitudes[pair]), std::abs(s.amplitudes[pair + 1])));
      }
      approach.amplitude_monotone = approach.pair_amplitudes.size() >= 2;
      for (std::size_t i = 0; i + 1 < approach.pair_amplitudes.size(); ++i)
        approach.amplitude_monotone =
            approach.amplitude_monotone &&
            approach.pair_amplitudes[i] < approach.pair_amplitudes[i + 1];
      report.approaches.push_back(std::move(approach));
    }
  }

  // Escape picture at both ends of the traced range.
  for (int end : {0, 1}) {
    const int n = static_cast<int>(trace.samples.size());
    const CurveSample& last = trace.samples[end == 0 ? 0 : n - 1];
    EscapeCheck check;
    check.t = last.t;
    if (last.hyperbolic && last.amplitudes_defined) {
      check.checked = true;
      Eigen::Index arg = 0;
      check.escaping_magnitude = last.nodes.cwiseAbs().maxCoeff(&arg);
      check.escaping_index = static_cast<int>(arg);
      check.max_other_magnitude = 0.0;
      for (int i = 0; i < last.nodes.size(); ++i)
        if (i != check.escaping_index)
          check.max_other_magnitude =
              std::max(check.max_other_magnitude, std::abs(last.nodes[i]));
      check.exactly_one =
          check.escaping_magnitude > thresholds.escaping_above &&
          check.max_other_magnitude < thresholds.bounded_below;
      // extreme-node growth over the outer quarter of the range
      check.monotone_growth = true;
      const int quarter = std::max(2, n / 4);
      double prev = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < quarter; ++k) {
        const int idx = end == 0 ? quarter - 1 - k : n - quarter + k;
        const CurveSample& s = trace.samples[idx];
        if (!s.hyperbolic) continue;
        const double extreme = s.nodes.cwiseAbs().maxCoeff();
        check.monotone_growth = check.monotone_growth && extreme >= prev;
        prev = extreme;
      }
    }
    report.escapes.push_back(check);
  }
  return report;
}

// -------------------------------------------------------------------------
// Denoising restricted to the curve.
// -------------------------------------------------------------------------

struct CurveSearchBox {
  std::optional<double> t_lo;  // explicit scan range overrides everything
  std::optional<double> t_hi;
  std::optional<double> epsilon;  // with h: scan half-width
  std::optional<double> h;        //   10 * eps * (1/h)^(2d-1) around t0
  std::optional<double> node_lo;  // feasibility box
  std::optional<double> node_hi;
  std::optional<double> amp_abs_max;
  int grid = 2001;
};

struct CurveEstimate {
  SpikeSignal signal;
  double t = 0.0;
  double residual = 0.0;  // max-norm against all 2d input moments
  PronyCurve curve;
};

namespace detail {

inline bool box_feasible(const CurveSample& s, const CurveSearchBox& box) {
  if (!s.hyperbolic || !s.amplitudes_defined) return false;
  if (box.node_lo && s.nodes.minCoeff() < *box.node_lo) return false;
  if (box.node_hi && s.nodes.maxCoeff() > *box.node_hi) return false;
  if (box.amp_abs_max && s.max_abs_amplitude > *box.amp_abs_max) return false;
  return true;
}

}  // namespace detail

/// Projection of a noisy length-2d moment vector onto the curve through its
/// own first 2d-1 moments: minimizes the max-norm moment mismatch over the
/// hyperbolic, box-feasible part of the curve by grid scan plus golden-section
/// refinement.  Throws NoFeasiblePoint when the scanned range contains no
/// admissible parameter.
inline CurveEstimate curve_restricted_estimate(const Vector& mu_noisy, int d,
                                               const CurveSearchBox& box = {},
                                               const Tolerances& tol = {}) {
  if (static_cast<int>(mu_noisy.size()) != 2 * d)
    throw InvalidArgument("curve_restricted_estimate: need 2d moments");
  CurveEstimate estimate;
  estimate.curve = prony_curve(mu_noisy.head(2 * d - 1), d, tol);
  const double t0 = mu_noisy[2 * d - 1];

  const auto objective = [&](double t) -> std::pair<double, CurveSample> {
    CurveSample s = detail::evaluate_curve_point(estimate.curve, t, tol);
    if (!detail::box_feasible(s, box))
      return {std::numeric_limits<double>::infinity(), s};
    const SpikeSignal f{s.amplitudes, s.nodes};
    const Vector m = moments(f, 2 * d);
    return {(m - mu_noisy).cwiseAbs().maxCoeff(), s};
  };

  double half_width;
  double center = t0;
  if (box.t_lo && box.t_hi) {
    center = 0.5 * (*box.t_lo + *box.t_hi);
    half_width = 0.5 * (*box.t_hi - *box.t_lo);
  } else if (box.epsilon && box.h) {
    half_width = 10.0 * *box.epsilon * std::pow(1.0 / *box.h, 2 * d - 1);
  } else {
    half_width = 1.0 + std::abs(t0);
  }
  const bool adaptive = !(box.t_lo && box.t_hi);

  for (int expansion = 0;; ++expansion) {
    const double lo = center - half_width, hi = center + half_width;
    double best = std::numeric_limits<double>::infinity();
    double best_t = t0;
    for (int i = 0; i < box.grid; ++i) {
      const double t = lo + (hi - lo) * i / (box.grid - 1);
      const double v = objective(t).first;
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    if (std::isfinite(best)) {
      const double spacing = (hi - lo) / (box.grid - 1);
      double a = best_t - spacing, b = best_t + spacing;
      const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
      double f1 = objective(x1).first, f2 = objective(x2).first;
      for (int it = 0; it < 60; ++it) {
        if (f1 <= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - golden * (b - a);
          f1 = objective(x1).first;
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + golden * (b - a);
          f2 = objective(x2).first;
        }
      }
      double candidate_t = 0.5 * (a + b);
      auto [value, sample] = objective(candidate_t);
      if (value > best) {  // golden drifted into an infeasible pocket
        candidate_t = best_t;
        std::tie(value, sample) = objective(best_t);
      }
      estimate.t = candidate_t;
      estimate.residual = value;
      estimate.signal = SpikeSignal{sample.amplitudes, sample.nodes};
      return estimate;
    }
    if (!adaptive || expansion >= 6)
      throw NoFeasiblePoint(
          "curve_restricted_estimate: no hyperbolic box-feasible parameter in range");
    half_width *= 4.0;
  }
}

}  // namespace prony
