#pragma once

#include <prony/cluster.hpp>
#include <prony/parallel.hpp>
#include <prony/rng.hpp>
#include <prony/solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace prony {

// -------------------------------------------------------------------------
// Distances.
// -------------------------------------------------------------------------

inline double moment_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw InvalidArgument("moment_distance: length mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

namespace detail {

struct SignalDeviation {
  double amplitudes = 0.0;
  double nodes = 0.0;
  double joint() const { return std::max(amplitudes, nodes); }
};

/// Deviation in canonical (node-sorted) order, max norm per block.
inline SignalDeviation signal_deviation(const SpikeSignal& a,
                                        const SpikeSignal& b) {
  if (a.size() != b.size())
    throw InvalidArgument("signal_deviation: size mismatch");
  const SpikeSignal ca = a.canonical();
  const SpikeSignal cb = b.canonical();
  SignalDeviation dev;
  dev.amplitudes = (ca.amplitudes - cb.amplitudes).cwiseAbs().maxCoeff();
  dev.nodes = (ca.nodes - cb.nodes).cwiseAbs().maxCoeff();
  return dev;
}

}  // namespace detail

/// Max-norm distance between signals of equal size, nodes sorted first.
inline double signal_distance(const SpikeSignal& a, const SpikeSignal& b) {
  return detail::signal_deviation(a, b).joint();
}

/// Moment metric between two d-spike signals: max difference over their
/// first 2d moments.
inline double moment_metric(const SpikeSignal& a, const SpikeSignal& b) {
  if (a.size() != b.size())
    throw InvalidArgument("moment_metric: signals must have equal size");
  const int count = 2 * a.size();
  return moment_distance(moments(a, count), moments(b, count));
}

/// Conservative admissibility test for the worst-case error bounds: the
/// noise level must not exceed factor * h'^{2d-1} with h' the reduced
/// cluster spread.  Degenerate clusters (h = 0) admit no positive noise.
inline bool in_noise_regime(const SpikeSignal& f, double eps,
                            double factor = 0.1) {
  if (eps <= 0.0 || factor <= 0.0)
    throw InvalidArgument("in_noise_regime: eps and factor must be positive");
  const ClusterGeometry geom = cluster_geometry(f);
  const int d = f.size();
  return eps <= factor * std::pow(geom.reduced_h(), 2 * d - 1);
}

// -------------------------------------------------------------------------
// Anisotropic moment boxes on the model scale.
// -------------------------------------------------------------------------

/// Closed parallelepiped membership: |m_k(G') - m_k(G)| <= eps alpha^k for
/// k = 0..2d-1.  Boundary points belong to the box.
inline bool pi_membership(const SpikeSignal& g_prime, const SpikeSignal& g,
                          double eps, double alpha) {
  if (!(eps > 0.0) || !(alpha > 0.0))
    throw InvalidArgument("pi_membership: eps and alpha must be positive");
  const int count = 2 * static_cast<int>(g.size());
  const Vector mp = moments(g_prime, count);
  const Vector m = moments(g, count);
  double bound = eps;
  for (int k = 0; k < count; ++k) {
    if (std::abs(mp[k] - m[k]) > bound) return false;
    bound *= alpha;
  }
  return true;
}

// -------------------------------------------------------------------------
// Sampling the measurement-error set.
// -------------------------------------------------------------------------

struct ErrorSamples {
  double eps = 0.0;
  std::uint64_t seed = 0;
  long long n_requested = 0;
  long long n_discarded = 0;  // complex, rank-deficient or failed solves
  std::vector<SpikeSignal> signals;
};

namespace detail {

/// Relative comparison slack for error-set membership.  Solved signals land
/// on their defining moment vector only up to the solver's accuracy, which on
/// corner samples of tight clusters reaches a few 1e-6 of eps.
inline constexpr double membership_slack = 1e-5;

/// Absolute comparison floor covering float evaluation of the moments
/// themselves, which is invisible to any eps-relative threshold when the
/// moments are large and eps is tiny.
inline double comparison_floor(const Vector& mu) {
  return 512.0 * std::numeric_limits<double>::epsilon() *
         std::max(1.0, mu.cwiseAbs().maxCoeff());
}

/// Moment perturbation for stream index i: the first 2^{2d} indices enumerate
/// the corners of the eps-box, after that faces and interior points alternate.
inline Vector error_box_offset(long long i, int d, double eps,
                               std::uint64_t seed, long long corner_count) {
  const int count = 2 * d;
  Vector delta(count);
  if (i < corner_count) {
    for (int k = 0; k < count; ++k)
      delta[k] = ((i >> k) & 1) ? eps : -eps;
    return delta;
  }
  SplitMix64 g = sample_stream(seed, static_cast<std::uint64_t>(i));
  if (i % 2 == 1) {  // face: one coordinate pinned to the boundary
    const int j = static_cast<int>(g.below(static_cast<std::uint64_t>(count)));
    for (int k = 0; k < count; ++k) delta[k] = g.symmetric(eps);
    delta[j] = g.sign() * eps;
  } else {  // interior
    for (int k = 0; k < count; ++k) delta[k] = g.symmetric(eps);
  }
  return delta;
}

}  // namespace detail

/// Draws n moment vectors from the closed eps-box around the signal's
/// moments (all corners first when n allows, then faces and interior points)
/// and keeps the perturbations that solve to a real d-spike signal whose own
/// moments lie in the box.  The second condition discards solves that were
/// classified real but drifted off their defining moment vector; membership
/// is compared with relative slack membership_slack.
inline ErrorSamples sample_error_set(const SpikeSignal& f, double eps,
                                     long long n, std::uint64_t seed,
                                     const Tolerances& tol = {}) {
  if (!(eps > 0.0)) throw InvalidArgument("sample_error_set: eps must be positive");
  const int d = static_cast<int>(f.size());
  if (d < 1 || d > 12) throw InvalidArgument("sample_error_set: need 1 <= d <= 12");
  ErrorSamples out;
  out.eps = eps;
  out.seed = seed;
  out.n_requested = n;
  if (n <= 0) return out;

  const Vector mu = moments(f, 2 * d);
  const double keep_limit = eps * (1.0 + detail::membership_slack);
  const long long corner_count =
      std::min<long long>(n, 1LL << (2 * d));
  std::vector<std::optional<SpikeSignal>> slots(n);
  parallel_for(static_cast<int>(n), [&](long long i) {
    const Vector delta =
        detail::error_box_offset(i, d, eps, seed, corner_count);
    try {
      const SolveOutcome outcome = prony_solve(mu + delta, d, tol);
      if (!outcome.is_real()) return;
      const SpikeSignal candidate = outcome.signal();
      if (moment_distance(moments(candidate, 2 * d), mu) <= keep_limit)
        slots[i] = candidate;
    } catch (const std::runtime_error&) {
      // kept empty: counted as discarded below
    }
  });
  for (auto& slot : slots) {
    if (slot)
      out.signals.push_back(std::move(*slot));
    else
      ++out.n_discarded;
  }
  return out;
}

// -------------------------------------------------------------------------
// Two-sided box bounds on the model-scale error set.
// -------------------------------------------------------------------------

struct SandwichCounts {
  long long outer_violations = 0;  // samples escaping the enclosing box
  long long inner_violations = 0;  // inner-box probes escaping the error set
  long long probes_checked = 0;
  long long probes_discarded = 0;
};

/// Checks the two box bounds around the model-scale error set: every sample
/// of the eps error set must land inside the box with level eps and growth
/// 1/h' (h' = h/(1+|kappa|)), and every probe signal landing inside the box
/// with level eps' = (1+|kappa|)^{-(2d-1)} eps and growth 1/h must map back
/// into the eps error set.  Both counts are 0 when the bounds hold.
/// Membership decisions are made from each signal's own recomputed moments:
/// samples that are not verifiable members of the eps error set carry no
/// evidence and are skipped, and inner probes count only when the solved
/// probe signal itself sits in the inner box.
inline SandwichCounts sandwich_check(const SpikeSignal& f, double eps,
                                     const std::vector<SpikeSignal>& samples,
                                     long long probe_count = 512,
                                     std::uint64_t seed = 1,
                                     const Tolerances& tol = {}) {
  if (!(eps > 0.0)) throw InvalidArgument("sandwich_check: eps must be positive");
  const int d = static_cast<int>(f.size());
  const NormalizedSignal norm = normalize(f);
  const ClusterGeometry& geo = norm.geometry;
  const SpikeSignal& g = norm.model;

  SandwichCounts counts;
  const Vector mu = moments(f, 2 * d);
  const Vector mbar = moments(g, 2 * d);
  const double floor0 = detail::comparison_floor(mu);
  const double member_limit = eps * (1.0 + detail::membership_slack);
  const double alpha_outer = 1.0 / geo.reduced_h();
  for (const SpikeSignal& sample : samples) {
    if (moment_distance(moments(sample, 2 * d), mu) > member_limit) continue;
    const SpikeSignal gp = to_model_scale(sample, geo);
    const Vector mp = moments(gp, 2 * d);
    double level = eps * (1.0 + 2.0 * detail::membership_slack);
    double floor_k = floor0;
    bool inside = true;
    for (int k = 0; k < 2 * d; ++k) {
      if (std::abs(mp[k] - mbar[k]) > level + floor_k) {
        inside = false;
        break;
      }
      level *= alpha_outer;
      floor_k *= alpha_outer;
    }
    if (!inside) ++counts.outer_violations;
  }

  const double eps_inner = geo.reduced_epsilon(eps, d);
  const double alpha_inner = 1.0 / geo.h;
  const long long corner_count =
      std::min<long long>(probe_count, 1LL << (2 * d));
  std::vector<int> verdicts(std::max<long long>(probe_count, 0), -1);
  parallel_for(static_cast<int>(probe_count), [&](long long j) {
    SplitMix64 s = sample_stream(seed, static_cast<std::uint64_t>(j));
    Vector target = mbar;
    double scale = eps_inner;
    for (int k = 0; k < 2 * d; ++k) {
      const double u = j < corner_count
                           ? (((j >> k) & 1) ? 0.95 : -0.95)
                           : s.symmetric(0.95);
      target[k] += u * scale;
      scale *= alpha_inner;
    }
    try {
      const SolveOutcome outcome = prony_solve(target, d, tol);
      if (!outcome.is_real()) return;
      const SpikeSignal gp = outcome.signal();
      const Vector mp = moments(gp, 2 * d);
      double level = eps_inner;
      for (int k = 0; k < 2 * d; ++k) {
        if (std::abs(mp[k] - mbar[k]) > level) return;  // drifted off the box
        level *= alpha_inner;
      }
      const SpikeSignal back = denormalize(gp, geo);
      const Vector mu_back = moments(back, 2 * d);
      verdicts[j] =
          moment_distance(mu_back, mu) <= eps * (1.0 + 1e-9) + floor0 ? 1 : 0;
    } catch (const std::runtime_error&) {
      // unsolvable probe target: not a signal in the inner box
    }
  });
  for (int v : verdicts) {
    if (v < 0) {
      ++counts.probes_discarded;
    } else {
      ++counts.probes_checked;
      if (v == 0) ++counts.inner_violations;
    }
  }
  return counts;
}

struct EquivalenceCounts {
  long long inside_checked = 0;
  long long inside_mismatches = 0;  // inner probes leaving the error set
  long long outside_checked = 0;
  long long outside_mismatches = 0;  // outer probes landing in the error set
};

/// For a centered cluster (kappa = 0) the model-scale error set IS the box
/// with level eps and growth 1/h.  Probe targets are drawn strictly inside
/// (scale 0.95) and strictly outside (one coordinate pushed to 1.05..1.30 of
/// its box extent); each real solve yields a probe signal, and membership is
/// decided twice from that signal's own moments: on the model scale against
/// the box, and on the original scale against the eps level.  The two
/// verdicts must agree.  Probes that are not real-solvable or that land
/// within a 1e-6 relative band of either boundary are discarded.
inline EquivalenceCounts model_box_equivalence(const SpikeSignal& f,
                                               double eps, long long n,
                                               std::uint64_t seed,
                                               const Tolerances& tol = {}) {
  const int d = static_cast<int>(f.size());
  const NormalizedSignal norm = normalize(f);
  const ClusterGeometry& geo = norm.geometry;
  if (std::abs(geo.kappa) > 1e-9 * std::max(1.0, geo.h))
    throw InvalidArgument("model_box_equivalence: cluster must be centered");
  const Vector mu = moments(f, 2 * d);
  const Vector mbar = moments(norm.model, 2 * d);
  const double alpha = 1.0 / geo.h;
  const double band = 1e-6;

  // verdict encodes (landed inside box) * 2 + (verdicts agree)
  std::vector<int> verdicts(std::max<long long>(n, 0), -1);
  parallel_for(static_cast<int>(n), [&](long long i) {
    SplitMix64 s = sample_stream(seed, static_cast<std::uint64_t>(i));
    const bool aim_inside = i % 2 == 0;
    const int pushed =
        aim_inside ? -1
                   : static_cast<int>(s.below(static_cast<std::uint64_t>(2 * d)));
    Vector target = mbar;
    double scale = eps;
    for (int k = 0; k < 2 * d; ++k) {
      double u = s.symmetric(0.95);
      if (k == pushed) u = s.sign() * (1.05 + 0.25 * s.uniform01());
      target[k] += u * scale;
      scale *= alpha;
    }
    try {
      const SolveOutcome outcome = prony_solve(target, d, tol);
      if (!outcome.is_real()) return;
      const SpikeSignal gp = outcome.signal();
      const Vector mp = moments(gp, 2 * d);
      double box_margin = 0.0;
      double level = eps;
      for (int k = 0; k < 2 * d; ++k) {
        box_margin = std::max(box_margin, std::abs(mp[k] - mbar[k]) / level);
        level *= alpha;
      }
      const SpikeSignal back = denormalize(gp, geo);
      const double eps_margin =
          moment_distance(moments(back, 2 * d), mu) / eps;
      if (std::abs(box_margin - 1.0) <= band ||
          std::abs(eps_margin - 1.0) <= band)
        return;  // boundary cases are numerically ambiguous
      const bool in_box = box_margin < 1.0;
      const bool in_error_set = eps_margin < 1.0;
      verdicts[i] = (in_box ? 2 : 0) + (in_box == in_error_set ? 1 : 0);
    } catch (const std::runtime_error&) {
    }
  });
  EquivalenceCounts counts;
  for (long long i = 0; i < n; ++i) {
    if (verdicts[i] < 0) continue;
    const bool in_box = verdicts[i] >= 2;
    auto& checked = in_box ? counts.inside_checked : counts.outside_checked;
    auto& mismatched =
        in_box ? counts.inside_mismatches : counts.outside_mismatches;
    ++checked;
    if (verdicts[i] % 2 == 0) ++mismatched;
  }
  return counts;
}

// -------------------------------------------------------------------------
// Worst-case reconstruction error over the error set.
// -------------------------------------------------------------------------

struct ErrorScanReport {
  double epsilon = 0.0;
  double h = 0.0;
  long long n_samples = 0;
  long long n_discarded = 0;
  std::uint64_t seed = 0;
  double rho = 0.0;    // max joint deviation
  double rho_A = 0.0;  // max amplitude deviation
  double rho_X = 0.0;  // max node deviation
  long long sandwich_inner_violations = 0;
  long long sandwich_outer_violations = 0;
  std::vector<int> delta_q_values;
  std::vector<double> delta_q_max_distance;
};

namespace detail {

struct AscentState {
  Vector delta;
  double value = -std::numeric_limits<double>::infinity();
};

}  // namespace detail

/// Estimates the worst-case reconstruction deviations rho (joint), rho_A
/// (amplitudes) and rho_X (nodes) over the eps error set: box sampling plus
/// coordinate ascent in moment space started from the 5 worst samples per
/// objective, with steps clipped to the box.  All three maxima are tracked
/// over every solve the search performs.
inline ErrorScanReport worst_case_errors(const SpikeSignal& f, double eps,
                                         long long n, std::uint64_t seed,
                                         const Tolerances& tol = {}) {
  if (n < 1) throw InvalidArgument("worst_case_errors: need n >= 1");
  const int d = static_cast<int>(f.size());
  const SpikeSignal base = f.canonical();
  const Vector mu = moments(f, 2 * d);
  const ClusterGeometry geo = cluster_geometry(f);

  ErrorScanReport report;
  report.epsilon = eps;
  report.h = geo.h;
  report.seed = seed;
  report.n_samples = n;

  const ErrorSamples samples = sample_error_set(f, eps, n, seed, tol);
  report.n_discarded = samples.n_discarded;

  const auto deviation = [&](const SpikeSignal& candidate) {
    return detail::signal_deviation(candidate, base);
  };
  const auto track = [&](const detail::SignalDeviation& dev) {
    report.rho = std::max(report.rho, dev.joint());
    report.rho_A = std::max(report.rho_A, dev.amplitudes);
    report.rho_X = std::max(report.rho_X, dev.nodes);
  };

  // objective 0: joint, 1: amplitudes, 2: nodes
  const auto objective = [](const detail::SignalDeviation& dev, int which) {
    return which == 0 ? dev.joint()
                      : (which == 1 ? dev.amplitudes : dev.nodes);
  };

  std::array<std::vector<detail::AscentState>, 3> tops;
  for (std::size_t i = 0; i < samples.signals.size(); ++i) {
    const detail::SignalDeviation dev = deviation(samples.signals[i]);
    track(dev);
    Vector delta = moments(samples.signals[i], 2 * d) - mu;
    for (int k = 0; k < 2 * d; ++k)
      delta[k] = std::clamp(delta[k], -eps, eps);
    for (int which = 0; which < 3; ++which) {
      auto& list = tops[which];
      list.push_back({delta, objective(dev, which)});
      std::sort(list.begin(), list.end(),
                [](const auto& a, const auto& b) { return a.value > b.value; });
      if (list.size() > 5) list.pop_back();
    }
  }

  const double keep_limit = eps * (1.0 + detail::membership_slack);
  const auto evaluate = [&](const Vector& delta)
      -> std::optional<detail::SignalDeviation> {
    try {
      const SolveOutcome outcome = prony_solve(mu + delta, d, tol);
      if (!outcome.is_real()) return std::nullopt;
      const SpikeSignal candidate = outcome.signal();
      // a solve that drifted off its moment vector is not an error-set point
      if (moment_distance(moments(candidate, 2 * d), mu) > keep_limit)
        return std::nullopt;
      const detail::SignalDeviation dev = deviation(candidate);
      track(dev);
      return dev;
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
  };

  for (int which = 0; which < 3; ++which) {
    for (const detail::AscentState& start : tops[which]) {
      Vector delta = start.delta;
      double best = start.value;
      double step = eps / 4.0;
      int evals = 0;
      while (step >= eps * 5e-3 && evals < 3000) {
        bool improved = false;
        for (int k = 0; k < 2 * d && evals < 3000; ++k) {
          for (double dir : {+1.0, -1.0}) {
            Vector trial = delta;
            trial[k] = std::clamp(trial[k] + dir * step, -eps, eps);
            if (trial[k] == delta[k]) continue;
            ++evals;
            const auto dev = evaluate(trial);
            if (dev && objective(*dev, which) > best) {
              best = objective(*dev, which);
              delta = trial;
              improved = true;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
    }
  }

  if (d >= 2 && !geo.degenerate()) {
    const SandwichCounts counts =
        sandwich_check(f, eps, samples.signals, 256, seed ^ 0x5ca1ab1eULL, tol);
    report.sandwich_inner_violations = counts.inner_violations;
    report.sandwich_outer_violations = counts.outer_violations;
  }
  return report;
}

// -------------------------------------------------------------------------
// Concentration near truncated varieties.
// -------------------------------------------------------------------------

/// Maximum (over the given error-set samples) of the model-scale distance to
/// the part of the variety through the model signal's first q+1 moments whose
/// free trailing moments range over the box with level eps and growth 1/h'.
/// The variety part is covered by a grid over the free moments; each sample
/// distance is tightened by a pattern search within the box.
inline double delta_q_concentration(const SpikeSignal& f, double eps,
                                    const std::vector<SpikeSignal>& samples,
                                    int q, const Tolerances& tol = {}) {
  const int d = static_cast<int>(f.size());
  if (q < d || q > 2 * d - 1)
    throw InvalidArgument("delta_q_concentration: need d <= q <= 2d-1");
  const NormalizedSignal norm = normalize(f);
  const ClusterGeometry& geo = norm.geometry;
  const SpikeSignal& g = norm.model;
  const Vector mbar = moments(g, 2 * d);
  const int free_dims = 2 * d - 1 - q;

  Vector width(free_dims);
  {
    double scale = eps * std::pow(1.0 / geo.reduced_h(), q + 1);
    for (int j = 0; j < free_dims; ++j) {
      width[j] = scale;
      scale /= geo.reduced_h();
    }
  }

  const auto solve_free = [&](const Vector& free)
      -> std::optional<SpikeSignal> {
    Vector target = mbar;
    for (int j = 0; j < free_dims; ++j) target[q + 1 + j] = free[j];
    try {
      const SolveOutcome outcome = prony_solve(target, d, tol);
      if (outcome.is_real()) return outcome.signal();
    } catch (const std::runtime_error&) {
    }
    return std::nullopt;
  };

  const int per_dim = free_dims <= 1 ? 41 : (free_dims == 2 ? 15 : 9);
  long long grid_total = 1;
  for (int j = 0; j < free_dims; ++j) grid_total *= per_dim;

  std::vector<std::pair<Vector, SpikeSignal>> variety;
  for (long long cell = 0; cell < grid_total; ++cell) {
    Vector free(free_dims);
    long long rest = cell;
    for (int j = 0; j < free_dims; ++j) {
      const int idx = static_cast<int>(rest % per_dim);
      rest /= per_dim;
      const double frac = per_dim == 1 ? 0.0 : 2.0 * idx / (per_dim - 1) - 1.0;
      free[j] = mbar[q + 1 + j] + frac * width[j];
    }
    if (auto point = solve_free(free))
      variety.emplace_back(std::move(free), std::move(*point));
  }
  if (variety.empty())
    throw NoFeasiblePoint("delta_q_concentration: variety box has no real points");

  std::vector<double> distances(samples.size(), 0.0);
  parallel_for(static_cast<int>(samples.size()), [&](long long i) {
    const SpikeSignal gp = to_model_scale(samples[i], geo);
    double best = std::numeric_limits<double>::infinity();
    Vector best_free = variety.front().first;
    for (const auto& [free, point] : variety) {
      const double dist = signal_distance(gp, point);
      if (dist < best) {
        best = dist;
        best_free = free;
      }
    }
    // pattern search over the free moments, clipped to the box
    if (free_dims > 0) {
      Vector step = width / std::max(1, per_dim - 1);
      for (int round = 0; round < 40; ++round) {
        bool improved = false;
        for (int j = 0; j < free_dims; ++j) {
          for (double dir : {+1.0, -1.0}) {
            Vector trial = best_free;
            trial[j] = std::clamp(trial[j] + dir * step[j],
                                  mbar[q + 1 + j] - width[j],
                                  mbar[q + 1 + j] + width[j]);
            if (trial[j] == best_free[j]) continue;
            if (auto point = solve_free(trial)) {
              const double dist = signal_distance(gp, *point);
              if (dist < best) {
                best = dist;
                best_free = trial;
                improved = true;
              }
            }
          }
        }
        if (!improved) {
          step *= 0.5;
          if (step.maxCoeff() < 1e-3 * width.maxCoeff() / per_dim) break;
        }
      }
    }
    distances[i] = best;
  });
  double max_distance = 0.0;
  for (double dist : distances) max_distance = std::max(max_distance, dist);
  return max_distance;
}

// -------------------------------------------------------------------------
// Worst-case scaling in the cluster size.
// -------------------------------------------------------------------------

struct ScalingRow {
  double h = 0.0;
  double eps = 0.0;
  double rho = 0.0;
  double rho_A = 0.0;
  double rho_X = 0.0;
};

struct ScalingResult {
  int d = 0;
  double p = 0.0;  // eps = h^p
  std::vector<ScalingRow> rows;
  double slope_rho = 0.0;
  double slope_A = 0.0;
  double slope_X = 0.0;
};

/// Equispaced unit-amplitude cluster of spread h around the origin.
inline SpikeSignal symmetric_cluster_signal(int d, double h) {
  if (d < 1) throw InvalidArgument("symmetric_cluster_signal: need d >= 1");
  SpikeSignal f;
  f.amplitudes = Vector::Ones(d);
  f.nodes = Vector::Zero(d);
  for (int j = 0; j < d && d > 1; ++j)
    f.nodes[j] = h * (2.0 * j / (d - 1) - 1.0);
  return f;
}

namespace detail {

inline double least_squares_slope(const std::vector<double>& xs,
                                  const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

}  // namespace detail

/// Runs worst_case_errors on the symmetric cluster family at every h in the
/// list with eps = h^p and identical per-index sample streams, then fits the
/// slopes of log(rho) - log(eps) against log(1/h).  For well-separated orders
/// the expected slopes are 2d-2 for rho_X and 2d-1 for rho_A and rho.
inline ScalingResult scaling_experiment(int d, const std::vector<double>& h_list,
                                        double p, long long n,
                                        std::uint64_t seed,
                                        const Tolerances& tol = {}) {
  if (h_list.size() < 4)
    throw InvalidArgument("scaling_experiment: need at least 4 cluster sizes");
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0.0))
      throw InvalidArgument("scaling_experiment: cluster sizes must be positive");
    if (i > 0 && h_list[i] >= h_list[i - 1])
      throw InvalidArgument("scaling_experiment: cluster sizes must decrease");
  }
  if (p < 2 * d - 1)
    throw InvalidArgument("scaling_experiment: noise exponent below 2d-1");

  ScalingResult result;
  result.d = d;
  result.p = p;
  std::vector<double> xs, y_rho, y_A, y_X;
  for (double h : h_list) {
    const SpikeSignal f = symmetric_cluster_signal(d, h);
    const double eps = std::pow(h, p);
    const ErrorScanReport report = worst_case_errors(f, eps, n, seed, tol);
    result.rows.push_back({h, eps, report.rho, report.rho_A, report.rho_X});
    xs.push_back(std::log(1.0 / h));
    y_rho.push_back(std::log(report.rho) - std::log(eps));
    y_A.push_back(std::log(report.rho_A) - std::log(eps));
    y_X.push_back(std::log(report.rho_X) - std::log(eps));
  }
  result.slope_rho = detail::least_squares_slope(xs, y_rho);
  result.slope_A = detail::least_squares_slope(xs, y_A);
  result.slope_X = detail::least_squares_slope(xs, y_X);
  return result;
}

}  // namespace prony
