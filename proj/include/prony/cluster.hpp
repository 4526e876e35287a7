#pragma once

#include <prony/moments.hpp>
#include <prony/types.hpp>

#include <cmath>

namespace prony {

/// Geometry of the node cluster: half-spread h and center kappa.  A single
/// node (or fully collided cluster) has h = 0 and cannot be normalized.
struct ClusterGeometry {
  double h = 0.0;
  double kappa = 0.0;

  bool degenerate() const { return h == 0.0; }

  /// Effective model resolution after recentering, h' = h / (1 + |kappa|).
  double reduced_h() const { return h / (1.0 + std::abs(kappa)); }

  /// Noise level surviving the transfer to model scale,
  /// eps' = (1 + |kappa|)^{-(2d-1)} eps.
  double reduced_epsilon(double eps, int d) const {
    return eps * std::pow(1.0 + std::abs(kappa), -(2 * d - 1));
  }
};

inline ClusterGeometry cluster_geometry(const SpikeSignal& f) {
  if (f.size() == 0) throw InvalidArgument("cluster_geometry: empty signal");
  const double lo = f.nodes.minCoeff();
  const double hi = f.nodes.maxCoeff();
  return ClusterGeometry{0.5 * (hi - lo), 0.5 * (hi + lo)};
}

struct NormalizedSignal {
  SpikeSignal model;  // nodes rescaled to span [-1, 1], amplitudes unchanged
  ClusterGeometry geometry;
};

/// Affine change of node coordinates pinning the cluster to [-1, 1]:
/// x_bar = (x - kappa) / h.  Amplitudes are untouched; node order is kept.
inline NormalizedSignal normalize(const SpikeSignal& f) {
  const ClusterGeometry geo = cluster_geometry(f);
  if (geo.degenerate())
    throw DegenerateCluster("normalize: cluster has zero spread");
  NormalizedSignal out;
  out.geometry = geo;
  out.model.amplitudes = f.amplitudes;
  out.model.nodes = (f.nodes.array() - geo.kappa) / geo.h;
  return out;
}

inline SpikeSignal denormalize(const SpikeSignal& model,
                               const ClusterGeometry& geo) {
  if (geo.degenerate())
    throw DegenerateCluster("denormalize: cluster has zero spread");
  SpikeSignal f;
  f.amplitudes = model.amplitudes;
  f.nodes = model.nodes.array() * geo.h + geo.kappa;
  return f;
}

/// Same coordinate change applied to a different signal: (x - kappa) / h.
/// Inverse of denormalize with the same geometry.
inline SpikeSignal to_model_scale(const SpikeSignal& f,
                                  const ClusterGeometry& geo) {
  if (geo.degenerate())
    throw DegenerateCluster("to_model_scale: cluster has zero spread");
  SpikeSignal g;
  g.amplitudes = f.amplitudes;
  g.nodes = (f.nodes.array() - geo.kappa) / geo.h;
  return g;
}

/// Moments of the normalized signal, invariant under any common shift and
/// positive rescaling of the nodes.
inline Vector model_moments(const SpikeSignal& f, int count) {
  return moments(normalize(f).model, count);
}

/// Admissibility window for model signals: neighboring nodes at least eta
/// apart inside [-1, 1], amplitude magnitudes within [m_lo, m_hi].
struct RegularityParams {
  double eta = 0.5;
  double m_lo = 0.5;
  double m_hi = 2.0;

  void validate(int d) const {
    if (d < 1) throw InvalidArgument("RegularityParams: need d >= 1");
    if (!(eta > 0.0)) throw InvalidArgument("RegularityParams: eta must be positive");
    if (d > 1 && eta > 2.0 / (d - 1))
      throw InvalidArgument("RegularityParams: eta exceeds 2/(d-1)");
    if (!(m_lo > 0.0) || !(m_lo < m_hi))
      throw InvalidArgument("RegularityParams: need 0 < m_lo < m_hi");
  }
};

/// Checks a signal already living on the model scale.  The interval test
/// carries a 1e-12 slack so nodes mapped onto +-1 by normalize cannot fall
/// outside through rounding alone.
inline bool is_regular(const SpikeSignal& g, const RegularityParams& params) {
  const int d = static_cast<int>(g.size());
  params.validate(d);
  const double slack = 1e-12;
  if (g.nodes.minCoeff() < -1.0 - slack || g.nodes.maxCoeff() > 1.0 + slack)
    return false;
  const SpikeSignal sorted = g.canonical();
  for (int j = 0; j + 1 < d; ++j)
    if (sorted.nodes[j + 1] - sorted.nodes[j] < params.eta) return false;
  for (int j = 0; j < d; ++j) {
    const double a = std::abs(g.amplitudes[j]);
    if (a < params.m_lo || a > params.m_hi) return false;
  }
  return true;
}

/// Checks whether the signal's cluster normalizes to a regular model signal.
inline bool is_regular_cluster(const SpikeSignal& f,
                               const RegularityParams& params) {
  params.validate(static_cast<int>(f.size()));
  if (f.size() == 1) {
    const double a = std::abs(f.amplitudes[0]);
    return a >= params.m_lo && a <= params.m_hi;
  }
  const ClusterGeometry geo = cluster_geometry(f);
  if (geo.degenerate()) return false;
  return is_regular(normalize(f).model, params);
}

}  // namespace prony
