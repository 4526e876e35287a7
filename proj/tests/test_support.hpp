#pragma once

#include <prony/rng.hpp>
#include <prony/types.hpp>

#include <initializer_list>

namespace prony::testing {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline SpikeSignal sig(std::initializer_list<double> a,
                       std::initializer_list<double> x) {
  return SpikeSignal{vec(a), vec(x)};
}

/// Random signal with nodes in [-1,1] separated by at least min_gap and
/// amplitude magnitudes in [amp_lo, amp_hi]; signs mixed when allow_negative.
inline SpikeSignal random_signal(SplitMix64& g, int d, double min_gap,
                                 double amp_lo, double amp_hi,
                                 bool allow_negative) {
  Vector x(d);
  for (;;) {
    for (int j = 0; j < d; ++j) x[j] = g.symmetric(1.0);
    std::sort(x.data(), x.data() + d);
    bool ok = true;
    for (int j = 0; j + 1 < d; ++j)
      ok = ok && (x[j + 1] - x[j] >= min_gap);
    if (ok) break;
  }
  Vector a(d);
  for (int j = 0; j < d; ++j) {
    a[j] = g.uniform(amp_lo, amp_hi);
    if (allow_negative && g.next() % 2 == 0) a[j] = -a[j];
  }
  return SpikeSignal{a, x};
}

}  // namespace prony::testing
