#include <catch2/catch_amalgamated.hpp>

#include <prony/moments.hpp>
#include <prony/rng.hpp>
#include <prony/solve.hpp>
#include <prony/varieties.hpp>

#include "test_support.hpp"

using namespace prony;
using testing::sig;
using testing::vec;

TEST_CASE("variety linear system has the expected rows") {
  SECTION("one row below the full system") {
    const auto sys = variety_linear_system(vec({2.0, 0.0, 0.5}), 2, 2);
    REQUIRE(sys.rows.rows() == 1);
    REQUIRE(sys.rows(0, 0) == 0.0);   // mu_1
    REQUIRE(sys.rows(0, 1) == 2.0);   // mu_0
    REQUIRE(sys.rhs[0] == -0.5);
  }
  SECTION("full system pins the denominator") {
    const auto sys = variety_linear_system(vec({2.0, 0.0, 0.5, 0.0}), 2, 3);
    REQUIRE(sys.rows.rows() == 2);
    const Vector u = sys.rows.colPivHouseholderQr().solve(sys.rhs);
    REQUIRE(u[0] == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(u[1] == Catch::Approx(-0.25).margin(1e-14));
    const MonicPolynomial p = sys.polynomial_from_unknowns(u);
    REQUIRE(p.low[0] == Catch::Approx(-0.25).margin(1e-14));
    REQUIRE(p.low[1] == Catch::Approx(0.0).margin(1e-14));
  }
  SECTION("argument validation") {
    REQUIRE_THROWS_AS(variety_linear_system(vec({1.0, 2.0}), 2, 1),
                      InvalidArgument);
    REQUIRE_THROWS_AS(variety_linear_system(vec({1.0, 2.0}), 2, 4),
                      InvalidArgument);
    REQUIRE_THROWS_AS(variety_linear_system(vec({1.0, 2.0}), 2, 3),
                      InvalidArgument);
  }
}

TEST_CASE("variety system unknown indexing round-trips") {
  const auto sys = variety_linear_system(vec({2.0, 0.0, 0.5, 0.0}), 2, 3);
  MonicPolynomial p;
  p.low = vec({-0.25, 0.75});
  const Vector u = sys.unknowns_from_polynomial(p);
  REQUIRE(u[0] == 0.75);   // multiplies z^{d-1}
  REQUIRE(u[1] == -0.25);  // multiplies z^0
  const MonicPolynomial back = sys.polynomial_from_unknowns(u);
  REQUIRE(back.low == p.low);
}

TEST_CASE("annihilators of matching signals satisfy the variety system") {
  SplitMix64 g(41);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(g.below(3));
    const int q = d + static_cast<int>(g.below(d));  // d..2d-1
    const SpikeSignal f = testing::random_signal(g, d, 0.1, 0.5, 2.0, true);
    const Vector mu = moments(f, 2 * d);
    const auto sys = variety_linear_system(mu, d, q);
    const double scale = 1.0 + mu.cwiseAbs().maxCoeff();
    REQUIRE(sys.residual_for_nodes(f.nodes) <= 1e-9 * scale);
    REQUIRE(sys.residual(vieta(f.nodes)) <= 1e-9 * scale);
  }
}

TEST_CASE("sampling the variety with true trailing moments matches the solver") {
  SplitMix64 g(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + static_cast<int>(g.below(3));
    const int q = d + static_cast<int>(g.below(d - 1));  // strictly below 2d-1
    const SpikeSignal f = testing::random_signal(g, d, 0.1, 0.5, 2.0, true);
    const Vector mu = moments(f, 2 * d);
    const Vector free = mu.tail(2 * d - 1 - q);
    const MonicPolynomial p = sample_variety(mu, d, q, free);
    const MonicPolynomial direct = hankel_map(mu, d);
    REQUIRE((p.low - direct.low).cwiseAbs().maxCoeff() <=
            1e-9 * (1.0 + direct.low.cwiseAbs().maxCoeff()));
  }
  REQUIRE_THROWS_AS(sample_variety(vec({2.0, 0.0, 0.5, 0.0}), 2, 2, vec({0.0, 1.0})),
                    InvalidArgument);
}

TEST_CASE("curve coefficients for a symmetric pair of unit spikes") {
  const PronyCurve curve = prony_curve(vec({2.0, 0.0, 0.5}), 2);
  REQUIRE(curve.intercept[0] == Catch::Approx(-0.25).margin(1e-14));
  REQUIRE(curve.intercept[1] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(curve.slope[0] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(curve.slope[1] == Catch::Approx(-2.0).margin(1e-14));

  const PronyCurve wide = prony_curve(vec({2.0, 0.0, 2.0}), 2);
  REQUIRE(wide.intercept[0] == Catch::Approx(-1.0).margin(1e-14));
  REQUIRE(wide.intercept[1] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(wide.slope[0] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(wide.slope[1] == Catch::Approx(-0.5).margin(1e-14));
  // spikes at +-1 with positive weights: real-solvable at every last moment
  for (double t : {-50.0, -1.0, 0.0, 0.3, 7.0, 200.0})
    REQUIRE(is_hyperbolic(wide.at(t)));

  REQUIRE_THROWS_AS(prony_curve(vec({2.0, 0.0}), 2), InvalidArgument);
  REQUIRE_THROWS_AS(prony_curve(vec({0.0, 0.0, 1.0}), 2), SingularHankel);
}

TEST_CASE("curve points agree with the full solve at every last moment") {
  SplitMix64 g(43);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + static_cast<int>(g.below(3));
    const SpikeSignal f = testing::random_signal(g, d, 0.1, 0.5, 2.0, true);
    const Vector mu = moments(f, 2 * d);
    const PronyCurve curve = prony_curve(mu.head(2 * d - 1), d);
    for (int k = 0; k < 4; ++k) {
      const double t = mu[2 * d - 1] + g.symmetric(2.0);
      const MonicPolynomial direct = hankel_map(curve.full_moments(t), d);
      const double scale = 1.0 + direct.low.cwiseAbs().maxCoeff();
      REQUIRE((curve.at(t).low - direct.low).cwiseAbs().maxCoeff() <=
              1e-10 * scale);
    }
    // the square Hankel matrix never involves the running moment
    const Matrix h0 = hankel_matrix(curve.full_moments(-3.0), d);
    const Matrix h1 = hankel_matrix(curve.full_moments(12.0), d);
    REQUIRE(h0 == h1);
  }
}

namespace {

// Curve through (1, -3, 1): denominator z^2 + (3+t)/8 z + (1+3t)/8, whose
// discriminant (t^2 - 90t - 23)/64 vanishes at t = (90 - sqrt(8192))/2.
const double kCollisionT = (90.0 - std::sqrt(8192.0)) / 2.0;

PronyCurve mixed_sign_pair_curve() {
  return prony_curve(vec({1.0, -3.0, 1.0}), 2);
}

}  // namespace

TEST_CASE("tracing detects the hyperbolicity boundary crossing") {
  const PronyCurve curve = mixed_sign_pair_curve();
  REQUIRE(curve.intercept[0] == Catch::Approx(0.125).margin(1e-12));
  REQUIRE(curve.intercept[1] == Catch::Approx(0.375).margin(1e-12));
  REQUIRE(curve.slope[0] == Catch::Approx(0.375).margin(1e-12));
  REQUIRE(curve.slope[1] == Catch::Approx(0.125).margin(1e-12));

  const CurveTrace trace = trace_curve(curve, -4.0, 1.0, 101);
  REQUIRE(trace.samples.size() == 101);
  REQUIRE(trace.crossings.size() == 1);
  const BoundaryCrossing& crossing = trace.crossings.front();
  REQUIRE(crossing.t_star == Catch::Approx(kCollisionT).margin(1e-6));
  REQUIRE(crossing.hyperbolic_below);
  REQUIRE_FALSE(crossing.hyperbolic_above);

  // the base point t = -3 lies on the hyperbolic side
  for (const CurveSample& s : trace.samples) {
    if (s.t < kCollisionT - 0.05) {
      REQUIRE(s.hyperbolic);
      REQUIRE(s.amplitudes_defined);
    }
    if (s.t > kCollisionT + 0.05) REQUIRE_FALSE(s.hyperbolic);
  }
}

TEST_CASE("amplitudes blow up like the inverse gap at a node collision") {
  const PronyCurve curve = mixed_sign_pair_curve();
  const CurveTrace trace = trace_curve(curve, -4.0, 1.0, 101);
  const CollisionReport report = collision_diagnostics(trace);

  REQUIRE(report.approaches.size() == 1);
  const CollisionApproach& approach = report.approaches.front();
  REQUIRE(approach.side == -1);  // only t < t_star is hyperbolic
  REQUIRE(approach.offsets.size() == 3);
  REQUIRE(approach.amplitude_monotone);
  // gap(delta) = sqrt(delta (90.5097 + delta) / 64) ~ 1.1892 sqrt(delta)
  REQUIRE(approach.gaps[0] == Catch::Approx(0.118927).margin(1e-3));
  REQUIRE(approach.gaps[1] == Catch::Approx(0.0118921).margin(1e-4));
  REQUIRE(approach.gaps[2] == Catch::Approx(0.00118921).margin(1e-5));
  // colliding-pair amplitude ~ 2.8284 / gap
  REQUIRE(approach.pair_amplitudes[0] == Catch::Approx(24.288).epsilon(0.01));
  REQUIRE(approach.pair_amplitudes[1] == Catch::Approx(238.35).epsilon(0.01));
  REQUIRE(approach.pair_amplitudes[2] == Catch::Approx(2378.9).epsilon(0.01));
  REQUIRE(approach.pair_amplitudes.back() > 1e3);
}

TEST_CASE("exactly one node escapes for large curve parameters") {
  const PronyCurve curve = mixed_sign_pair_curve();
  const CurveTrace trace = trace_curve(curve, -1000.0, -0.3, 200);
  REQUIRE(trace.crossings.empty());
  const CollisionReport report = collision_diagnostics(trace);
  REQUIRE(report.escapes.size() == 2);

  const EscapeCheck& far = report.escapes.front();  // t = -1000
  REQUIRE(far.checked);
  REQUIRE(far.exactly_one);
  REQUIRE(far.escaping_magnitude == Catch::Approx(127.56).epsilon(0.01));
  REQUIRE(far.max_other_magnitude == Catch::Approx(2.939).epsilon(0.01));
  REQUIRE(far.monotone_growth);

  const EscapeCheck& near_base = report.escapes.back();  // t = -0.3
  REQUIRE(near_base.checked);
  REQUIRE_FALSE(near_base.exactly_one);  // nothing escaped near the boundary
}

TEST_CASE("curve samples reproduce their own moments") {
  SplitMix64 g(44);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(g.below(2));
    const SpikeSignal f = testing::random_signal(g, d, 0.15, 0.5, 2.0, true);
    const Vector mu = moments(f, 2 * d);
    const PronyCurve curve = prony_curve(mu.head(2 * d - 1), d);
    const double base = mu[2 * d - 1];
    const CurveTrace trace = trace_curve(curve, base - 0.4, base + 0.4, 21);
    const double scale = 1.0 + mu.cwiseAbs().maxCoeff();
    for (const CurveSample& s : trace.samples) {
      if (!s.hyperbolic || !s.amplitudes_defined) continue;
      const SpikeSignal rec{s.amplitudes, s.nodes};
      const Vector m = moments(rec, 2 * d);
      REQUIRE((m.head(2 * d - 1) - mu.head(2 * d - 1)).cwiseAbs().maxCoeff() <=
              1e-6 * scale);
      REQUIRE(std::abs(m[2 * d - 1] - s.t) <= 1e-6 * scale);
    }
    // the center sample sits at the original signal
    const CurveSample& center = trace.samples[10];
    REQUIRE(center.hyperbolic);
    REQUIRE((center.nodes - f.nodes).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("curve-restricted estimation projects onto the curve") {
  SECTION("perturbed last moment is recovered") {
    const Vector noisy = vec({2.0, 0.0, 0.5, 0.02});
    const CurveEstimate est = curve_restricted_estimate(noisy, 2);
    REQUIRE(est.t == Catch::Approx(0.02).margin(1e-6));
    REQUIRE(est.residual <= 1e-7);
    REQUIRE(est.signal.nodes[0] == Catch::Approx(-0.48040).margin(1e-4));
    REQUIRE(est.signal.nodes[1] == Catch::Approx(0.52040).margin(1e-4));
  }
  SECTION("explicit range agrees with the adaptive default") {
    const Vector noisy = vec({2.0, 0.0, 0.5, 0.02});
    CurveSearchBox box;
    box.t_lo = -1.0;
    box.t_hi = 1.0;
    const CurveEstimate est = curve_restricted_estimate(noisy, 2, box);
    REQUIRE(est.t == Catch::Approx(0.02).margin(1e-6));
  }
  SECTION("no hyperbolic parameter in range") {
    CurveSearchBox box;
    box.t_lo = 0.0;
    box.t_hi = 50.0;  // strictly between the two discriminant roots
    REQUIRE_THROWS_AS(
        curve_restricted_estimate(vec({1.0, -3.0, 1.0, 20.0}), 2, box),
        NoFeasiblePoint);
  }
  SECTION("unsatisfiable node box") {
    CurveSearchBox box;
    box.node_lo = -0.4;
    box.node_hi = 0.6;  // the two constraints exclude each other on this curve
    REQUIRE_THROWS_AS(
        curve_restricted_estimate(vec({2.0, 0.0, 0.5, 0.02}), 2, box),
        NoFeasiblePoint);
  }
  SECTION("argument validation") {
    REQUIRE_THROWS_AS(curve_restricted_estimate(vec({1.0, 2.0, 3.0}), 2),
                      InvalidArgument);
  }
}
