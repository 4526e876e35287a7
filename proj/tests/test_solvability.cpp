#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

#include <prony/moments.hpp>
#include <prony/solvability.hpp>

using namespace prony;
using prony::testing::sig;
using prony::testing::vec;

TEST_CASE("solvable verdicts on pinned vectors") {
  const SolvabilityVerdict full = solvable(vec({2, 0, 0.5, 0}), 2);
  CHECK(full.rank == 2);
  CHECK(full.minor_nonsingular);
  CHECK(full.solvable);

  const SolvabilityVerdict deficient = solvable(vec({1, 1, 1, 1}), 2);
  CHECK(deficient.rank == 1);
  CHECK(deficient.minor_nonsingular);  // leading 1x1 minor is m_0 = 1
  CHECK(deficient.solvable);

  const SolvabilityVerdict infeasible = solvable(vec({0, 0, 0, 1}), 2);
  CHECK(infeasible.rank == 1);
  CHECK_FALSE(infeasible.minor_nonsingular);  // leading 1x1 minor is m_0 = 0
  CHECK_FALSE(infeasible.solvable);

  const SolvabilityVerdict zero = solvable(Vector::Zero(4), 2);
  CHECK(zero.rank == 0);
  CHECK(zero.solvable);
}

TEST_CASE("sturm distinct real root counts") {
  MonicPolynomial q;
  q.low = vec({-0.25, 0.0});  // z^2 - 0.25
  CHECK(sturm_distinct_real_roots(q) == 2);

  q.low = vec({0.25, 0.0});  // z^2 + 0.25
  CHECK(sturm_distinct_real_roots(q) == 0);

  q.low = vec({0.0, -1.0, 0.0});  // z^3 - z
  CHECK(sturm_distinct_real_roots(q) == 3);

  q.low = vec({1.0, -2.0});  // (z-1)^2
  CHECK(sturm_distinct_real_roots(q) == 1);

  q.low = vec({0.0, 0.0});  // z^2
  CHECK(sturm_distinct_real_roots(q) == 1);
}

TEST_CASE("hyperbolicity report") {
  MonicPolynomial q;
  q.low = vec({-0.25, 0.0});
  const auto real_pair = hyperbolicity(q);
  CHECK(real_pair.hyperbolic);
  CHECK_FALSE(real_pair.on_boundary);
  CHECK(real_pair.rel_discriminant == Catch::Approx(1.0));

  q.low = vec({0.25, 0.0});
  const auto complex_pair = hyperbolicity(q);
  CHECK_FALSE(complex_pair.hyperbolic);
  CHECK_FALSE(complex_pair.on_boundary);

  q.low = vec({0.0, 0.0});  // double root at 0: on the boundary
  const auto boundary = hyperbolicity(q);
  CHECK(boundary.hyperbolic);
  CHECK(boundary.on_boundary);
  CHECK(boundary.root_fallback_used);

  q.low = vec({1e-8, 0.0});  // z^2 + 1e-8: tiny complex pair, off boundary
  const auto tiny = hyperbolicity(q);
  CHECK_FALSE(tiny.hyperbolic);
}

TEST_CASE("sturm and root classification agree away from the boundary") {
  SplitMix64 g(555);
  for (int trial = 0; trial < 120; ++trial) {
    const int d = 2 + static_cast<int>(g.next() % 3);
    MonicPolynomial q;
    bool expect_real;
    if (g.next() % 2 == 0) {
      const SpikeSignal f =
          prony::testing::random_signal(g, d, 1e-3, 1.0, 1.0, false);
      q = vieta(f.nodes);
      expect_real = true;
    } else {
      // d-2 real nodes plus one comfortably complex pair
      Vector real_part(d - 2);
      for (int j = 0; j < d - 2; ++j) real_part[j] = g.symmetric(1.0);
      const double re = g.symmetric(1.0), im = 0.05 + g.uniform01();
      MonicPolynomial pair;
      pair.low = vec({re * re + im * im, -2 * re});
      Vector c = Vector::Zero(d + 1);
      const MonicPolynomial rest = vieta(real_part);
      const Vector rc = rest.full_coefficients();
      const Vector pc = pair.full_coefficients();
      for (int i = 0; i < rc.size(); ++i)
        for (int j = 0; j < 3; ++j) c[i + j] += rc[i] * pc[j];
      q.low = c.head(d);
      expect_real = false;
    }
    const ComplexRootSet roots = polynomial_roots(q);
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        min_gap = std::min(min_gap, std::abs(roots.roots[i] - roots.roots[j]));
    if (min_gap <= 1e-6) continue;  // property scoped to separated roots
    bool roots_real = true;
    for (int i = 0; i < d; ++i)
      roots_real = roots_real && nearly_real(roots.roots[i], 1e-8);
    const auto chain_verdict = hyperbolicity(q);
    CHECK(chain_verdict.hyperbolic == roots_real);
    CHECK(roots_real == expect_real);
  }
}

TEST_CASE("real solvability on pinned vectors") {
  const auto complex_case = real_solvable(vec({2, 0, -0.5, 0}), 2);
  REQUIRE(complex_case.real_solvable.has_value());
  CHECK_FALSE(*complex_case.real_solvable);
  CHECK(complex_case.solvable);  // solvable over C

  const SpikeSignal mixed = sig({1, -1}, {-0.3, 0.3});
  const auto mixed_case = real_solvable(moments(mixed, 4), 2);
  REQUIRE(mixed_case.real_solvable.has_value());
  CHECK(*mixed_case.real_solvable);

  // singular Hankel: hypothesis fails, optionals stay empty
  const auto singular = real_solvable(vec({1, 1, 1, 1}), 2);
  CHECK(singular.rank == 1);
  CHECK_FALSE(singular.hyperbolic.has_value());
  CHECK_FALSE(singular.real_solvable.has_value());
}

TEST_CASE("real solvability matches the solve classification") {
  SplitMix64 g(808);
  int reals = 0, complexes = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const int d = 2 + static_cast<int>(g.next() % 2);
    Vector mu;
    if (g.next() % 2 == 0) {
      const SpikeSignal f =
          prony::testing::random_signal(g, d, 0.15, 0.5, 2.0, true);
      mu = moments(f, 2 * d);
    } else {
      // conjugate-pair signal: real moments, complex nodes
      ComplexVector a(d), x(d);
      const double re = g.symmetric(0.8);
      const double im = 0.2 + 0.5 * g.uniform01();
      a[0] = Complex(g.uniform(0.5, 1.5), g.symmetric(0.5));
      a[1] = std::conj(a[0]);
      x[0] = Complex(re, im);
      x[1] = std::conj(x[0]);
      for (int j = 2; j < d; ++j) {
        a[j] = Complex(g.uniform(0.5, 1.5), 0.0);
        x[j] = Complex(g.symmetric(0.9) + 2.0, 0.0);  // well separated
      }
      mu = Vector(2 * d);
      for (int k = 0; k < 2 * d; ++k) {
        Complex s = 0.0;
        for (int j = 0; j < d; ++j) s += a[j] * std::pow(x[j], k);
        mu[k] = s.real();
      }
    }
    const auto verdict = real_solvable(mu, d);
    if (!verdict.real_solvable.has_value()) continue;
    const SolveOutcome out = prony_solve(mu, d);
    if (*verdict.real_solvable) {
      ++reals;
      CHECK(out.is_real());
    } else {
      ++complexes;
      CHECK(out.is_complex());
    }
  }
  CHECK(reals > 10);
  CHECK(complexes > 10);
}

TEST_CASE("hamburger positive definiteness") {
  CHECK(hamburger_positive_definite(vec({2, 0, 0.5, 0}), 2));
  CHECK_FALSE(hamburger_positive_definite(vec({1, 1, 1, 1}), 2));
  CHECK(hamburger_positive_definite(vec({6, 1, 1, 0.25, 0.25}), 3));

  SplitMix64 g(1001);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + static_cast<int>(g.next() % 4);
    const SpikeSignal f =
        prony::testing::random_signal(g, d, 0.1, 0.2, 2.0, false);
    CHECK(hamburger_positive_definite(moments(f, 2 * d), d));
  }
}
