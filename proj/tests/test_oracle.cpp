#include <catch2/catch_amalgamated.hpp>

#include "oracle.hpp"

#include <prony/moments.hpp>

using namespace prony;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

SpikeSignal sig(std::initializer_list<double> a, std::initializer_list<double> x) {
  return SpikeSignal{vec(a), vec(x)};
}

}  // namespace

TEST_CASE("series expansion of 1/z is the delta sequence") {
  MonicPolynomial q;
  q.low = vec({0.0});
  const Vector u = oracle::series_expand_rational(vec({1.0}), q, 6);
  CHECK(u[0] == 1.0);
  for (int k = 1; k < 6; ++k) CHECK(u[k] == 0.0);
}

TEST_CASE("series expansion of -2/(z-1), sign convention pinned") {
  MonicPolynomial q;
  q.low = vec({-1.0});
  const Vector u = oracle::series_expand_rational(vec({-2.0}), q, 5);
  // -2/(z-1) = -2 z^-1 - 2 z^-2 - ...; negating matches the moment vector
  // (2,2,...) of the signal a=2, x=1.
  for (int k = 0; k < 5; ++k) CHECK(u[k] == -2.0);
  const Vector mu = moments(sig({2.0}, {1.0}), 5);
  CHECK((u + mu).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("elementary-fraction numerator reproduces the moment series") {
  const SpikeSignal pair = sig({1.0, 1.0}, {-0.5, 0.5});
  const Vector num = oracle::elementary_numerator(pair);  // = 2z
  CHECK(num[0] == 0.0);
  CHECK(num[1] == 2.0);
  MonicPolynomial q;
  q.low = vec({-0.25, 0.0});
  const Vector u = oracle::series_expand_rational(num, q, 6);
  const Vector mu = moments(pair, 6);  // (2, 0, 0.5, 0, 0.125, 0)
  CHECK(mu[2] == 0.5);
  CHECK((u - mu).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("brute force recovers a one-spike signal") {
  const Vector mu = vec({2.0, 2.0});
  const auto best = oracle::brute_force_solve(mu, 1);
  CHECK(best.residual < 1e-6);
  CHECK(best.signal.amplitudes[0] == Catch::Approx(2.0).margin(1e-5));
  CHECK(best.signal.nodes[0] == Catch::Approx(1.0).margin(1e-5));
}

TEST_CASE("brute force recovers a two-spike signal") {
  const SpikeSignal truth = sig({1.0, 1.0}, {-0.5, 0.5});
  const Vector mu = moments(truth, 4);
  const auto best = oracle::brute_force_solve(mu, 2);
  CHECK(best.residual < 1e-5);
  for (int j = 0; j < 2; ++j) {
    CHECK(best.signal.nodes[j] ==
          Catch::Approx(truth.nodes[j]).margin(1e-3));
    CHECK(best.signal.amplitudes[j] ==
          Catch::Approx(truth.amplitudes[j]).margin(1e-3));
  }
}

TEST_CASE("brute force certifies the infeasible moment vector") {
  const auto best = oracle::brute_force_solve(vec({0.0, 0.0, 0.0, 1.0}), 2);
  // No two-spike signal matches (0,0,0,1): matching the first three moments
  // inside the box forces the third-moment error to stay of order one.
  CHECK(best.residual > 0.05);
}
