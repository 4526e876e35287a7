#pragma once

#include <prony/moments.hpp>
#include <prony/solvability.hpp>
#include <prony/solve.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace prony {

// -------------------------------------------------------------------------
// Exponential interpolation: y_k = sum_j a_j e^{k zeta_j}.
// -------------------------------------------------------------------------

struct ExponentialFit {
  SolveOutcome outcome;  // full classification of the underlying solve
  Vector amplitudes;     // filled for real (possibly reduced) solutions
  Vector nodes;          // bases x_j = e^{zeta_j}
  std::vector<std::optional<double>> exponents;  // log x_j, only for x_j > 0
  double residual = 0.0;
  bool reduced = false;  // fewer terms than d explained the samples
};

/// Fits sum_j a_j x_j^k to equally spaced samples y_0..y_{2d-1}.  Negative or
/// complex bases are legitimate solver output but carry no real exponent;
/// complex and infeasible outcomes leave the term lists empty and are
/// classified by `outcome`.
inline ExponentialFit exponential_fit(const Vector& samples,
                                      const Tolerances& tol = {}) {
  if (samples.size() == 0 || samples.size() % 2 != 0)
    throw InvalidArgument("exponential_fit: need an even number of samples");
  const int d = static_cast<int>(samples.size()) / 2;
  ExponentialFit fit;
  fit.outcome = prony_solve(samples, d, tol);
  fit.residual = fit.outcome.residual;

  const SpikeSignal* terms = nullptr;
  if (fit.outcome.is_real()) {
    terms = &fit.outcome.signal();
  } else if (fit.outcome.is_rank_deficient()) {
    const auto& rd = std::get<RankDeficient>(fit.outcome.result);
    if (rd.reduced) {
      terms = &*rd.reduced;
      fit.reduced = true;
    }
  }
  if (terms) {
    fit.amplitudes = terms->amplitudes;
    fit.nodes = terms->nodes;
    fit.exponents.resize(terms->size());
    for (int j = 0; j < terms->size(); ++j)
      if (fit.nodes[j] > 0.0) fit.exponents[j] = std::log(fit.nodes[j]);
  }
  return fit;
}

// -------------------------------------------------------------------------
// Gaussian quadrature from measure moments.
// -------------------------------------------------------------------------

struct Quadrature {
  Vector nodes;
  Vector weights;
  int exactness_degree = 0;  // 2d - 1

  /// Applies the rule to the monomial x^k.
  double integrate_monomial(int k) const {
    double acc = 0.0;
    for (int j = 0; j < nodes.size(); ++j)
      acc += weights[j] * std::pow(nodes[j], k);
    return acc;
  }
};

/// Builds the d-point rule matching the 2d given moments exactly, d inferred
/// from the input length.  A measure supported on fewer than d points yields
/// the shorter rule.  Moment vectors without a real spike representation are
/// rejected.
inline Quadrature gauss_quadrature_from_moments(const Vector& mu,
                                                const Tolerances& tol = {}) {
  if (mu.size() == 0 || mu.size() % 2 != 0)
    throw InvalidArgument("gauss_quadrature_from_moments: need 2d moments");
  const int d = static_cast<int>(mu.size()) / 2;
  const SolveOutcome outcome = prony_solve(mu, d, tol);

  const SpikeSignal* atoms = nullptr;
  if (outcome.is_real()) {
    atoms = &outcome.signal();
  } else if (outcome.is_rank_deficient()) {
    const auto& rd = std::get<RankDeficient>(outcome.result);
    if (rd.reduced) atoms = &*rd.reduced;
  }
  if (!atoms)
    throw NotRealSolvable(
        "gauss_quadrature_from_moments: moments admit no real atomic measure");

  Quadrature rule;
  const SpikeSignal sorted = atoms->canonical();
  rule.nodes = sorted.nodes;
  rule.weights = sorted.amplitudes;
  rule.exactness_degree = 2 * d - 1;
  return rule;
}

// -------------------------------------------------------------------------
// Waring decomposition of odd-degree binary forms.
// -------------------------------------------------------------------------

struct WaringForm {
  double eta = 0.0;  // weight of (x + xi y)^m
  double xi = 0.0;
  double lambda = 0.0;  // signed m-th root: (lambda x + lambda xi y)^m
};

struct WaringDecomposition {
  int degree = 0;  // m
  std::vector<WaringForm> forms;
  double residual = 0.0;  // max re-expansion error on the input coefficients
};

/// Decomposes p(x,y) = sum_i b_i x^{m-i} y^i (b has m+1 entries, m odd,
/// m + 1 = 2d) into d powers of linear forms eta_j (x + xi_j y)^m.  Forms
/// with xi at infinity (a pure y^m component) and forms requiring complex
/// xi are outside this chart and raise GenericityFailure.
inline WaringDecomposition waring_decompose(const Vector& b, int d,
                                            const Tolerances& tol = {}) {
  const int m = static_cast<int>(b.size()) - 1;
  if (m < 1 || m % 2 == 0)
    throw InvalidArgument("waring_decompose: degree must be odd");
  if (m + 1 != 2 * d)
    throw InvalidArgument("waring_decompose: need m+1 = 2d coefficients");

  Vector binomials(m + 1);
  binomials[0] = 1.0;
  for (int i = 1; i <= m; ++i)
    binomials[i] = binomials[i - 1] * (m - i + 1) / i;
  const Vector mu = b.cwiseQuotient(binomials);

  SolveOutcome outcome;
  try {
    outcome = prony_solve(mu, d, tol);
  } catch (const SingularHankel&) {
    throw GenericityFailure("waring_decompose: singular moment matrix");
  }
  const SpikeSignal* points = nullptr;
  if (outcome.is_real()) {
    points = &outcome.signal();
  } else if (outcome.is_rank_deficient()) {
    const auto& rd = std::get<RankDeficient>(outcome.result);
    if (rd.reduced) points = &*rd.reduced;
  }
  if (!points) {
    if (outcome.is_complex())
      throw GenericityFailure(
          "waring_decompose: form needs complex linear forms in this chart");
    const std::string detail =
        outcome.is_unsolvable()
            ? std::get<Unsolvable>(outcome.result).diagnostic
            : "no real reduced solution";
    throw GenericityFailure("waring_decompose: " + detail +
                            " (a y^m component has no finite xi)");
  }

  WaringDecomposition dec;
  dec.degree = m;
  const SpikeSignal sorted = points->canonical();
  for (int j = 0; j < sorted.size(); ++j) {
    WaringForm form;
    form.eta = sorted.amplitudes[j];
    form.xi = sorted.nodes[j];
    form.lambda = std::copysign(std::pow(std::abs(form.eta), 1.0 / m), form.eta);
    dec.forms.push_back(form);
  }
  for (int i = 0; i <= m; ++i) {
    double expanded = 0.0;
    for (const WaringForm& form : dec.forms)
      expanded += form.eta * binomials[i] * std::pow(form.xi, i);
    dec.residual = std::max(dec.residual, std::abs(expanded - b[i]));
  }
  return dec;
}

/// Coefficients of sum_j eta_j (x + xi_j y)^m, highest x power first;
/// inverse of waring_decompose for checks and data generation.
inline Vector waring_expand(const std::vector<WaringForm>& forms, int m) {
  if (m < 1) throw InvalidArgument("waring_expand: need m >= 1");
  Vector b = Vector::Zero(m + 1);
  double binomial = 1.0;
  for (int i = 0; i <= m; ++i) {
    for (const WaringForm& form : forms)
      b[i] += form.eta * binomial * std::pow(form.xi, i);
    binomial = binomial * (m - i) / (i + 1);
  }
  return b;
}

}  // namespace prony
