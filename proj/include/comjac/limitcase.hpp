#pragma once

#include <vector>

#include "comjac/real.hpp"

namespace comjac {

/// Determinant at the special configuration p = 0, q = -|q| w, evaluated two
/// independent ways, with its distance from the closed-form limits.
struct LimitEvaluation {
  Real theta;
  Real q_mag;
  Real A, P2, P3;
  Real det;
  Real closed_form;           // closed_form_limit(theta)
  Real deviation;             // |det - closed_form|
  Real asymptote;             // ray_asymptote(theta)
  Real deviation_asymptote;   // |det - asymptote|
};

/// (1-theta)^3 + ((1+sqrt(2))/2) theta (1-theta)^2.
Real closed_form_limit(const Real& theta);

/// Large-|q| asymptote of the determinant on the ray p = 0, q = -|q| w,
/// from the coefficient limits A -> 1-theta, P2 -> theta, P3 -> 0:
/// (1-theta)^3 + theta (1-theta)^2 = (1-theta)^2.
Real ray_asymptote(const Real& theta);

/// Evaluates the determinant at p = 0, q = -q_mag w via det_A_form and,
/// independently, via the reduced on-ray identities (p0 = 1, g = sqrt(2q0-2),
/// s = 2q0+2, a = -|q|, b = c = d = e = 0); throws NumericInconsistency if the
/// two routes or two choices of w disagree.
LimitEvaluation eval_special_point(const Real& theta, const Real& q_mag);

struct ConvergenceTable {
  std::vector<LimitEvaluation> rows;
  /// Fitted exponents of an O(1/|q|^alpha) decay (log-log least squares).
  double alpha_closed_form;
  double alpha_asymptote;
};

/// Per-magnitude evaluations along a strictly increasing q_mag sequence.
ConvergenceTable convergence_table(const Real& theta, const std::vector<Real>& q_mags);

}  // namespace comjac
