#pragma once

#include <array>

#include "comjac/kinematics.hpp"
#include "comjac/real.hpp"
#include "comjac/vec3.hpp"

namespace comjac {

struct Matrix3 {
  std::array<std::array<Real, 3>, 3> m;

  const Real& operator()(int i, int j) const { return m[i][j]; }
  Real& operator()(int i, int j) { return m[i][j]; }

  /// Determinant by cofactor expansion along the first row.
  Real det() const;

  static Matrix3 identity();
};

/// Orthonormal frame {w, wbar, wtilde} built from w and p x w, with the
/// projection scalars a, b, c of q, d, e of p, and L = a e - b d.
/// basis_triple(p, w) fills only the frame and d, e; the q projections stay
/// NaN until the (p, q, w) overload computes them.
struct BasisTriple {
  UnitVector w, wbar, wtilde;
  Real a, b, c, d, e, L;
  bool degenerate = false;  // p ~ 0 or p parallel to w; frame completed arbitrarily
};

BasisTriple basis_triple(const Momentum& p, const UnitVector& w);
BasisTriple basis_triple(const Momentum& p, const Momentum& q, const UnitVector& w);

/// Scalars of the tensor decomposition
/// du_i/dp_j = A d_ij + B p_i p_j + C q_i q_j + D p_i q_j + E q_i p_j
///           + F p_i w_j + G q_i w_j + H w_i p_j + I w_i q_j,
/// with D = C, E = B, G = F by construction.
struct ScalarCoeffs {
  Real A, B, C, D, E, F, G, H, I;
};

ScalarCoeffs scalar_coeffs(const Real& theta, const Momentum& p, const Momentum& q,
                           const UnitVector& w);

/// Analytic matrix du/dp assembled from the scalar decomposition.
Matrix3 jacobian_matrix(const Real& theta, const Momentum& p, const Momentum& q,
                        const UnitVector& w);

/// Central-difference step balancing truncation and rounding at 2x precision.
Real default_fd_step();

/// Central-difference Jacobian of any Vec3 -> Vec3 map, one column per axis.
template <typename Fn>
Matrix3 fd_matrix(Fn&& fn, const Vec3& x, const Real& h) {
  Matrix3 J;
  for (int j = 0; j < 3; ++j) {
    Vec3 xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    Vec3 up = fn(xp);
    Vec3 um = fn(xm);
    for (int i = 0; i < 3; ++i) {
      J(i, j) = (up[i] - um[i]) / (2 * h);
    }
  }
  return J;
}

/// Finite-difference oracle for du/dp, evaluated at twice the working
/// precision. Throws InadmissiblePerturbation if p +/- h e_j leaves the
/// admissible set.
Matrix3 fd_jacobian(const Real& theta, const Momentum& p, const Momentum& q, const UnitVector& w,
                    const Real& h);

/// Determinant as the cubic A^3 + P2 A^2 + P3 A in A.
struct AForm {
  Real A, P2, P3, det;
};

AForm det_A_form(const Real& theta, const Momentum& p, const Momentum& q, const UnitVector& w);

/// Determinant as the cubic D1 K^3 + D2 K^2 + D3 K + D4 in
/// K = ((p+q).w) g / ((p0+q0+sqrt(s)) sqrt(s)), |K| < 1.
struct KForm {
  Real K, D1, D2, D3, D4, det;
};

KForm det_K_form(const Real& theta, const Momentum& p, const Momentum& q, const UnitVector& w);

/// |P2|, |P3|, |det| divided by their closed-form envelopes
/// (q0)^{3/2}(1 + sqrt(p0)/s), q0/s and sqrt(p0)(q0)^{3/2}.
struct BoundRatios {
  Real ratio_P2, ratio_P3, ratio_det;
};

BoundRatios bound_check(const Real& theta, const Momentum& p, const Momentum& q,
                        const UnitVector& w);

/// Everything about one configuration: the matrix and all three determinant
/// routes with their closed-form coefficients.
struct JacobianReport {
  Matrix3 matrix;
  Real det_matrix;
  Real A, P2, P3, det_A;
  Real K, D1, D2, D3, D4, det_K;
};

JacobianReport jacobian_report(const Real& theta, const Momentum& p, const Momentum& q,
                               const UnitVector& w);

/// Throws DegenerateInput unless g and |p+q| are above the threshold.
void require_admissible(const Momentum& p, const Momentum& q);

namespace detail {

/// Row-reduction identity check: recomputes P1 from a11, a12, a13 and the
/// filled basis scalars. Algebraically 1; exposed only for the self-check.
Real recompute_p1(const BasisTriple& basis, const Momentum& p);

/// Rounding amplification of the P1 recomputation. The identity check is
/// meaningful only when this is small (gated at 2^16).
Real p1_amplification(const BasisTriple& basis, const Momentum& p);

}  // namespace detail

}  // namespace comjac
