#include "comjac/jacobian.hpp"

#include <stdexcept>

#include "comjac/errors.hpp"

namespace comjac {

Real Matrix3::det() const {
  const auto& a = m;
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Matrix3 Matrix3::identity() {
  Matrix3 I;
  for (int i = 0; i < 3; ++i) I(i, i) = Real(1);
  return I;
}

void require_admissible(const Momentum& p, const Momentum& q) {
  Real thr = degeneracy_threshold();
  if (relative_momentum(p, q) < thr) {
    throw DegenerateInput("relative momentum below threshold (p ~ q)");
  }
  if (norm(p.vec() + q.vec()) < thr) {
    throw DegenerateInput("|p + q| below threshold (center-of-momentum frame)");
  }
}

namespace {

void require_theta(const Real& theta) {
  if (!(theta >= 0 && theta <= 1)) {
    throw std::invalid_argument("theta must lie in [0, 1]");
  }
}

int least_aligned_axis(const Vec3& w) {
  Real ax = abs(w.x), ay = abs(w.y), az = abs(w.z);
  if (ax <= ay && ax <= az) return 0;
  if (ay <= az) return 1;
  return 2;
}

}  // namespace

BasisTriple basis_triple(const Momentum& p, const UnitVector& w) {
  BasisTriple t;
  t.w = w;
  t.a = Real::nan();
  t.b = Real::nan();
  t.c = Real::nan();
  t.L = Real::nan();
  t.d = dot(p.vec(), w.vec());
  Vec3 pxw = cross(p.vec(), w.vec());
  t.e = norm(pxw);
  if (t.e < degeneracy_threshold()) {
    // p ~ 0 or p parallel to w: complete the frame from the standard axis
    // least aligned with w (deterministic Gram-Schmidt).
    t.degenerate = true;
    Vec3 axis = Vec3::zero();
    axis[least_aligned_axis(w.vec())] = Real(1);
    Vec3 bar = axis - dot(axis, w.vec()) * w.vec();
    t.wbar = UnitVector::normalize(bar);
    t.wtilde = UnitVector::trusted(cross(w.vec(), t.wbar.vec()));
  } else {
    t.wtilde = UnitVector::trusted(pxw / t.e);
    t.wbar = UnitVector::trusted(cross(w.vec(), pxw) / t.e);
  }
  return t;
}

BasisTriple basis_triple(const Momentum& p, const Momentum& q, const UnitVector& w) {
  BasisTriple t = basis_triple(p, w);
  t.a = dot(q.vec(), w.vec());
  t.b = dot(q.vec(), t.wbar.vec());
  t.c = dot(q.vec(), t.wtilde.vec());
  t.L = t.a * t.e - t.b * t.d;
  return t;
}

namespace {

/// Shared invariants of one admissible configuration.
struct Frame {
  Real p0, q0, g, s, rs, T, gamma, pqw;
  BasisTriple basis;
};

Frame make_frame(const Momentum& p, const Momentum& q, const UnitVector& w) {
  require_admissible(p, q);
  Frame f;
  f.p0 = p.e();
  f.q0 = q.e();
  f.g = relative_momentum(p, q);
  f.s = total_energy_sq(p, q);
  f.rs = sqrt(f.s);
  f.T = f.p0 + f.q0 + f.rs;
  f.gamma = (f.p0 + f.q0) / f.rs;
  f.basis = basis_triple(p, q, w);
  f.pqw = f.basis.a + f.basis.d;  // (p+q).w
  return f;
}

ScalarCoeffs scalar_coeffs_impl(const Real& theta, const Frame& f) {
  ScalarCoeffs sc;
  const Real& g = f.g;
  Real g2 = g * g;
  Real s32 = f.s * f.rs;
  Real T2 = f.T * f.T;
  sc.A = (1 - theta / 2) + (theta / 2) * g * f.pqw / (f.rs * f.T);
  sc.B = theta * f.pqw / (2 * g * f.p0 * T2 * s32) *
         (f.q0 * f.s * f.T - g2 * f.q0 * (f.p0 + f.q0 + 2 * f.rs) - g2 * f.s);
  sc.C = theta * f.pqw / (2 * g * T2 * s32) * (-(f.s * f.T) + g2 * (f.p0 + f.q0 + 2 * f.rs));
  sc.D = sc.C;
  sc.E = sc.B;
  sc.F = theta * g / (2 * f.rs * f.T);
  sc.G = sc.F;
  sc.H = theta * f.q0 / (2 * g * f.p0);
  sc.I = -(theta / (2 * g));
  return sc;
}

Matrix3 matrix_impl(const ScalarCoeffs& sc, const Vec3& p, const Vec3& q, const Vec3& w) {
  Matrix3 J;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Real v = sc.B * p[i] * p[j] + sc.C * q[i] * q[j] + sc.D * p[i] * q[j] + sc.E * q[i] * p[j] +
               sc.F * p[i] * w[j] + sc.G * q[i] * w[j] + sc.H * w[i] * p[j] + sc.I * w[i] * q[j];
      if (i == j) v += sc.A;
      J(i, j) = std::move(v);
    }
  }
  return J;
}

Real p1_amplification_impl(const BasisTriple& t, const Real& psq) {
  Real c2e2 = t.c * t.c * t.e * t.e;
  return (psq * t.c * t.c + t.L * t.L + abs(t.b * t.L) + abs(t.c * t.c * t.d * t.d) +
          abs(t.L * t.a * t.e)) /
         c2e2;
}

Real recompute_p1_impl(const BasisTriple& t, const Real& psq) {
  Real a11 = (t.c * t.c * psq + t.L * t.L) / (t.c * t.c * t.e * t.e);
  Real a12 = (t.b * t.L - t.c * t.c * t.d) / (t.c * t.c * t.e);
  Real a13 = -(t.L / (t.c * t.e));
  return a11 + a12 * t.d / t.e + a13 * t.a / t.c;
}

/// Gate under which the P1 = 1 self-check is numerically meaningful.
bool p1_checkable(const BasisTriple& t, const Real& psq) {
  Real thr = degeneracy_threshold();
  if (t.degenerate || abs(t.c) < thr || t.e < thr) return false;
  return p1_amplification_impl(t, psq) <= Real::pow2(16);
}

AForm det_A_form_impl(const Real& theta, const Frame& f, const Real& psq, const Real& qsq) {
  const Real& a = f.basis.a;
  const Real& b = f.basis.b;
  const Real& c = f.basis.c;
  const Real& d = f.basis.d;
  const Real& e = f.basis.e;
  Real g2 = f.g * f.g;
  Real T2 = f.T * f.T;
  Real adbe = a * d + b * e;

  AForm out;
  out.A = (1 - theta / 2) + (theta / 2) * f.pqw * f.g / (f.T * f.rs);

  Real X = (1 + f.p0 * f.q0 - adbe) * (f.p0 - f.q0) * (4 * f.gamma + 4 - g2) -
           (adbe + psq) * g2 * f.rs;
  Real K = f.pqw * f.g / (f.T * f.rs);
  out.P2 = theta * f.pqw * X / (2 * f.g * f.p0 * f.s * T2) + (theta / 2) * K +
           theta * (f.q0 * d - f.p0 * a) / (2 * f.g * f.p0);

  Real I3 = f.p0 * (b * e + qsq - a * a) + f.q0 * (-(b * e) - psq + d * d);
  out.P3 = theta * theta / (4 * f.p0 * f.rs * T2) *
           (f.rs * I3 + (1 + f.p0 * f.q0 - adbe) * (b * b + c * c - e * e));

  out.det = ((out.A + out.P2) * out.A + out.P3) * out.A;

  if (p1_checkable(f.basis, psq)) {
    Real p1 = recompute_p1_impl(f.basis, psq);
    if (abs(p1 - 1) > Real::pow2(-(working_precision() - 24))) {
      throw NumericInconsistency("row-reduction identity P1 = 1 violated: P1 - 1 = " +
                                 (p1 - 1).to_string(8));
    }
  }
  return out;
}

KForm det_K_form_impl(const Real& theta, const Frame& f, const Real& psq, const Real& qsq) {
  const Real& a = f.basis.a;
  const Real& b = f.basis.b;
  const Real& c = f.basis.c;
  const Real& d = f.basis.d;
  const Real& e = f.basis.e;
  Real g2 = f.g * f.g;
  Real adbe = a * d + b * e;

  KForm out;
  out.K = f.pqw * f.g / (f.T * f.rs);

  Real X = (1 + f.p0 * f.q0 - adbe) * (f.p0 - f.q0) * (4 * f.gamma + 4 - g2) -
           (adbe + psq) * g2 * f.rs;
  Real P21 = theta * (X / (2 * f.p0 * g2 * f.rs * f.T) + Real::pow2(-1));
  Real P22 = theta * (f.q0 * d - f.p0 * a) / (2 * f.g * f.p0);
  Real P31 =
      theta * theta * (a * b * e - b * d * e + a * e * e - c * c * d - b * b * d) /
      (4 * f.p0 * f.g * f.T);
  Real P32 = theta * theta * (f.q0 * (-(b * e) - e * e) + f.p0 * (b * b + c * c + b * e)) /
             (4 * f.p0 * f.rs * f.T);

  Real t = theta / 2;
  Real m = 1 - t;
  out.D1 = t * t * t + P21 * t * t;
  out.D2 = t * m * (3 * t + 2 * P21) + t * (t * P22 + P31);
  out.D3 = 3 * m * m * t + m * m * P21 + 2 * m * t * P22 + m * P31 + t * P32;
  out.D4 = m * m * m + P22 * m * m + P32 * m;
  out.det = ((out.D1 * out.K + out.D2) * out.K + out.D3) * out.K + out.D4;
  (void)qsq;
  return out;
}

}  // namespace

ScalarCoeffs scalar_coeffs(const Real& theta, const Momentum& p, const Momentum& q,
                           const UnitVector& w) {
  require_theta(theta);
  Frame f = make_frame(p, q, w);
  return scalar_coeffs_impl(theta, f);
}

Matrix3 jacobian_matrix(const Real& theta, const Momentum& p, const Momentum& q,
                        const UnitVector& w) {
  require_theta(theta);
  Frame f = make_frame(p, q, w);
  return matrix_impl(scalar_coeffs_impl(theta, f), p.vec(), q.vec(), w.vec());
}

Real default_fd_step() { return Real::pow2(-(working_precision() / 3)); }

Matrix3 fd_jacobian(const Real& theta, const Momentum& p, const Momentum& q, const UnitVector& w,
                    const Real& h) {
  require_theta(theta);
  if (!(h > 0)) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  // Admissibility is judged at the caller's precision; everything else runs
  // elevated, with energies re-derived there so no 200-bit rounding leaks in.
  Real thr = degeneracy_threshold();
  PrecisionScope elevated(2 * working_precision());
  Momentum q_hi(q.vec());
  for (int j = 0; j < 3; ++j) {
    for (int sgn : {+1, -1}) {
      Vec3 v = p.vec();
      v[j] += sgn * h;
      Momentum shifted(v);
      if (relative_momentum(shifted, q_hi) < thr || norm(v + q_hi.vec()) < thr) {
        throw InadmissiblePerturbation("p + h e_" + std::to_string(j) +
                                       " crosses the degenerate set");
      }
    }
  }
  return fd_matrix(
      [&](const Vec3& v) { return u_map(theta, Momentum(v), q_hi, w); }, p.vec(), h);
}

AForm det_A_form(const Real& theta, const Momentum& p, const Momentum& q, const UnitVector& w) {
  require_theta(theta);
  Frame f = make_frame(p, q, w);
  return det_A_form_impl(theta, f, norm_sq(p.vec()), norm_sq(q.vec()));
}

KForm det_K_form(const Real& theta, const Momentum& p, const Momentum& q, const UnitVector& w) {
  require_theta(theta);
  Frame f = make_frame(p, q, w);
  return det_K_form_impl(theta, f, norm_sq(p.vec()), norm_sq(q.vec()));
}

BoundRatios bound_check(const Real& theta, const Momentum& p, const Momentum& q,
                        const UnitVector& w) {
  require_theta(theta);
  Frame f = make_frame(p, q, w);
  Real psq = norm_sq(p.vec());
  Real qsq = norm_sq(q.vec());
  AForm af = det_A_form_impl(theta, f, psq, qsq);
  Real q032 = f.q0 * sqrt(f.q0);
  BoundRatios r;
  r.ratio_P2 = abs(af.P2) / (q032 * (1 + sqrt(f.p0) / f.s));
  r.ratio_P3 = abs(af.P3) / (f.q0 / f.s);
  r.ratio_det = abs(af.det) / (sqrt(f.p0) * q032);
  return r;
}

JacobianReport jacobian_report(const Real& theta, const Momentum& p, const Momentum& q,
                               const UnitVector& w) {
  require_theta(theta);
  Frame f = make_frame(p, q, w);
  Real psq = norm_sq(p.vec());
  Real qsq = norm_sq(q.vec());
  JacobianReport rep;
  rep.matrix = matrix_impl(scalar_coeffs_impl(theta, f), p.vec(), q.vec(), w.vec());
  rep.det_matrix = rep.matrix.det();
  AForm af = det_A_form_impl(theta, f, psq, qsq);
  rep.A = af.A;
  rep.P2 = af.P2;
  rep.P3 = af.P3;
  rep.det_A = af.det;
  KForm kf = det_K_form_impl(theta, f, psq, qsq);
  rep.K = kf.K;
  rep.D1 = kf.D1;
  rep.D2 = kf.D2;
  rep.D3 = kf.D3;
  rep.D4 = kf.D4;
  rep.det_K = kf.det;
  return rep;
}

namespace detail {

Real recompute_p1(const BasisTriple& basis, const Momentum& p) {
  return recompute_p1_impl(basis, norm_sq(p.vec()));
}

Real p1_amplification(const BasisTriple& basis, const Momentum& p) {
  return p1_amplification_impl(basis, norm_sq(p.vec()));
}

}  // namespace detail

}  // namespace comjac
