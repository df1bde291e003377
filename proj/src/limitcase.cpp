#include "comjac/limitcase.hpp"

#include <cmath>
#include <stdexcept>

#include "comjac/errors.hpp"
#include "comjac/jacobian.hpp"
#include "comjac/kinematics.hpp"

namespace comjac {

Real closed_form_limit(const Real& theta) {
  Real om = 1 - theta;
  return om * om * om + (1 + sqrt(Real(2))) / 2 * theta * om * om;
}

Real ray_asymptote(const Real& theta) {
  Real om = 1 - theta;
  return om * om;
}

namespace {

/// On-ray determinant from the reduced identities, independent of the general
/// det_A_form machinery.
struct RayForm {
  Real A, P2, P3, det;
};

RayForm ray_identities(const Real& theta, const Real& q_mag) {
  Real q0 = sqrt(1 + q_mag * q_mag);
  Real g = sqrt(2 * q0 - 2);
  Real s = 2 * q0 + 2;
  Real rs = sqrt(s);
  Real T = 1 + q0 + rs;
  Real gamma = (1 + q0) / rs;
  Real K = -(q_mag * g / (T * rs));
  RayForm r;
  r.A = 1 - theta / 2 + (theta / 2) * K;
  r.P2 = -(theta * q_mag * (1 - q0 * q0) * (4 * gamma + 4 - g * g) / (2 * g * s * T * T)) +
         (theta / 2) * K + theta * q_mag / (2 * g);
  r.P3 = Real(0);  // b = c = d = e = 0 kills every P3 term on the ray
  r.det = ((r.A + r.P2) * r.A + r.P3) * r.A;
  return r;
}

Real rel_gap(const Real& x, const Real& y) { return abs(x - y) / max(Real(1), abs(x)); }

}  // namespace

LimitEvaluation eval_special_point(const Real& theta, const Real& q_mag) {
  if (!(q_mag > 0)) {
    throw std::invalid_argument("q_mag must be positive");
  }
  Momentum p;  // rest
  UnitVector w1;  // +z
  UnitVector w2 = UnitVector::normalize(Vec3(Real(1), Real(2), Real(2)));
  Momentum q1(-q_mag * w1.vec());
  Momentum q2(-q_mag * w2.vec());

  AForm general = det_A_form(theta, p, q1, w1);
  AForm rotated = det_A_form(theta, p, q2, w2);
  RayForm reduced = ray_identities(theta, q_mag);

  Real tol = Real::pow2(-(working_precision() - 24));
  if (rel_gap(general.det, rotated.det) > tol) {
    throw NumericInconsistency("special-point determinant depends on the direction of w");
  }
  if (rel_gap(general.det, reduced.det) > tol) {
    throw NumericInconsistency("on-ray identity route disagrees with det_A_form");
  }

  LimitEvaluation ev;
  ev.theta = theta;
  ev.q_mag = q_mag;
  ev.A = general.A;
  ev.P2 = general.P2;
  ev.P3 = general.P3;
  ev.det = general.det;
  ev.closed_form = closed_form_limit(theta);
  ev.deviation = abs(ev.det - ev.closed_form);
  ev.asymptote = ray_asymptote(theta);
  ev.deviation_asymptote = abs(ev.det - ev.asymptote);
  return ev;
}

namespace {

double fit_alpha(const std::vector<LimitEvaluation>& rows, bool against_asymptote) {
  // least-squares slope of log2(dev) against log2(q_mag); alpha = -slope
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& row : rows) {
    const Real& dev = against_asymptote ? row.deviation_asymptote : row.deviation;
    if (dev.is_zero()) continue;
    double x = log2(row.q_mag).to_double();
    double y = log2(dev).to_double();
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return -(n * sxy - sx * sy) / denom;
}

}  // namespace

ConvergenceTable convergence_table(const Real& theta, const std::vector<Real>& q_mags) {
  for (std::size_t i = 1; i < q_mags.size(); ++i) {
    if (!(q_mags[i] > q_mags[i - 1])) {
      throw std::invalid_argument("q_mags must be strictly increasing");
    }
  }
  ConvergenceTable table;
  table.rows.reserve(q_mags.size());
  for (const Real& q : q_mags) {
    table.rows.push_back(eval_special_point(theta, q));
  }
  table.alpha_closed_form = fit_alpha(table.rows, false);
  table.alpha_asymptote = fit_alpha(table.rows, true);
  return table;
}

}  // namespace comjac
