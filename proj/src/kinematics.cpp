#include "comjac/kinematics.hpp"

#include "comjac/errors.hpp"

namespace comjac {

Real degeneracy_threshold() { return Real::pow2(-(working_precision() - 16)); }

Real energy(const Vec3& p) { return sqrt(1 + norm_sq(p)); }

UnitVector UnitVector::normalize(const Vec3& v) {
  Real n = norm(v);
  if (n < degeneracy_threshold()) {
    throw DegenerateInput("cannot normalize a near-zero vector to the sphere");
  }
  return UnitVector(v / n);
}

UnitVector UnitVector::trusted(Vec3 v) { return UnitVector(std::move(v)); }

Real relative_momentum(const Momentum& p, const Momentum& q) {
  Real radicand = 2 * (p.e() * q.e() - dot(p.vec(), q.vec()) - 1);
  if (radicand < 0) {
    // g^2 >= 0 holds exactly; tiny negatives are rounding residue near p = q.
    Real tol = Real::pow2(-(working_precision() - 8)) * p.e() * q.e();
    if (-radicand > tol) {
      throw NumericInconsistency("negative radicand in relative momentum: " +
                                 radicand.to_string(8));
    }
    return Real(0);
  }
  return sqrt(radicand);
}

Real total_energy_sq(const Momentum& p, const Momentum& q) {
  return 2 * (p.e() * q.e() - dot(p.vec(), q.vec()) + 1);
}

Real lorentz_gamma_minus_one(const Momentum& p, const Momentum& q) {
  Real s = total_energy_sq(p, q);
  Real rs = sqrt(s);
  return norm_sq(p.vec() + q.vec()) / (rs * (p.e() + q.e() + rs));
}

Real lorentz_gamma(const Momentum& p, const Momentum& q) {
  return 1 + lorentz_gamma_minus_one(p, q);
}

CollisionPair make_pair(Momentum p, Momentum q) {
  Real g = relative_momentum(p, q);
  Real s = total_energy_sq(p, q);
  Real gamma = lorentz_gamma(p, q);
  return CollisionPair{std::move(p), std::move(q), std::move(g), std::move(s), std::move(gamma)};
}

std::pair<Momentum, Momentum> post_collisional(const Momentum& p, const Momentum& q,
                                               const UnitVector& w) {
  Real g = relative_momentum(p, q);
  Real s = total_energy_sq(p, q);
  Real rs = sqrt(s);
  Vec3 pq = p.vec() + q.vec();
  // (gamma-1)/|p+q|^2 collapses to 1/(sqrt(s)(p0+q0+sqrt(s))); no singularity
  // at p+q = 0, where the projection term vanishes with (p+q).w.
  Real coef = dot(pq, w.vec()) / (rs * (p.e() + q.e() + rs));
  Vec3 half_sum = Real::pow2(-1) * pq;
  Vec3 offset = (g / 2) * (w.vec() + coef * pq);
  return {Momentum(half_sum + offset), Momentum(half_sum - offset)};
}

namespace {

Vec3 scattering_k(const Momentum& p, const Momentum& q) {
  Real s = total_energy_sq(p, q);
  Real rs = sqrt(s);
  Vec3 pq = p.vec() + q.vec();
  Vec3 pmq = p.vec() - q.vec();
  Real proj = dot(pq, pmq) / (rs * (p.e() + q.e() + rs));
  return pmq + (proj - (p.e() - q.e()) / rs) * pq;
}

}  // namespace

Real scattering_cos(const Momentum& p, const Momentum& q, const UnitVector& w) {
  Vec3 k = scattering_k(p, q);
  Real kn = norm(k);
  if (kn < degeneracy_threshold()) {
    throw DegenerateInput("scattering direction undefined, |k| ~ 0 (p ~ q)");
  }
  return dot(k, w.vec()) / kn;
}

bool angle_condition(const Momentum& p, const Momentum& q, const UnitVector& w) {
  return scattering_cos(p, q, w) >= 0;
}

Real moller_velocity(const Momentum& p, const Momentum& q) {
  return relative_momentum(p, q) * sqrt(total_energy_sq(p, q)) / (p.e() * q.e());
}

Vec3 u_map(const Real& theta, const Momentum& p, const Momentum& q, const UnitVector& w) {
  Vec3 pp = post_collisional(p, q, w).first.vec();
  return theta * pp + (1 - theta) * p.vec();
}

}  // namespace comjac
