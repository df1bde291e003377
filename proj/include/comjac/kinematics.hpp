#pragma once

#include <utility>

#include "comjac/real.hpp"
#include "comjac/vec3.hpp"

namespace comjac {

/// Inputs with |v| below this are treated as degenerate (2^-(precision-16)).
Real degeneracy_threshold();

/// Relativistic particle energy p0 = sqrt(1 + |p|^2), unit rest mass, c = 1.
Real energy(const Vec3& p);

/// On-shell momentum; the energy is derived from the spatial part at
/// construction and can never drift away from the mass shell.
class Momentum {
 public:
  Momentum() : p_(Vec3::zero()), energy_(1) {}
  explicit Momentum(Vec3 p) : p_(std::move(p)), energy_(comjac::energy(p_)) {}

  const Vec3& vec() const { return p_; }
  const Real& e() const { return energy_; }

 private:
  Vec3 p_;
  Real energy_;
};

/// Direction on the unit sphere.
class UnitVector {
 public:
  UnitVector() : w_(Real(0), Real(0), Real(1)) {}
  /// Normalizes v. Throws DegenerateInput when |v| is below threshold.
  static UnitVector normalize(const Vec3& v);
  /// Adopts v as-is; caller guarantees |v| = 1 to working precision.
  static UnitVector trusted(Vec3 v);

  const Vec3& vec() const { return w_; }

 private:
  explicit UnitVector(Vec3 w) : w_(std::move(w)) {}
  Vec3 w_;
};

/// Relative momentum g = sqrt(2(p0 q0 - p.q - 1)) >= 0, symmetric in (p, q).
/// Throws NumericInconsistency if the radicand is negative beyond rounding.
Real relative_momentum(const Momentum& p, const Momentum& q);

/// s = 2(p0 q0 - p.q + 1) = g^2 + 4, the squared total energy.
Real total_energy_sq(const Momentum& p, const Momentum& q);

/// gamma - 1 in the cancellation-free form |p+q|^2 / (sqrt(s)(p0+q0+sqrt(s))).
Real lorentz_gamma_minus_one(const Momentum& p, const Momentum& q);

/// gamma = (p0 + q0) / sqrt(s) >= 1, computed as 1 + (gamma - 1).
Real lorentz_gamma(const Momentum& p, const Momentum& q);

/// Invariant pair quantities, bundled.
struct CollisionPair {
  Momentum p, q;
  Real g, s, gamma;
};

CollisionPair make_pair(Momentum p, Momentum q);

/// Post-collisional momenta (p', q') in center-of-momentum form. The shared
/// half-sum/offset split makes p' + q' = p + q at the expression level.
std::pair<Momentum, Momentum> post_collisional(const Momentum& p, const Momentum& q,
                                               const UnitVector& w);

/// cos(scattering angle) = (k/|k|) . w. Throws DegenerateInput when |k| is
/// below threshold (k = 0 at p = q).
Real scattering_cos(const Momentum& p, const Momentum& q, const UnitVector& w);

/// True iff cos(scattering angle) >= 0.
bool angle_condition(const Momentum& p, const Momentum& q, const UnitVector& w);

/// Moller velocity g sqrt(s) / (p0 q0).
Real moller_velocity(const Momentum& p, const Momentum& q);

/// The collision map u = theta p' + (1 - theta) p.
Vec3 u_map(const Real& theta, const Momentum& p, const Momentum& q, const UnitVector& w);

/// Point of the 10-dimensional parameter space (theta, p, q, w).
struct ConfigPoint {
  Real theta;
  Momentum p, q;
  UnitVector w;
};

}  // namespace comjac
