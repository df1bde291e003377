#pragma once

#include "comjac/errors.hpp"
#include "comjac/jacobian.hpp"
#include "comjac/kinematics.hpp"
#include "comjac/real.hpp"
#include "comjac/rng.hpp"

namespace comjac::testutil {

inline Real tol_bits(int headroom) { return Real::pow2(-(working_precision() - headroom)); }

/// |a - b| relative to max(1, |b|).
inline Real rel_gap(const Real& a, const Real& b) { return abs(a - b) / max(Real(1), abs(b)); }

struct Sample {
  Real theta;
  Momentum p, q;
  UnitVector w;
};

inline Sample draw_admissible(RngStream& rng, double box, double theta_lo = 0.01,
                              double theta_hi = 0.99) {
  for (;;) {
    Sample s;
    s.theta = Real(rng.uniform(theta_lo, theta_hi));
    s.p = Momentum(Vec3{Real(rng.uniform(-box, box)), Real(rng.uniform(-box, box)),
                        Real(rng.uniform(-box, box))});
    s.q = Momentum(Vec3{Real(rng.uniform(-box, box)), Real(rng.uniform(-box, box)),
                        Real(rng.uniform(-box, box))});
    auto a = rng.on_sphere();
    s.w = UnitVector::normalize(Vec3{Real(a[0]), Real(a[1]), Real(a[2])});
    try {
      require_admissible(s.p, s.q);
      return s;
    } catch (const DegenerateInput&) {
    }
  }
}

}  // namespace comjac::testutil
