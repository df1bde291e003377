#include "comjac/verify.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "comjac/errors.hpp"
#include "comjac/jacobian.hpp"
#include "comjac/kinematics.hpp"
#include "comjac/limitcase.hpp"
#include "comjac/rng.hpp"

namespace comjac {

namespace {

struct Sample {
  Real theta;
  Momentum p, q;
  UnitVector w;
};

Sample draw_admissible(RngStream& rng, double box, double theta_lo = 0.01,
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

class Suite {
 public:
  Suite(VerifyReport& report, std::string name) : report_(report), name_(std::move(name)) {}

  void fail(const std::string& why) {
    ok_ = false;
    if (detail_.empty()) detail_ = why;
  }

  void note(const std::string& what) {
    if (detail_.empty()) detail_ = what;
  }

  ~Suite() {
    report_.lines.push_back({name_, ok_, detail_});
    if (!ok_) report_.all_pass = false;
  }

 private:
  VerifyReport& report_;
  std::string name_;
  bool ok_ = true;
  std::string detail_;
};

Real rel_to_unit(const Real& err, const Real& scale) { return err / max(Real(1), scale); }

}  // namespace

VerifyReport run_verification(Precision precision_bits, long samples, std::uint64_t seed) {
  if (samples <= 0) {
    throw std::invalid_argument("sample count must be positive");
  }
  PrecisionScope scope(precision_bits);
  VerifyReport report;
  const Precision wp = precision_bits;
  const double box = 10.0;

  {
    Suite suite(report, "conservation (p'+q' = p+q, energies)");
    RngStream rng(RngStream::derive_seed(seed, 1, 0));
    Real tol = Real::pow2(-(wp - 16));
    for (long i = 0; i < samples; ++i) {
      Sample s = draw_admissible(rng, box);
      auto [pp, qp] = post_collisional(s.p, s.q, s.w);
      Vec3 dm = (pp.vec() + qp.vec()) - (s.p.vec() + s.q.vec());
      Real scale = max(norm(s.p.vec()), norm(s.q.vec())) + 1;
      if (rel_to_unit(norm(dm), scale) > tol) {
        suite.fail("momentum residual " + norm(dm).to_string(6));
      }
      Real de = abs((pp.e() + qp.e()) - (s.p.e() + s.q.e()));
      if (de / (s.p.e() + s.q.e()) > tol) {
        suite.fail("energy residual " + de.to_string(6));
      }
    }
  }

  {
    Suite suite(report, "relative momentum bounds (|p-q|/sqrt(p0 q0) <= g <= |p-q|)");
    RngStream rng(RngStream::derive_seed(seed, 2, 0));
    Real slack = Real::pow2(-(wp - 16));
    for (long i = 0; i < samples; ++i) {
      Sample s = draw_admissible(rng, box);
      Real g = relative_momentum(s.p, s.q);
      Real pq = norm(s.p.vec() - s.q.vec());
      Real lower = pq / sqrt(s.p.e() * s.q.e());
      if (g > pq * (1 + slack) || g < lower * (1 - slack)) {
        suite.fail("bounds violated at g = " + g.to_string(6));
      }
    }
  }

  {
    Suite suite(report, "s = g^2 + 4 and Moller/gamma dual forms");
    RngStream rng(RngStream::derive_seed(seed, 3, 0));
    Real tol_s = Real::pow2(-(wp - 8));
    Real tol_g = Real::pow2(-(wp - 16));
    Real tol_m = Real::pow2(-(wp - 20));
    for (long i = 0; i < samples; ++i) {
      Sample s = draw_admissible(rng, box);
      Real g = relative_momentum(s.p, s.q);
      Real sv = total_energy_sq(s.p, s.q);
      if (abs(sv - (g * g + 4)) / sv > tol_s) {
        suite.fail("s - g^2 - 4 = " + (sv - (g * g + 4)).to_string(6));
      }
      Real gm1 = lorentz_gamma_minus_one(s.p, s.q);
      Real gm1_direct = (s.p.e() + s.q.e()) / sqrt(sv) - 1;
      if (abs(gm1 - gm1_direct) / max(gm1, Real::pow2(-(wp / 2))) > tol_g) {
        suite.fail("gamma-1 dual forms disagree");
      }
      if (gm1 < 0) suite.fail("gamma - 1 negative");
      // the velocity-space form carries a factor 2 under this g convention
      Vec3 phat = s.p.vec() / s.p.e();
      Vec3 qhat = s.q.vec() / s.q.e();
      Real lhs = sqrt(norm_sq(phat - qhat) - norm_sq(cross(phat, qhat)));
      Real rhs = moller_velocity(s.p, s.q);
      if (abs(2 * lhs - rhs) / max(rhs, Real::pow2(-(wp / 2))) > tol_m) {
        suite.fail("Moller velocity dual forms disagree");
      }
    }
  }

  {
    Suite suite(report, "scattering cosine within [-1, 1] and angle condition");
    RngStream rng(RngStream::derive_seed(seed, 4, 0));
    Real slack = 1 + Real::pow2(-(wp - 16));
    for (long i = 0; i < samples; ++i) {
      Sample s = draw_admissible(rng, box);
      try {
        Real c = scattering_cos(s.p, s.q, s.w);
        if (abs(c) > slack) suite.fail("|cos| = " + abs(c).to_string(6));
        if ((c >= 0) != angle_condition(s.p, s.q, s.w)) suite.fail("angle condition mismatch");
      } catch (const DegenerateInput&) {
      }
    }
  }

  {
    Suite suite(report, "A in (1-theta, 1), |K| < 1, K = (2/theta)(A-1+theta/2)");
    RngStream rng(RngStream::derive_seed(seed, 5, 0));
    Real tol = Real::pow2(-(wp - 24));
    for (long i = 0; i < samples; ++i) {
      Sample s = draw_admissible(rng, box);
      AForm af = det_A_form(s.theta, s.p, s.q, s.w);
      KForm kf = det_K_form(s.theta, s.p, s.q, s.w);
      if (!(af.A > 1 - s.theta && af.A < 1)) suite.fail("A out of range: " + af.A.to_string(8));
      if (!(abs(kf.K) < 1)) suite.fail("|K| >= 1: " + kf.K.to_string(8));
      Real k_from_a = 2 / s.theta * (af.A - 1 + s.theta / 2);
      if (abs(k_from_a - kf.K) > tol * max(Real(1), abs(kf.K))) {
        suite.fail("K identity violated");
      }
      ScalarCoeffs sc = scalar_coeffs(s.theta, s.p, s.q, s.w);
      if (sc.D != sc.C || sc.E != sc.B || sc.G != sc.F) {
        suite.fail("scalar identities D=C, E=B, G=F violated");
      }
    }
  }

  {
    Suite suite(report, "three-way determinant agreement");
    RngStream rng(RngStream::derive_seed(seed, 6, 0));
    Real tol = Real::pow2(-(wp - 24));
    Real worst(0);
    for (long i = 0; i < samples; ++i) {
      Sample s = draw_admissible(rng, box);
      JacobianReport rep = jacobian_report(s.theta, s.p, s.q, s.w);
      Real scale = max(Real(1), abs(rep.det_A));
      Real gap = max(abs(rep.det_matrix - rep.det_A), abs(rep.det_K - rep.det_A)) / scale;
      worst = max(worst, gap);
      if (gap > tol) suite.fail("routes disagree by " + gap.to_string(6));
    }
    suite.note("worst rel gap " + worst.to_string(4));
  }

  {
    Suite suite(report, "row-reduction identity P1 = 1");
    RngStream rng(RngStream::derive_seed(seed, 7, 0));
    Real tol = Real::pow2(-(wp - 24));
    long checked = 0;
    while (checked < samples) {
      Sample s = draw_admissible(rng, box);
      BasisTriple t = basis_triple(s.p, s.q, s.w);
      if (t.degenerate || abs(t.c) < degeneracy_threshold() || t.e < degeneracy_threshold() ||
          detail::p1_amplification(t, s.p) > Real::pow2(16)) {
        continue;
      }
      ++checked;
      Real p1 = detail::recompute_p1(t, s.p);
      if (abs(p1 - 1) > tol) suite.fail("P1 - 1 = " + (p1 - 1).to_string(6));
    }
  }

  {
    Suite suite(report, "finite-difference oracle (order-2 convergence)");
    RngStream rng(RngStream::derive_seed(seed, 8, 0));
    long points = samples < 8 ? samples : 8;
    for (long i = 0; i < points; ++i) {
      Sample s = draw_admissible(rng, box);
      Matrix3 an = jacobian_matrix(s.theta, s.p, s.q, s.w);
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int n = 0;
      for (int k = 0; k < 8; ++k) {
        Real h = Real::pow2(-(12 + k));
        Matrix3 fd = fd_jacobian(s.theta, s.p, s.q, s.w, h);
        Real err(0);
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) err = max(err, abs(fd(r, c) - an(r, c)));
        if (err.is_zero()) continue;
        double x = -(12.0 + k);
        double y = log2(err).to_double();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
      }
      double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      if (std::abs(slope - 2.0) > 0.1) {
        std::ostringstream os;
        os << "fitted order " << slope;
        suite.fail(os.str());
      }
    }
  }

  {
    Suite suite(report, "special-ray checks (dual route, asymptote decay)");
    std::vector<Real> mags;
    for (int k = 2; k <= 6; ++k) mags.push_back(pow_int(Real(10), k));
    try {
      ConvergenceTable table = convergence_table(Real::from_string("0.7"), mags);
      for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (!(table.rows[i].deviation_asymptote < table.rows[i - 1].deviation_asymptote)) {
          suite.fail("asymptote deviation not decreasing");
        }
      }
      if (!(table.alpha_asymptote > 0)) suite.fail("non-positive decay exponent");
      if (!closed_form_limit(Real(1)).is_zero()) suite.fail("closed form nonzero at theta = 1");
    } catch (const Error& e) {
      suite.fail(e.what());
    }
  }

  {
    Suite suite(report, "u_map is affine in theta and the identity at theta = 0");
    RngStream rng(RngStream::derive_seed(seed, 9, 0));
    Real tol = Real::pow2(-(wp - 16));
    for (long i = 0; i < samples; ++i) {
      Sample s = draw_admissible(rng, box);
      Vec3 u0 = u_map(Real(0), s.p, s.q, s.w);
      if (!(u0 == s.p.vec())) suite.fail("u(0) != p");
      Vec3 u1 = u_map(Real(1), s.p, s.q, s.w);
      Vec3 uh = u_map(Real::pow2(-1), s.p, s.q, s.w);
      Vec3 mid = Real::pow2(-1) * (u0 + u1);
      Real scale = norm(u1) + norm(u0) + 1;
      if (norm(uh - mid) / scale > tol) suite.fail("u not affine in theta");
    }
  }

  return report;
}

}  // namespace comjac
