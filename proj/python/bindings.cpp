#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "comjac/dataset.hpp"
#include "comjac/errors.hpp"
#include "comjac/jacobian.hpp"
#include "comjac/kinematics.hpp"
#include "comjac/limitcase.hpp"
#include "comjac/verify.hpp"
#include "comjac/version.hpp"
#include "comjac/zerohunt.hpp"

namespace py = pybind11;
using namespace comjac;

namespace {

Real to_real(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) {
    return Real::from_string(obj.cast<std::string>());
  }
  return Real(obj.cast<double>());
}

Vec3 to_vec3(const py::object& obj) {
  auto seq = obj.cast<py::sequence>();
  if (py::len(seq) != 3) {
    throw py::value_error("expected a sequence of three numbers or decimal strings");
  }
  return Vec3{to_real(seq[0]), to_real(seq[1]), to_real(seq[2])};
}

py::list vec_out(const Vec3& v) {
  py::list out;
  out.append(v.x.to_string());
  out.append(v.y.to_string());
  out.append(v.z.to_string());
  return out;
}

py::dict record_out(const RootRecord& r) {
  py::dict d;
  d["theta"] = r.theta.to_string();
  d["p"] = vec_out(r.p);
  d["q"] = vec_out(r.q);
  d["w"] = vec_out(r.w);
  d["det"] = r.det_value.to_string();
  d["bracket_width"] = r.bracket_width.to_string();
  d["cos_scatter"] = r.cos_scatter.is_nan() ? std::string("nan") : r.cos_scatter.to_string();
  d["angle_ok"] = r.angle_ok;
  d["seed"] = r.seed;
  d["iterations"] = r.iterations_used;
  return d;
}

SearchParams make_params(Precision precision_bits, std::uint64_t seed, long max_iters,
                         double ball_radius, double init_box, int extra_pairs) {
  SearchParams p;
  p.precision_bits = precision_bits;
  p.seed = seed;
  p.max_iters = max_iters;
  p.ball_radius = ball_radius;
  p.init_box = init_box;
  p.extra_positive_pairs = extra_pairs;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jacobian determinants of the relativistic collision map in center-of-momentum "
            "coordinates, at arbitrary precision. Values cross the boundary as decimal strings "
            "carrying the full working precision.";
  m.attr("__version__") = kVersion;

  py::register_exception<DegenerateInput>(m, "DegenerateInputError");
  py::register_exception<NumericInconsistency>(m, "NumericInconsistencyError");

  m.def(
      "eval_report",
      [](const py::object& theta, const py::object& p, const py::object& q, const py::object& w,
         Precision precision_bits) {
        PrecisionScope scope(precision_bits);
        Real th = to_real(theta);
        Momentum mp(to_vec3(p)), mq(to_vec3(q));
        UnitVector uw = UnitVector::normalize(to_vec3(w));
        JacobianReport rep = jacobian_report(th, mp, mq, uw);
        py::dict d;
        d["theta"] = th.to_string();
        d["A"] = rep.A.to_string();
        d["P2"] = rep.P2.to_string();
        d["P3"] = rep.P3.to_string();
        d["K"] = rep.K.to_string();
        d["D1"] = rep.D1.to_string();
        d["D2"] = rep.D2.to_string();
        d["D3"] = rep.D3.to_string();
        d["D4"] = rep.D4.to_string();
        d["det_matrix"] = rep.det_matrix.to_string();
        d["det_A_form"] = rep.det_A.to_string();
        d["det_K_form"] = rep.det_K.to_string();
        py::list rows;
        for (int i = 0; i < 3; ++i) {
          py::list row;
          for (int k = 0; k < 3; ++k) row.append(rep.matrix(i, k).to_string());
          rows.append(row);
        }
        d["matrix"] = rows;
        try {
          Real c = scattering_cos(mp, mq, uw);
          d["cos_scatter"] = c.to_string();
          d["angle_ok"] = c >= 0;
        } catch (const DegenerateInput&) {
          d["cos_scatter"] = std::string("nan");
          d["angle_ok"] = false;
        }
        return d;
      },
      py::arg("theta"), py::arg("p"), py::arg("q"), py::arg("w"),
      py::arg("precision_bits") = kDefaultPrecision,
      "Jacobian matrix and all three determinant routes at one configuration.");

  m.def(
      "post_collisional",
      [](const py::object& p, const py::object& q, const py::object& w,
         Precision precision_bits) {
        PrecisionScope scope(precision_bits);
        Momentum mp(to_vec3(p)), mq(to_vec3(q));
        UnitVector uw = UnitVector::normalize(to_vec3(w));
        auto [pp, qp] = post_collisional(mp, mq, uw);
        return py::make_tuple(vec_out(pp.vec()), vec_out(qp.vec()));
      },
      py::arg("p"), py::arg("q"), py::arg("w"), py::arg("precision_bits") = kDefaultPrecision);

  m.def(
      "scattering_cos",
      [](const py::object& p, const py::object& q, const py::object& w,
         Precision precision_bits) {
        PrecisionScope scope(precision_bits);
        return scattering_cos(Momentum(to_vec3(p)), Momentum(to_vec3(q)),
                              UnitVector::normalize(to_vec3(w)))
            .to_string();
      },
      py::arg("p"), py::arg("q"), py::arg("w"), py::arg("precision_bits") = kDefaultPrecision);

  m.def(
      "angle_condition",
      [](const py::object& p, const py::object& q, const py::object& w,
         Precision precision_bits) {
        PrecisionScope scope(precision_bits);
        return angle_condition(Momentum(to_vec3(p)), Momentum(to_vec3(q)),
                               UnitVector::normalize(to_vec3(w)));
      },
      py::arg("p"), py::arg("q"), py::arg("w"), py::arg("precision_bits") = kDefaultPrecision);

  m.def(
      "closed_form_limit",
      [](const py::object& theta, Precision precision_bits) {
        PrecisionScope scope(precision_bits);
        return closed_form_limit(to_real(theta)).to_string();
      },
      py::arg("theta"), py::arg("precision_bits") = kDefaultPrecision);

  m.def(
      "ray_asymptote",
      [](const py::object& theta, Precision precision_bits) {
        PrecisionScope scope(precision_bits);
        return ray_asymptote(to_real(theta)).to_string();
      },
      py::arg("theta"), py::arg("precision_bits") = kDefaultPrecision);

  m.def(
      "special_point",
      [](const py::object& theta, const py::object& q_mag, Precision precision_bits) {
        PrecisionScope scope(precision_bits);
        LimitEvaluation ev = eval_special_point(to_real(theta), to_real(q_mag));
        py::dict d;
        d["theta"] = ev.theta.to_string();
        d["q_mag"] = ev.q_mag.to_string();
        d["A"] = ev.A.to_string();
        d["P2"] = ev.P2.to_string();
        d["P3"] = ev.P3.to_string();
        d["det"] = ev.det.to_string();
        d["closed_form"] = ev.closed_form.to_string();
        d["deviation"] = ev.deviation.to_string();
        d["asymptote"] = ev.asymptote.to_string();
        d["deviation_asymptote"] = ev.deviation_asymptote.to_string();
        return d;
      },
      py::arg("theta"), py::arg("q_mag"), py::arg("precision_bits") = kDefaultPrecision,
      "Determinant at p = 0, q = -q_mag w, dual-route checked.");

  m.def(
      "hunt",
      [](const py::object& theta, std::uint64_t seed, int searches, bool stop_first,
         long max_iters, double ball_radius, double init_box, int extra_pairs,
         Precision precision_bits, std::optional<int> theta_index) {
        SearchParams params =
            make_params(precision_bits, seed, max_iters, ball_radius, init_box, extra_pairs);
        PrecisionScope scope(precision_bits);
        Real th = to_real(theta);
        int ti = theta_index ? *theta_index : static_cast<int>((th * 100).to_double() + 0.5);
        HuntResult res = hunt_theta(th, ti, params, searches, stop_first);
        py::list out;
        for (const auto& r : res.records) out.append(record_out(r));
        return out;
      },
      py::arg("theta"), py::arg("seed") = 1, py::arg("searches") = 50,
      py::arg("stop_first") = true, py::arg("max_iters") = 100000, py::arg("ball_radius") = 0.5,
      py::arg("init_box") = 10.0, py::arg("extra_pairs") = 49,
      py::arg("precision_bits") = kDefaultPrecision, py::arg("theta_index") = std::nullopt,
      "Random search + bisection at one theta; returns located zeros as dicts.");

  m.def(
      "verify",
      [](long samples, std::uint64_t seed, Precision precision_bits) {
        VerifyReport rep = run_verification(precision_bits, samples, seed);
        py::list lines;
        for (const auto& line : rep.lines) {
          lines.append(py::make_tuple(line.name, line.pass, line.detail));
        }
        py::dict d;
        d["all_pass"] = rep.all_pass;
        d["lines"] = lines;
        return d;
      },
      py::arg("samples") = 64, py::arg("seed") = 1,
      py::arg("precision_bits") = kDefaultPrecision,
      "Run the invariant suites of every module.");
}
