#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "comjac/dataset.hpp"
#include "comjac/errors.hpp"
#include "comjac/jacobian.hpp"
#include "comjac/kinematics.hpp"
#include "comjac/limitcase.hpp"
#include "comjac/verify.hpp"
#include "comjac/version.hpp"
#include "comjac/zerohunt.hpp"

namespace {

using namespace comjac;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Vec3 parse_vec3(const std::string& csv) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : csv) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) {
    throw UsageError("expected three comma-separated decimals, got '" + csv + "'");
  }
  try {
    return Vec3{Real::from_string(parts[0]), Real::from_string(parts[1]),
                Real::from_string(parts[2])};
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + " in '" + csv + "'");
  }
}

Real parse_real_arg(const std::string& s, const char* what) {
  try {
    return Real::from_string(s);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string("invalid ") + what + ": '" + s + "'");
  }
}

/// Resolves --out against COMJAC_OUT_DIR for relative paths.
std::string resolve_out(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("COMJAC_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string d(dir);
  if (d.back() != '/') d.push_back('/');
  return d + path;
}

FileFormat resolve_format(const std::string& format_flag, const std::string& path) {
  std::optional<FileFormat> from_ext;
  auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    if (ext == "json") from_ext = FileFormat::json;
    if (ext == "csv") from_ext = FileFormat::csv;
  }
  if (format_flag.empty()) {
    return from_ext.value_or(FileFormat::csv);
  }
  FileFormat flag = format_flag == "json" ? FileFormat::json : FileFormat::csv;
  if (from_ext && *from_ext != flag) {
    throw UsageError("--format " + format_flag + " conflicts with the extension of '" + path +
                     "'");
  }
  return flag;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  auto dot = path.rfind('.');
  auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

struct SearchFlags {
  Precision precision_bits = kDefaultPrecision;
  std::uint64_t seed = 1;
  long max_iters = 100000;
  double ball_radius = 0.5;
  double init_box = 10.0;
  std::string zero_threshold;
  long bisect_max_steps = 0;
  int searches = 50;
  int extra_pairs = 49;

  void attach(CLI::App* cmd) {
    cmd->add_option("--precision-bits", precision_bits, "working precision in bits (default 200)");
    cmd->add_option("--seed", seed, "master RNG seed");
    cmd->add_option("--max-iters", max_iters, "random-search iteration cap (default 100000)");
    cmd->add_option("--ball-radius", ball_radius, "proposal ball radius (default 0.5)");
    cmd->add_option("--init-box", init_box, "initial sampling box half-width (default 10)");
    cmd->add_option("--zero-threshold", zero_threshold,
                    "machine-zero threshold (default 2^-(precision-40))");
    cmd->add_option("--bisect-max-steps", bisect_max_steps,
                    "bisection step cap (default precision+64)");
    cmd->add_option("--searches", searches, "random searches per theta (default 50)");
    cmd->add_option("--extra-pairs", extra_pairs,
                    "extra positive endpoints bisected per success (default 49)");
  }

  SearchParams params() const {
    if (precision_bits < kMinPrecision) {
      throw UsageError("--precision-bits must be at least 53");
    }
    SearchParams p;
    p.precision_bits = precision_bits;
    p.seed = seed;
    p.max_iters = max_iters;
    p.ball_radius = ball_radius;
    p.init_box = init_box;
    p.bisect_max_steps = bisect_max_steps;
    p.searches_per_theta = searches;
    p.extra_positive_pairs = extra_pairs;
    if (!zero_threshold.empty()) {
      PrecisionScope scope(precision_bits);
      p.zero_threshold = parse_real_arg(zero_threshold, "--zero-threshold");
      if (!(p.zero_threshold > 0)) throw UsageError("--zero-threshold must be positive");
    }
    return p;
  }
};

DatasetMeta make_meta(const SearchParams& params, const std::string& grid) {
  DatasetMeta meta;
  meta.tool_version = kVersion;
  meta.precision_bits = params.precision_bits;
  meta.seed = params.seed;
  meta.grid = grid;
  meta.generated = reproducible_timestamp();
  return meta;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const std::string& theta_s, const std::string& p_s, const std::string& q_s,
             const std::string& w_s, Precision precision, const std::string& format,
             const std::string& out) {
  PrecisionScope scope(precision);
  Real theta = parse_real_arg(theta_s, "--theta");
  if (!(theta >= 0 && theta <= 1)) throw UsageError("--theta must lie in [0, 1]");
  Momentum p(parse_vec3(p_s));
  Momentum q(parse_vec3(q_s));
  UnitVector w = UnitVector::normalize(parse_vec3(w_s));

  JacobianReport rep = jacobian_report(theta, p, q, w);
  Real res_ma = abs(rep.det_matrix - rep.det_A) / max(Real(1), abs(rep.det_A));
  Real res_ka = abs(rep.det_K - rep.det_A) / max(Real(1), abs(rep.det_A));
  std::string cos_s = "nan";
  int angle_ok = 0;
  try {
    Real c = scattering_cos(p, q, w);
    cos_s = c.to_string();
    angle_ok = c >= 0 ? 1 : 0;
  } catch (const DegenerateInput&) {
  }

  if (format == "json") {
    nlohmann::json j{
        {"theta", theta.to_string()},
        {"precision_bits", static_cast<long>(precision)},
        {"A", rep.A.to_string()},
        {"P2", rep.P2.to_string()},
        {"P3", rep.P3.to_string()},
        {"K", rep.K.to_string()},
        {"D1", rep.D1.to_string()},
        {"D2", rep.D2.to_string()},
        {"D3", rep.D3.to_string()},
        {"D4", rep.D4.to_string()},
        {"det_matrix", rep.det_matrix.to_string()},
        {"det_A_form", rep.det_A.to_string()},
        {"det_K_form", rep.det_K.to_string()},
        {"cos_scatter", cos_s},
        {"angle_ok", angle_ok == 1},
        {"residual_matrix_vs_A", res_ma.to_string(8)},
        {"residual_K_vs_A", res_ka.to_string(8)},
    };
    nlohmann::json m = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < 3; ++k) row.push_back(rep.matrix(i, k).to_string());
      m.push_back(row);
    }
    j["matrix"] = m;
    std::string text = j.dump(2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      atomic_write(resolve_out(out), text);
    }
    return kExitOk;
  }

  std::ostringstream os;
  os << "theta: " << theta << "\n";
  os << "precision_bits: " << precision << "\n";
  for (int i = 0; i < 3; ++i) {
    os << (i == 0 ? "matrix: [" : "        [");
    for (int k = 0; k < 3; ++k) os << " " << rep.matrix(i, k).to_string(12);
    os << " ]\n";
  }
  os << "A: " << rep.A << "\n";
  os << "P2: " << rep.P2 << "\n";
  os << "P3: " << rep.P3 << "\n";
  os << "K: " << rep.K << "\n";
  os << "D1: " << rep.D1 << "\n";
  os << "D2: " << rep.D2 << "\n";
  os << "D3: " << rep.D3 << "\n";
  os << "D4: " << rep.D4 << "\n";
  os << "det_matrix: " << rep.det_matrix << "\n";
  os << "det_A_form: " << rep.det_A << "\n";
  os << "det_K_form: " << rep.det_K << "\n";
  os << "cos_scatter: " << cos_s << "\n";
  os << "angle_ok: " << angle_ok << "\n";
  os << "residual_matrix_vs_A: " << res_ma.to_string(8) << "\n";
  os << "residual_K_vs_A: " << res_ka.to_string(8) << "\n";
  if (out.empty()) {
    std::cout << os.str();
  } else {
    atomic_write(resolve_out(out), os.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// hunt

int cmd_hunt(const std::string& theta_s, const SearchFlags& flags, bool stop_first,
             const std::string& out, const std::string& format) {
  SearchParams params = flags.params();
  PrecisionScope scope(params.precision_bits);
  Real theta = parse_real_arg(theta_s, "--theta");
  if (!(theta > 0 && theta <= 1)) throw UsageError("--theta must lie in (0, 1]");
  int theta_index = static_cast<int>((theta * 100).to_double() + 0.5);

  HuntResult res = hunt_theta(theta, theta_index, params, flags.searches, stop_first);
  std::cout << "theta=" << theta.to_string(6) << " searches=" << res.searches_run
            << " successes=" << res.successes << " records=" << res.records.size() << "\n";
  for (const auto& r : res.records) {
    std::cout << "  |det|=" << abs(r.det_value).to_string(6)
              << " width=" << r.bracket_width.to_string(6) << " angle_ok=" << (r.angle_ok ? 1 : 0)
              << " iters=" << r.iterations_used << "\n";
  }
  if (res.records.empty()) {
    std::cout << "no zeros found (random search exhausted its budget)\n";
  }
  if (!out.empty()) {
    Dataset ds{make_meta(params, "theta=" + theta.to_string(6) + " (single)"), res.records};
    std::string path = resolve_out(out);
    write_dataset(ds, path, resolve_format(format, path));
    std::cout << "wrote " << path << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const SearchFlags& flags, int threads, const std::string& out,
              const std::string& format, bool filtered_only, bool unfiltered_only) {
  SearchParams params = flags.params();
  PrecisionScope scope(params.precision_bits);
  if (out.empty()) throw UsageError("sweep requires --out");
  if (threads < 1) throw UsageError("--threads must be >= 1");

  SweepResult res = theta_sweep(params, threads);

  long total = 0, kept = 0, successes = 0;
  for (const auto& st : res.stats) {
    std::cout << "theta=0." << (st.theta_index < 10 ? "0" : "") << st.theta_index
              << " successes=" << st.successes << "/" << st.searches << " roots=" << st.records
              << " kept=" << st.records_kept << " filtered=" << (st.records - st.records_kept)
              << "\n";
    total += st.records;
    kept += st.records_kept;
    successes += st.successes;
  }
  std::cout << "total: successes=" << successes << " roots=" << total << " kept=" << kept << "\n";

  std::string grid = "theta=0.01..0.99 step 0.01";
  std::string path = resolve_out(out);
  FileFormat ff = resolve_format(format, path);
  if (!unfiltered_only) {
    Dataset filtered{make_meta(params, grid + " (angle-filtered)"), angle_filtered(res.records)};
    write_dataset(filtered, path, ff);
    std::cout << "wrote " << path << " (" << filtered.rows.size() << " rows)\n";
  }
  if (!filtered_only) {
    std::string upath = unfiltered_only ? path : with_suffix(path, ".unfiltered");
    Dataset unfiltered{make_meta(params, grid + " (unfiltered)"), res.records};
    write_dataset(unfiltered, upath, ff);
    std::cout << "wrote " << upath << " (" << unfiltered.rows.size() << " rows)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// limits

int cmd_limits(const std::string& theta_s, const std::string& qmags_s, Precision precision) {
  PrecisionScope scope(precision);
  std::vector<Real> thetas;
  if (theta_s.empty()) {
    thetas = {Real::from_string("0.1"), Real::from_string("0.5"), Real::from_string("0.9")};
  } else {
    thetas.push_back(parse_real_arg(theta_s, "--theta"));
  }
  std::vector<Real> qmags;
  if (qmags_s.empty()) {
    for (int k = 2; k <= 8; ++k) qmags.push_back(pow_int(Real(10), k));
  } else {
    std::string cur;
    for (char ch : qmags_s + ",") {
      if (ch == ',') {
        if (!cur.empty()) qmags.push_back(parse_real_arg(cur, "--qmags"));
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
  }

  for (const Real& theta : thetas) {
    ConvergenceTable table = convergence_table(theta, qmags);
    std::cout << "theta=" << theta.to_string(6)
              << " closed_form=" << closed_form_limit(theta).to_string(12)
              << " asymptote=" << ray_asymptote(theta).to_string(12) << "\n";
    std::cout << "  q_mag            det                 |det-closed_form|   |det-asymptote|\n";
    for (const auto& row : table.rows) {
      std::cout << "  " << row.q_mag.to_string(6) << "   " << row.det.to_string(16) << "   "
                << row.deviation.to_string(6) << "   " << row.deviation_asymptote.to_string(6)
                << "\n";
    }
    std::cout << "  fitted decay exponent: vs closed_form " << table.alpha_closed_form
              << ", vs asymptote " << table.alpha_asymptote << "\n";
  }
  std::cout << "closed_form_limit(1) = " << closed_form_limit(Real(1)) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(Precision precision, long samples, std::uint64_t seed) {
  if (samples == 0) throw UsageError("--samples must be positive");
  VerifyReport report = run_verification(precision, samples, seed);
  for (const auto& line : report.lines) {
    std::cout << (line.pass ? "[ok]   " : "[FAIL] ") << line.name;
    if (!line.detail.empty()) std::cout << " -- " << line.detail;
    std::cout << "\n";
  }
  std::cout << (report.all_pass ? "verification passed" : "verification FAILED") << "\n";
  return report.all_pass ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// export

int cmd_export(const std::string& in, const std::string& which_s, const std::string& out) {
  Dataset ds = read_dataset(in);
  WhichVector which =
      which_s == "p" ? WhichVector::p : (which_s == "q" ? WhichVector::q : WhichVector::w);
  std::string text = plotdata_csv(ds, which);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::string path = resolve_out(out);
    atomic_write(path, text);
    std::cout << "wrote " << path << " (" << ds.rows.size() << " rows)\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Jacobian determinants of the relativistic collision map p -> theta p' + (1-theta) p "
      "in center-of-momentum coordinates, with a high-precision zero-hunting pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", comjac::kVersion);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate the Jacobian at one configuration");
  std::string theta_s, p_s, q_s, w_s, format, out;
  comjac::Precision precision = comjac::kDefaultPrecision;
  eval->add_option("--theta", theta_s, "interpolation parameter in [0, 1]")->required();
  eval->add_option("--p", p_s, "momentum p as x,y,z")->required();
  eval->add_option("--q", q_s, "momentum q as x,y,z")->required();
  eval->add_option("--w", w_s, "direction w as x,y,z (normalized internally)")->required();
  eval->add_option("--precision-bits", precision, "working precision in bits (default 200)");
  eval->add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"json", "text", ""}));
  eval->add_option("--out", out, "write to this path instead of stdout");

  // hunt
  auto* hunt = app.add_subcommand("hunt", "random search + bisection at a single theta");
  SearchFlags hunt_flags;
  std::string hunt_theta_s, hunt_out, hunt_format;
  bool stop_first = false;
  hunt->add_option("--theta", hunt_theta_s, "theta in (0, 1]")->required();
  hunt_flags.attach(hunt);
  hunt->add_flag("--stop-first", stop_first, "stop after the first successful search");
  hunt->add_option("--out", hunt_out, "write records to this dataset path");
  hunt->add_option("--format", hunt_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json", ""}));

  // sweep
  auto* sweep = app.add_subcommand("sweep", "full pipeline over theta = 0.01..0.99");
  SearchFlags sweep_flags;
  std::string sweep_out, sweep_format;
  int threads = 1;
  bool filtered_only = false, unfiltered_only = false;
  sweep_flags.attach(sweep);
  sweep->add_option("--threads", threads, "worker threads (output is independent of this)");
  sweep->add_option("--out", sweep_out, "dataset path (angle-filtered rows)")->required();
  sweep->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json", ""}));
  auto* fo = sweep->add_flag("--filtered", filtered_only, "write only the filtered dataset");
  sweep->add_flag("--unfiltered", unfiltered_only, "write only the unfiltered dataset")
      ->excludes(fo);

  // limits
  auto* limits = app.add_subcommand("limits", "determinant along the ray p = 0, q = -|q| w");
  std::string lim_theta_s, lim_qmags;
  comjac::Precision lim_precision = comjac::kDefaultPrecision;
  limits->add_option("--theta", lim_theta_s, "single theta (default 0.1, 0.5, 0.9)");
  limits->add_option("--qmags", lim_qmags, "comma-separated |q| values (default 1e2..1e8)");
  limits->add_option("--precision-bits", lim_precision, "working precision in bits");

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suites of every module");
  comjac::Precision ver_precision = comjac::kDefaultPrecision;
  long ver_samples = 200;
  std::uint64_t ver_seed = 1;
  verify->add_option("--precision-bits", ver_precision, "working precision in bits");
  verify->add_option("--samples", ver_samples, "random configurations per suite (default 200)");
  verify->add_option("--seed", ver_seed, "RNG seed");

  // export
  auto* exp = app.add_subcommand("export", "angular plot data from a dataset");
  std::string exp_in, exp_which, exp_out;
  exp->add_option("--in", exp_in, "dataset file (csv or json)")->required();
  exp->add_option("--which", exp_which, "which vector: p, q or w")
      ->required()
      ->check(CLI::IsMember({"p", "q", "w"}));
  exp->add_option("--out", exp_out, "write to this path instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(theta_s, p_s, q_s, w_s, precision, format, out);
    if (*hunt) return cmd_hunt(hunt_theta_s, hunt_flags, stop_first, hunt_out, hunt_format);
    if (*sweep)
      return cmd_sweep(sweep_flags, threads, sweep_out, sweep_format, filtered_only,
                       unfiltered_only);
    if (*limits) return cmd_limits(lim_theta_s, lim_qmags, lim_precision);
    if (*verify) return cmd_verify(ver_precision, ver_samples, ver_seed);
    if (*exp) return cmd_export(exp_in, exp_which, exp_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const comjac::IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const comjac::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
