#include "comjac/zerohunt.hpp"

#include <atomic>
#include <thread>

#include "comjac/errors.hpp"
#include "comjac/jacobian.hpp"

namespace comjac {

Real effective_zero_threshold(const SearchParams& params) {
  if (!params.zero_threshold.is_nan()) return params.zero_threshold;
  return Real::pow2(-(params.precision_bits - 40));
}

long effective_bisect_max_steps(const SearchParams& params) {
  return params.bisect_max_steps > 0 ? params.bisect_max_steps
                                     : static_cast<long>(params.precision_bits) + 64;
}

ConfigPoint path_point(const Segment& seg, const Real& t) {
  Real omt = 1 - t;
  ConfigPoint c;
  c.theta = seg.alpha.theta;
  c.p = Momentum(omt * seg.alpha.p.vec() + t * seg.beta.p.vec());
  c.q = Momentum(omt * seg.alpha.q.vec() + t * seg.beta.q.vec());
  Vec3 wlerp = omt * seg.alpha.w.vec() + t * seg.beta.w.vec();
  c.w = UnitVector::normalize(wlerp);  // throws DegenerateInput near antipodal
  return c;
}

Real hunt_det(const ConfigPoint& c) { return det_A_form(c.theta, c.p, c.q, c.w).det; }

namespace {

Vec3 vec_from(const std::array<double, 3>& a) {
  return Vec3{Real(a[0]), Real(a[1]), Real(a[2])};
}

ConfigPoint random_point(const Real& theta, const SearchParams& params, RngStream& rng) {
  ConfigPoint c;
  c.theta = theta;
  double b = params.init_box;
  c.p = Momentum(Vec3{Real(rng.uniform(-b, b)), Real(rng.uniform(-b, b)), Real(rng.uniform(-b, b))});
  c.q = Momentum(Vec3{Real(rng.uniform(-b, b)), Real(rng.uniform(-b, b)), Real(rng.uniform(-b, b))});
  c.w = UnitVector::normalize(vec_from(rng.on_sphere()));
  return c;
}

ConfigPoint propose_near(const ConfigPoint& cur, const SearchParams& params, RngStream& rng) {
  ConfigPoint c;
  c.theta = cur.theta;
  c.p = Momentum(cur.p.vec() + vec_from(rng.in_ball(params.ball_radius)));
  c.q = Momentum(cur.q.vec() + vec_from(rng.in_ball(params.ball_radius)));
  c.w = UnitVector::normalize(cur.w.vec() + vec_from(rng.in_ball(params.ball_radius)));
  return c;
}

}  // namespace

ConfigPoint sample_positive(const Real& theta, const SearchParams& params, RngStream& rng) {
  PrecisionScope scope(params.precision_bits);
  for (long tries = 0; tries < params.sample_max_rejections; ++tries) {
    ConfigPoint c = random_point(theta, params, rng);
    try {
      if (hunt_det(c) > 0) return c;
    } catch (const DegenerateInput&) {
    }
  }
  throw SamplingExhausted("no positive-determinant point found in " +
                          std::to_string(params.sample_max_rejections) + " draws");
}

std::optional<SearchSuccess> random_search_with(const std::function<Real(const ConfigPoint&)>& det,
                                                const Real& theta, const SearchParams& params,
                                                RngStream& rng) {
  PrecisionScope scope(params.precision_bits);

  ConfigPoint cur;
  Real cur_det;
  bool have_start = false;
  for (long tries = 0; tries < params.sample_max_rejections && !have_start; ++tries) {
    ConfigPoint c = random_point(theta, params, rng);
    try {
      cur_det = det(c);
      cur = std::move(c);
      have_start = true;
    } catch (const DegenerateInput&) {
    }
  }
  if (!have_start) {
    throw SamplingExhausted("no admissible starting point for the random search");
  }
  if (cur_det < 0) {
    return SearchSuccess{std::move(cur), std::nullopt, 0};
  }

  for (long it = 1; it <= params.max_iters; ++it) {
    ConfigPoint prop;
    Real prop_det;
    try {
      prop = propose_near(cur, params, rng);
      prop_det = det(prop);
    } catch (const DegenerateInput&) {
      continue;  // off the admissible set; resample
    }
    if (prop_det < cur_det) {
      if (prop_det < 0) {
        return SearchSuccess{std::move(prop), std::move(cur), it};
      }
      cur = std::move(prop);
      cur_det = std::move(prop_det);
    }
  }
  return std::nullopt;
}

std::optional<SearchSuccess> random_search(const Real& theta, const SearchParams& params,
                                           RngStream& rng) {
  return random_search_with(hunt_det, theta, params, rng);
}

Bracket bisect_scalar(const std::function<Real(const Real&)>& fn, const Real& zero_threshold,
                      const Real& width_threshold, long max_steps) {
  Real f_lo = fn(Real(0));
  Real f_hi = fn(Real(1));
  if (f_lo.sign() == f_hi.sign() || f_lo.sign() == 0 || f_hi.sign() == 0) {
    throw NoSignChange("endpoint values " + f_lo.to_string(8) + " and " + f_hi.to_string(8) +
                       " do not bracket a zero");
  }
  int sign_lo = f_lo.sign();

  Real lo(0), hi(1);
  Real mid, f_mid;
  bool have_mid = false;
  for (long step = 0; step < max_steps; ++step) {
    mid = lo + (hi - lo) / 2;
    if (mid == lo || mid == hi) break;  // t-resolution floor of the working precision
    f_mid = fn(mid);
    have_mid = true;
    if (f_mid.sign() == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
    Real width = hi - lo;
    if (abs(f_mid) < zero_threshold && width < width_threshold) {
      return Bracket{std::move(mid), std::move(f_mid), std::move(width)};
    }
  }
  if (have_mid) {
    throw BisectionStall("bracket exhausted at |value| = " + abs(f_mid).to_string(8));
  }
  throw BisectionStall("t resolution exhausted before any midpoint evaluation");
}

namespace {

struct BisectAttempt {
  bool ok = false;
  RootRecord record;
};

BisectAttempt bisect_once(const Segment& seg, const SearchParams& params, long iterations_used,
                          std::uint64_t stream_seed) {
  Real zthr = effective_zero_threshold(params);
  Real wthr = Real::pow2(-(params.precision_bits / 2));
  long max_steps = effective_bisect_max_steps(params);

  // DegenerateInput from evaluations propagates to the re-jitter layer.
  Bracket b = bisect_scalar([&](const Real& t) { return hunt_det(path_point(seg, t)); }, zthr,
                            wthr, max_steps);

  ConfigPoint root = path_point(seg, b.t);
  RootRecord rec;
  rec.theta = root.theta;
  rec.p = root.p.vec();
  rec.q = root.q.vec();
  rec.w = root.w.vec();
  rec.det_value = b.value;
  rec.bracket_width = b.width;
  try {
    rec.cos_scatter = scattering_cos(root.p, root.q, root.w);
    rec.angle_ok = rec.cos_scatter >= 0;
  } catch (const DegenerateInput&) {
    rec.cos_scatter = Real::nan();
    rec.angle_ok = false;
  }
  rec.seed = stream_seed;
  rec.iterations_used = iterations_used;
  return {true, std::move(rec)};
}

Segment jittered(const Segment& seg, const SearchParams& params, RngStream& rng) {
  double r = params.ball_radius * 1e-3;
  Segment out = seg;
  out.beta.p = Momentum(seg.beta.p.vec() + vec_from(rng.in_ball(r)));
  out.beta.q = Momentum(seg.beta.q.vec() + vec_from(rng.in_ball(r)));
  out.beta.w = UnitVector::normalize(seg.beta.w.vec() + vec_from(rng.in_ball(r)));
  return out;
}

RootRecord bisect_impl(const Segment& seg, const SearchParams& params, RngStream& rng,
                       long iterations_used, std::uint64_t stream_seed) {
  PrecisionScope scope(params.precision_bits);
  try {
    return bisect_once(seg, params, iterations_used, stream_seed).record;
  } catch (const DegenerateInput&) {
    // Path touched the p = q set (probability-zero event): re-jitter once.
    Segment again = jittered(seg, params, rng);
    try {
      return bisect_once(again, params, iterations_used, stream_seed).record;
    } catch (const DegenerateInput& e) {
      throw DiscontinuityCrossing(std::string("re-jittered path still degenerate: ") + e.what());
    }
  }
}

}  // namespace

RootRecord bisect(const Segment& seg, const SearchParams& params, RngStream& rng) {
  return bisect_impl(seg, params, rng, 0, rng.seed());
}

RootRecord bisect(const Segment& seg, const SearchParams& params) {
  RngStream rng(RngStream::derive_seed(params.seed, 0x6a5, 0));
  return bisect_impl(seg, params, rng, 0, rng.seed());
}

std::vector<RootRecord> run_search_task(const Real& theta, int theta_index, int search_index,
                                        const SearchParams& params) {
  PrecisionScope scope(params.precision_bits);
  std::uint64_t task_seed = RngStream::derive_seed(params.seed, static_cast<std::uint64_t>(theta_index),
                                                   static_cast<std::uint64_t>(search_index));
  RngStream rng(task_seed);
  std::vector<RootRecord> records;

  std::optional<SearchSuccess> found = random_search(theta, params, rng);
  if (!found) return records;

  const ConfigPoint& negative = found->negative;
  for (int pair = 0; pair <= params.extra_positive_pairs; ++pair) {
    ConfigPoint positive;
    if (pair == 0 && found->positive) {
      positive = *found->positive;
    } else {
      try {
        positive = sample_positive(theta, params, rng);
      } catch (const SamplingExhausted&) {
        continue;
      }
    }
    Segment seg{positive, negative};
    try {
      records.push_back(bisect_impl(seg, params, rng, found->iterations, task_seed));
    } catch (const Error&) {
      // NoSignChange / DiscontinuityCrossing / BisectionStall: pair abandoned.
    }
  }
  return records;
}

HuntResult hunt_theta(const Real& theta, int theta_index, const SearchParams& params,
                      int n_searches, bool stop_at_first_success) {
  HuntResult out;
  for (int s = 0; s < n_searches; ++s) {
    std::vector<RootRecord> recs = run_search_task(theta, theta_index, s, params);
    ++out.searches_run;
    if (!recs.empty()) {
      ++out.successes;
      out.records.insert(out.records.end(), std::make_move_iterator(recs.begin()),
                         std::make_move_iterator(recs.end()));
      if (stop_at_first_success) break;
    }
  }
  return out;
}

SweepResult theta_sweep(const SearchParams& params, int threads) {
  const int n_theta = 99;
  const int per_theta = params.searches_per_theta;
  const int n_tasks = n_theta * per_theta;
  std::vector<std::vector<RootRecord>> slots(static_cast<std::size_t>(n_tasks));

  auto run_task = [&](int flat) {
    int theta_index = flat / per_theta + 1;  // 1..99
    int search_index = flat % per_theta;
    Real theta = Real(theta_index) / 100;
    slots[static_cast<std::size_t>(flat)] =
        run_search_task(theta, theta_index, search_index, params);
  };

  if (threads <= 1) {
    for (int flat = 0; flat < n_tasks; ++flat) run_task(flat);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      set_working_precision(params.precision_bits);
      for (;;) {
        int flat = next.fetch_add(1);
        if (flat >= n_tasks) return;
        run_task(flat);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult out;
  out.stats.resize(n_theta);
  for (int ti = 0; ti < n_theta; ++ti) {
    out.stats[static_cast<std::size_t>(ti)].theta_index = ti + 1;
    out.stats[static_cast<std::size_t>(ti)].searches = per_theta;
  }
  for (int flat = 0; flat < n_tasks; ++flat) {
    auto& recs = slots[static_cast<std::size_t>(flat)];
    ThetaStats& st = out.stats[static_cast<std::size_t>(flat / per_theta)];
    if (!recs.empty()) ++st.successes;
    for (auto& r : recs) {
      ++st.records;
      if (r.angle_ok) ++st.records_kept;
      out.records.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<RootRecord> angle_filtered(const std::vector<RootRecord>& records) {
  std::vector<RootRecord> kept;
  kept.reserve(records.size());
  for (const auto& r : records) {
    if (r.angle_ok) kept.push_back(r);
  }
  return kept;
}

}  // namespace comjac
