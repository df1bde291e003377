#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "comjac/kinematics.hpp"
#include "comjac/real.hpp"
#include "comjac/rng.hpp"

namespace comjac {

/// Tunables of the numerical zero hunt. Defaults reproduce the reference
/// pipeline: 100,000 random-search iterations, components drawn from
/// [-10, 10], proposals in a ball of radius 0.5, 200-bit precision,
/// |det| < 2^-(precision-40) as machine zero, 50 searches and 1+49 bisection
/// pairs per theta.
struct SearchParams {
  long max_iters = 100000;
  double ball_radius = 0.5;
  double init_box = 10.0;
  Precision precision_bits = kDefaultPrecision;
  Real zero_threshold = Real::nan();  // NaN -> 2^-(precision_bits - 40)
  std::uint64_t seed = 1;
  long bisect_max_steps = 0;  // 0 -> precision_bits + 64
  int searches_per_theta = 50;
  int extra_positive_pairs = 49;
  long sample_max_rejections = 10000;
};

Real effective_zero_threshold(const SearchParams& params);
long effective_bisect_max_steps(const SearchParams& params);

/// A localized zero of the determinant.
struct RootRecord {
  Real theta;
  Vec3 p, q, w;
  Real det_value;      // signed determinant at the located point
  Real bracket_width;  // final t-bracket width
  Real cos_scatter;    // NaN when the scattering direction is degenerate
  bool angle_ok = false;
  std::uint64_t seed = 0;  // per-task stream seed (provenance)
  long iterations_used = 0;
};

/// Bisection segment between two configurations sharing theta.
struct Segment {
  ConfigPoint alpha, beta;
};

/// gamma(t): linear interpolation of (p, q), linear-then-renormalized w.
ConfigPoint path_point(const Segment& seg, const Real& t);

/// Determinant used by the hunt (the A-form route).
Real hunt_det(const ConfigPoint& c);

struct SearchSuccess {
  ConfigPoint negative;                  // det < 0
  std::optional<ConfigPoint> positive;   // accepted point that seeded it
  long iterations = 0;
};

/// Random-search descent at fixed theta: propose inside a ball, accept iff
/// the objective decreases, stop at the first negative value or after
/// max_iters (failure, not an error). Degenerate proposals are resampled.
std::optional<SearchSuccess> random_search_with(const std::function<Real(const ConfigPoint&)>& det,
                                                const Real& theta, const SearchParams& params,
                                                RngStream& rng);

/// random_search_with on the determinant itself.
std::optional<SearchSuccess> random_search(const Real& theta, const SearchParams& params,
                                           RngStream& rng);

struct Bracket {
  Real t, value, width;
};

/// Bisection on t in [0, 1]; fn(0) and fn(1) must have opposite signs. Runs
/// until |fn| < zero_threshold and width < width_threshold; throws
/// NoSignChange or BisectionStall.
Bracket bisect_scalar(const std::function<Real(const Real&)>& fn, const Real& zero_threshold,
                      const Real& width_threshold, long max_steps);

/// Rejection-samples the init box until det > 0.
ConfigPoint sample_positive(const Real& theta, const SearchParams& params, RngStream& rng);

/// Bisection along the segment path. Runs until |det| < zero_threshold and
/// the bracket is narrower than 2^-(precision/2). Throws NoSignChange,
/// DiscontinuityCrossing (after one path re-jitter) or BisectionStall.
RootRecord bisect(const Segment& seg, const SearchParams& params, RngStream& rng);
RootRecord bisect(const Segment& seg, const SearchParams& params);

struct ThetaStats {
  int theta_index = 0;  // theta = index / 100
  long successes = 0;
  long searches = 0;
  long records = 0;
  long records_kept = 0;  // angle condition satisfied
};

struct SweepResult {
  std::vector<RootRecord> records;  // all records, pre-filter
  std::vector<ThetaStats> stats;
};

/// One search task: random search then 1 + extra_positive_pairs bisections.
/// The stream seed is derive_seed(params.seed, theta_index, search_index).
std::vector<RootRecord> run_search_task(const Real& theta, int theta_index, int search_index,
                                        const SearchParams& params);

struct HuntResult {
  std::vector<RootRecord> records;
  long successes = 0;
  long searches_run = 0;
};

/// Runs up to n_searches search tasks at one theta (serially, stream-compatible
/// with theta_sweep).
HuntResult hunt_theta(const Real& theta, int theta_index, const SearchParams& params,
                      int n_searches, bool stop_at_first_success);

/// The full pipeline over theta in {0.01, ..., 0.99}: 50 searches per theta,
/// every success bisected against its seed point and extra_positive_pairs
/// fresh positive points. Deterministic for fixed (params, seed) regardless
/// of the worker count.
SweepResult theta_sweep(const SearchParams& params, int threads = 1);

/// Records that satisfy the angle condition.
std::vector<RootRecord> angle_filtered(const std::vector<RootRecord>& records);

}  // namespace comjac
