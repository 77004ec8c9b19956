#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randpoly/bodies.hpp"
#include "randpoly/polygon.hpp"
#include "randpoly/rng.hpp"
#include "randpoly/stats.hpp"

namespace randpoly {

/// One draw of n uniform points in a body and its relative missing volume.
struct ReplicateRecord {
  std::string body_id;
  int d = 0;
  std::size_t n = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  double v_rel = 0.0;  // |K \ conv(X_1..X_n)| / |K|, in [0, 1]

  friend bool operator==(const ReplicateRecord&, const ReplicateRecord&) = default;
};

/// Replicate i draws from stream (seed, first_stream + i). Records are
/// stored by index, so the result does not depend on `workers`.
std::vector<ReplicateRecord> run_missing_volume(const ConvexBody& body, const std::string& body_id,
                                                std::size_t n, std::size_t reps, std::uint64_t seed,
                                                unsigned workers = 1, std::uint64_t first_stream = 0);

/// Relative missing volumes only, same streams as run_missing_volume.
std::vector<double> missing_volume_samples(const ConvexBody& body, std::size_t n, std::size_t reps,
                                           std::uint64_t seed, unsigned workers = 1,
                                           std::uint64_t first_stream = 0);

struct TailPoint {
  double x = 0.0;
  double S = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Empirical survival of n (v_rel - C2 n^{-2/(d+1)}) (shifted) and of
/// n v_rel (unshifted) on a common grid, plus a log-linear decay fit of the
/// unshifted tail from its median out to where S >= 50 / reps.
struct TailCurve {
  int d = 0;
  std::size_t n = 0;
  std::size_t reps = 0;
  double shift = 0.0;  // C2 n^{-2/(d+1)}
  std::vector<TailPoint> shifted;
  std::vector<TailPoint> unshifted;
  bool shifted_degenerate = false;  // S(0) = 0
  bool fit_available = false;
  double decay_rate = 0.0;  // -(slope of log S0)
  double decay_rate_se = 0.0;
  double fit_r2 = 0.0;
  double fit_x_lo = 0.0;
  double fit_x_hi = 0.0;
};

TailCurve tail_curve(std::span<const ReplicateRecord> records, int d, std::size_t n,
                     std::size_t grid_points = 64);

/// E[v_rel^q] estimates on a grid of n with common replicates across q.
struct MomentTable {
  std::string body_id;
  int d = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> q;
  std::vector<std::size_t> n;
  std::vector<std::vector<double>> estimate;  // [q][n]
  std::vector<std::vector<double>> se;        // [q][n]
};

MomentTable moment_table(const ConvexBody& body, const std::string& body_id, std::span<const double> q,
                         std::span<const std::size_t> n_grid, std::size_t reps, std::uint64_t seed,
                         unsigned workers = 1);

/// Moments from per-n samples of v_rel (samples[k] belongs to n_grid[k]).
MomentTable moment_table_from_samples(const std::string& body_id, int d, std::span<const double> q,
                                      std::span<const std::size_t> n_grid,
                                      const std::vector<std::vector<double>>& samples, std::uint64_t seed);

enum class FitModel { kPower, kPowerLog };

std::string to_string(FitModel model);
FitModel parse_fit_model(const std::string& tag);

/// "power": log E = a + slope log n, and `constant` is exp(a).
/// "power-log": log E = a + slope log x with x = (ln n)^{d-1} / n, where
/// slope should come out near q, and `constant` is exp(mean(log E - q log x)),
/// the fit with the exponent fixed.
struct FitResult {
  FitModel model = FitModel::kPower;
  double q = 1.0;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
  double residual_rms = 0.0;
  double residual_max = 0.0;
  double constant = 0.0;
};

/// One fit per q row; needs four or more grid points.
std::vector<FitResult> rate_fit(const MomentTable& table, FitModel model);

struct LowerBoundResult {
  FitResult fit;
  double a_q = 0.0;               // min of the plateau over the top half of the grid
  std::vector<double> plateau;    // n^{2q/(d+1)} E[v_rel^q] per n
  std::vector<double> plateau_se;
  bool positive = false;
};

/// Plateau of n^{2q/(d+1)} E[v_rel^q] on the unit ball of dimension d.
LowerBoundResult lower_bound_check(double q, std::span<const std::size_t> n_grid, std::size_t reps,
                                   std::uint64_t seed, int d = 2, unsigned workers = 1);

/// Two-sample KS test between v_rel samples from K (seed_k) and T(K) (seed_tk).
stats::KsResult affine_invariance_test(const ConvexBody& body, const AffineMap& map, std::size_t n,
                                       std::size_t reps, std::uint64_t seed_k, std::uint64_t seed_tk,
                                       unsigned workers = 1);

/// Random convex polygon in the unit disc: hull of Poisson(20) uniform
/// points (at least three), scaled to touch the circle with probability 1/2.
polygon::Polygon random_disc_polygon(RngStream& stream);

struct Lemma2Result {
  std::size_t pairs = 0;
  double alpha1 = 0.0;
  /// max |G sym-diff G'| / (d_H estimate + error bound).
  double max_ratio = 0.0;
  /// max |G sym-diff G'| / exact d_H.
  double max_ratio_exact = 0.0;
  bool holds = false;  // max_ratio_exact <= alpha1
};

/// Pair k uses polygons from streams (seed, 2k) and (seed, 2k + 1).
Lemma2Result lemma2_check(std::size_t pair_count, std::uint64_t seed, std::size_t directions = 4096);

struct PackingEntry {
  double delta = 0.0;
  std::size_t count = 0;
  bool saturated = false;  // accepted more than half of the pool
};

struct PackingResult {
  std::size_t pool = 0;
  std::vector<PackingEntry> entries;
  /// log N = a + b delta^{-1/2}; present with two or more distinct deltas.
  std::optional<stats::LinearFit> fit;
};

/// Greedy delta-separated packing, in exact Hausdorff distance, of a pool
/// of random polygons in the unit disc (body i from stream (seed, i)).
PackingResult packing_number(std::span<const double> deltas, std::size_t pool, std::uint64_t seed);

/// Per replicate: |K \ K_n| / |K| <= (d^d / beta_d) |K' \ K'_n| with K' the
/// MVEE normalization of K and K'_n the hull of the mapped sample.
struct ChainResult {
  std::size_t replicates = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;  // lhs / rhs
};

ChainResult chain_inequality_check(const ConvexBody& body, std::size_t n, std::size_t reps,
                                   std::uint64_t seed, unsigned workers = 1);

/// Parses "32:4096:x2" (geometric), "10:100:+10" (arithmetic) or a comma list.
std::vector<std::size_t> parse_n_grid(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

}  // namespace randpoly
