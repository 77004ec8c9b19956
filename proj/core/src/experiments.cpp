#include "randpoly/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include "randpoly/ellipsoid.hpp"
#include "randpoly/error.hpp"
#include "randpoly/hull.hpp"
#include "randpoly/metrics.hpp"
#include "randpoly/parallel.hpp"
#include "randpoly/sampler.hpp"

namespace randpoly {
namespace {

double hull_volume_or_zero(const PointCloud& points) {
  if (points.size() < static_cast<std::size_t>(points.dim()) + 1) return 0.0;
  try {
    return polytope_volume(convex_hull(points));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDegenerateHull) return 0.0;
    throw;
  }
}

std::vector<double> unshifted_values(std::span<const ReplicateRecord> records, std::size_t n) {
  std::vector<double> y;
  y.reserve(records.size());
  for (const ReplicateRecord& r : records) y.push_back(static_cast<double>(n) * r.v_rel);
  return y;
}

// Fraction of sorted values strictly above x.
std::size_t count_above(const std::vector<double>& sorted, double x) {
  return static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x));
}

TailPoint tail_point(const std::vector<double>& sorted, double x) {
  const std::size_t above = count_above(sorted, x);
  const stats::Interval ci = stats::wilson(above, sorted.size());
  return {x, static_cast<double>(above) / static_cast<double>(sorted.size()), ci.lo, ci.hi};
}

constexpr std::size_t kHashDims = 5;

// Colliding cells only cost extra distance checks, so 12 wrapped bits per
// coordinate suffice.
std::uint64_t cell_key(const std::array<std::int64_t, kHashDims>& cell) {
  std::uint64_t key = 0;
  for (std::int64_t c : cell) key = key << 12 | (static_cast<std::uint64_t>(c) & 0xfff);
  return key;
}

}  // namespace

std::vector<double> missing_volume_samples(const ConvexBody& body, std::size_t n, std::size_t reps,
                                           std::uint64_t seed, unsigned workers, std::uint64_t first_stream) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "n must be at least 1");
  if (reps < 1) fail(ErrorCode::kInvalidArgument, "reps must be at least 1");
  const UniformSampler sampler(body);
  const double vol = volume(body);
  std::vector<double> out(reps);
  parallel_for(reps, workers, [&](std::size_t i) {
    RngStream stream(seed, first_stream + i);
    PointCloud points(body.dim());
    sampler.sample_into(n, stream, points);
    out[i] = std::clamp(missing_volume(body, points) / vol, 0.0, 1.0);
  });
  return out;
}

std::vector<ReplicateRecord> run_missing_volume(const ConvexBody& body, const std::string& body_id,
                                                std::size_t n, std::size_t reps, std::uint64_t seed,
                                                unsigned workers, std::uint64_t first_stream) {
  const std::vector<double> v = missing_volume_samples(body, n, reps, seed, workers, first_stream);
  std::vector<ReplicateRecord> records;
  records.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    records.push_back({body_id, body.dim(), n, i, seed, first_stream + i, v[i]});
  }
  return records;
}

TailCurve tail_curve(std::span<const ReplicateRecord> records, int d, std::size_t n, std::size_t grid_points) {
  if (records.empty()) fail(ErrorCode::kInvalidArgument, "tail curve needs records");
  if (grid_points < 2) fail(ErrorCode::kInvalidArgument, "tail curve needs two or more grid points");
  for (const ReplicateRecord& r : records) {
    if (r.n != n || r.body_id != records.front().body_id) {
      fail(ErrorCode::kInvalidArgument, "tail curve records must share body and n");
    }
  }
  TailCurve curve;
  curve.d = d;
  curve.n = n;
  curve.reps = records.size();
  const double nd = static_cast<double>(n);
  curve.shift = constants(d).C2 * std::pow(nd, -2.0 / (d + 1.0));

  std::vector<double> y = unshifted_values(records, n);
  std::sort(y.begin(), y.end());
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = y[i] - nd * curve.shift;

  const double x_max = y.back();
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double x = x_max * static_cast<double>(k) / static_cast<double>(grid_points - 1);
    curve.unshifted.push_back(tail_point(y, x));
    curve.shifted.push_back(tail_point(z, x));
  }
  curve.shifted_degenerate = curve.shifted.front().S == 0.0;

  const std::size_t reps = y.size();
  constexpr std::size_t kMinTail = 50;
  if (reps <= 2 * kMinTail) return curve;
  const double median = y[reps / 2];
  const double x_hi = y[reps - kMinTail];
  if (!(x_hi > median)) return curve;
  std::vector<double> xs;
  std::vector<double> logs;
  constexpr int kFitPoints = 32;
  for (int k = 0; k < kFitPoints; ++k) {
    const double x = median + (x_hi - median) * k / kFitPoints;
    const std::size_t above = count_above(y, x);
    if (above < kMinTail) break;
    xs.push_back(x);
    logs.push_back(std::log(static_cast<double>(above) / static_cast<double>(reps)));
  }
  if (xs.size() < 4) return curve;
  const stats::LinearFit fit = stats::linear_fit(xs, logs);
  curve.fit_available = true;
  curve.decay_rate = -fit.slope;
  curve.decay_rate_se = fit.slope_se;
  curve.fit_r2 = fit.r2;
  curve.fit_x_lo = xs.front();
  curve.fit_x_hi = xs.back();
  return curve;
}

MomentTable moment_table_from_samples(const std::string& body_id, int d, std::span<const double> q,
                                      std::span<const std::size_t> n_grid,
                                      const std::vector<std::vector<double>>& samples, std::uint64_t seed) {
  if (samples.size() != n_grid.size()) fail(ErrorCode::kInvalidArgument, "one sample per grid point required");
  MomentTable t;
  t.body_id = body_id;
  t.d = d;
  t.seed = seed;
  t.q.assign(q.begin(), q.end());
  t.n.assign(n_grid.begin(), n_grid.end());
  t.reps = samples.empty() ? 0 : samples.front().size();
  for (double qq : t.q) {
    if (!(qq > 0.0)) fail(ErrorCode::kInvalidArgument, "moment order q must be positive");
    std::vector<double> est;
    std::vector<double> se;
    for (const std::vector<double>& s : samples) {
      std::vector<double> powered(s.size());
      std::transform(s.begin(), s.end(), powered.begin(), [&](double v) { return std::pow(v, qq); });
      const stats::MeanSe m = stats::mean_se(powered);
      est.push_back(m.mean);
      se.push_back(m.se);
    }
    t.estimate.push_back(std::move(est));
    t.se.push_back(std::move(se));
  }
  return t;
}

MomentTable moment_table(const ConvexBody& body, const std::string& body_id, std::span<const double> q,
                         std::span<const std::size_t> n_grid, std::size_t reps, std::uint64_t seed,
                         unsigned workers) {
  if (q.empty() || n_grid.empty()) fail(ErrorCode::kInvalidArgument, "moment table needs q values and an n grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end()) {
    fail(ErrorCode::kInvalidArgument, "n grid must be strictly increasing");
  }
  std::vector<std::vector<double>> samples;
  for (std::size_t n : n_grid) samples.push_back(missing_volume_samples(body, n, reps, seed, workers));
  return moment_table_from_samples(body_id, body.dim(), q, n_grid, samples, seed);
}

std::string to_string(FitModel model) { return model == FitModel::kPower ? "power" : "power-log"; }

FitModel parse_fit_model(const std::string& tag) {
  if (tag == "power") return FitModel::kPower;
  if (tag == "power-log") return FitModel::kPowerLog;
  fail(ErrorCode::kInvalidArgument, "unknown fit model '" + tag + "'");
}

std::vector<FitResult> rate_fit(const MomentTable& table, FitModel model) {
  if (table.n.size() < 4) fail(ErrorCode::kInvalidArgument, "rate fit needs four or more grid points");
  std::vector<double> x;
  for (std::size_t n : table.n) {
    const double nd = static_cast<double>(n);
    if (model == FitModel::kPower) {
      x.push_back(std::log(nd));
    } else {
      if (n < 3) fail(ErrorCode::kInvalidArgument, "power-log model needs n >= 3");
      x.push_back((table.d - 1) * std::log(std::log(nd)) - std::log(nd));
    }
  }
  std::vector<FitResult> out;
  for (std::size_t qi = 0; qi < table.q.size(); ++qi) {
    std::vector<double> y;
    for (double e : table.estimate[qi]) {
      if (!(e > 0.0)) fail(ErrorCode::kInvalidArgument, "rate fit needs positive moment estimates");
      y.push_back(std::log(e));
    }
    const stats::LinearFit lf = stats::linear_fit(x, y);
    FitResult r;
    r.model = model;
    r.q = table.q[qi];
    r.slope = lf.slope;
    r.intercept = lf.intercept;
    r.slope_se = lf.slope_se;
    r.r2 = lf.r2;
    r.residual_rms = lf.residual_rms;
    r.residual_max = lf.residual_max;
    if (model == FitModel::kPower) {
      r.constant = std::exp(lf.intercept);
    } else {
      double mean_gap = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) mean_gap += y[k] - r.q * x[k];
      r.constant = std::exp(mean_gap / static_cast<double>(x.size()));
    }
    out.push_back(r);
  }
  return out;
}

LowerBoundResult lower_bound_check(double q, std::span<const std::size_t> n_grid, std::size_t reps,
                                   std::uint64_t seed, int d, unsigned workers) {
  const ConvexBody ball = ConvexBody::ball(Point::Zero(d), 1.0);
  const double qs[] = {q};
  const MomentTable table = moment_table(ball, "ball" + std::to_string(d), qs, n_grid, reps, seed, workers);
  LowerBoundResult r;
  r.fit = rate_fit(table, FitModel::kPower).front();
  const double exponent = 2.0 * q / (d + 1.0);
  for (std::size_t k = 0; k < table.n.size(); ++k) {
    const double scale = std::pow(static_cast<double>(table.n[k]), exponent);
    r.plateau.push_back(scale * table.estimate[0][k]);
    r.plateau_se.push_back(scale * table.se[0][k]);
  }
  r.a_q = *std::min_element(r.plateau.begin() + static_cast<std::ptrdiff_t>(r.plateau.size() / 2), r.plateau.end());
  r.positive = r.a_q > 0.0;
  return r;
}

stats::KsResult affine_invariance_test(const ConvexBody& body, const AffineMap& map, std::size_t n,
                                       std::size_t reps, std::uint64_t seed_k, std::uint64_t seed_tk,
                                       unsigned workers) {
  const ConvexBody image = affine_image(map, body);
  return stats::ks_two_sample(missing_volume_samples(body, n, reps, seed_k, workers),
                              missing_volume_samples(image, n, reps, seed_tk, workers));
}

polygon::Polygon random_disc_polygon(RngStream& stream) {
  std::poisson_distribution<int> count(20.0);
  for (;;) {
    const int m = count(stream);
    if (m < 3) continue;
    std::vector<polygon::Vec2> pts;
    pts.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const double r = std::sqrt(stream.uniform());
      const double t = 2.0 * std::numbers::pi * stream.uniform();
      pts.emplace_back(r * std::cos(t), r * std::sin(t));
    }
    polygon::Polygon p = polygon::hull(std::move(pts));
    if (p.size() < 3 || polygon::area(p) <= 0.0) continue;
    if (stream.uniform() < 0.5) {
      double reach = 0.0;
      for (const polygon::Vec2& v : p) reach = std::max(reach, v.norm());
      for (polygon::Vec2& v : p) v /= reach;
    }
    return p;
  }
}

Lemma2Result lemma2_check(std::size_t pair_count, std::uint64_t seed, std::size_t directions) {
  Lemma2Result r;
  r.alpha1 = constants(2).alpha1;
  for (std::size_t k = 0; k < pair_count; ++k) {
    RngStream sg(seed, 2 * k);
    RngStream sh(seed, 2 * k + 1);
    const polygon::Polygon g = random_disc_polygon(sg);
    const polygon::Polygon h = random_disc_polygon(sh);
    const double exact = polygon::hausdorff(g, h);
    if (exact == 0.0) continue;
    const double nik = nikodym_2d(g, h);
    const HausdorffEstimate est = hausdorff(polygon::to_body(g), polygon::to_body(h), directions);
    r.max_ratio = std::max(r.max_ratio, nik / (est.estimate + est.error_bound));
    r.max_ratio_exact = std::max(r.max_ratio_exact, nik / exact);
    ++r.pairs;
  }
  r.holds = r.max_ratio_exact <= r.alpha1;
  return r;
}

PackingResult packing_number(std::span<const double> deltas, std::size_t pool, std::uint64_t seed) {
  if (pool == 0) fail(ErrorCode::kInvalidArgument, "packing pool must be nonempty");
  for (double delta : deltas) {
    if (!(delta > 0.0)) fail(ErrorCode::kInvalidArgument, "packing deltas must be positive");
  }
  constexpr std::size_t kCoarse = 48;
  std::vector<polygon::NormalFan> fans(pool);
  std::vector<std::array<double, kCoarse>> coarse(pool);
  for (std::size_t i = 0; i < pool; ++i) {
    RngStream stream(seed, i);
    const polygon::Polygon p = random_disc_polygon(stream);
    fans[i] = polygon::normal_fan(p);
    for (std::size_t k = 0; k < kCoarse; ++k) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / kCoarse;
      coarse[i][k] = polygon::support(p, {std::cos(t), std::sin(t)});
    }
  }
  std::array<std::size_t, kHashDims> hashed{};
  for (std::size_t h = 0; h < kHashDims; ++h) hashed[h] = h * kCoarse / kHashDims;
  std::size_t neighbor_cells = 1;
  for (std::size_t h = 0; h < kHashDims; ++h) neighbor_cells *= 3;

  PackingResult result;
  result.pool = pool;
  for (double delta : deltas) {
    // A center within delta differs by at most one cell in every hashed
    // support coordinate.
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    std::size_t count = 0;
    for (std::size_t i = 0; i < pool; ++i) {
      const auto& s = coarse[i];
      std::array<std::int64_t, kHashDims> cell{};
      for (std::size_t h = 0; h < kHashDims; ++h) cell[h] = static_cast<std::int64_t>(std::floor(s[hashed[h]] / delta));
      bool separated = true;
      for (std::size_t code = 0; code < neighbor_cells && separated; ++code) {
        std::array<std::int64_t, kHashDims> probe = cell;
        for (std::size_t h = 0, rest = code; h < kHashDims; ++h, rest /= 3) {
          probe[h] += static_cast<std::int64_t>(rest % 3) - 1;
        }
        const auto it = grid.find(cell_key(probe));
        if (it == grid.end()) continue;
        for (std::size_t c : it->second) {
          // Any coarse support gap above delta already separates the pair.
          const auto& t = coarse[c];
          bool far = false;
          for (std::size_t k = 0; k < kCoarse && !far; ++k) far = std::abs(s[k] - t[k]) > delta;
          if (far) continue;
          if (polygon::hausdorff(fans[i], fans[c]) <= delta) {
            separated = false;
            break;
          }
        }
      }
      if (!separated) continue;
      grid[cell_key(cell)].push_back(i);
      ++count;
    }
    result.entries.push_back({delta, count, 2 * count > pool});
  }

  std::vector<double> x;
  std::vector<double> y;
  for (const PackingEntry& e : result.entries) {
    x.push_back(1.0 / std::sqrt(e.delta));
    y.push_back(std::log(static_cast<double>(e.count)));
  }
  std::vector<double> distinct = x;
  std::sort(distinct.begin(), distinct.end());
  if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() >= 2) result.fit = stats::linear_fit(x, y);
  return result;
}

ChainResult chain_inequality_check(const ConvexBody& body, std::size_t n, std::size_t reps, std::uint64_t seed,
                                   unsigned workers) {
  const int d = body.dim();
  const Normalization norm = normalize(body);
  const double vol = volume(body);
  const double vol_image = volume(norm.body);
  const double factor = std::pow(d, d) / unit_ball_volume(d);
  const UniformSampler sampler(body);
  std::vector<double> ratio(reps);
  std::vector<char> violated(reps);
  parallel_for(reps, workers, [&](std::size_t i) {
    RngStream stream(seed, i);
    PointCloud points(d);
    sampler.sample_into(n, stream, points);
    const double lhs = missing_volume(body, points) / vol;
    const double missing_image = std::clamp(vol_image - hull_volume_or_zero(norm.transform.apply(points)), 0.0, vol_image);
    const double rhs = factor * missing_image;
    ratio[i] = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
    violated[i] = lhs > rhs * (1.0 + 1e-9);
  });
  ChainResult r;
  r.replicates = reps;
  for (std::size_t i = 0; i < reps; ++i) {
    r.max_ratio = std::max(r.max_ratio, ratio[i]);
    r.violations += violated[i] != 0;
  }
  return r;
}

std::vector<std::size_t> parse_n_grid(const std::string& text) {
  const auto bad = [&] { fail(ErrorCode::kInvalidArgument, "bad n grid '" + text + "'"); };
  const auto to_count = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      bad();
    }
    if (pos != s.size() || v == 0) bad();
    return static_cast<std::size_t>(v);
  };
  std::vector<std::size_t> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3 || parts[2].size() < 2) bad();
    const std::size_t lo = to_count(parts[0]);
    const std::size_t hi = to_count(parts[1]);
    const std::size_t step = to_count(parts[2].substr(1));
    if (lo > hi) bad();
    if (parts[2][0] == 'x') {
      if (step < 2) bad();
      for (std::size_t n = lo; n <= hi; n *= step) out.push_back(n);
    } else if (parts[2][0] == '+') {
      for (std::size_t n = lo; n <= hi; n += step) out.push_back(n);
    } else {
      bad();
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(to_count(part));
  if (out.empty()) bad();
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &pos);
    } catch (const std::exception&) {
      fail(ErrorCode::kInvalidArgument, "bad number list '" + text + "'");
    }
    if (pos != part.size() || !std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "bad number list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) fail(ErrorCode::kInvalidArgument, "empty number list");
  return out;
}

}  // namespace randpoly
