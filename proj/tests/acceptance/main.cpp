// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any selected criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "randpoly/bodies.hpp"
#include "randpoly/ellipsoid.hpp"
#include "randpoly/experiments.hpp"
#include "randpoly/metrics.hpp"
#include "randpoly/polygon.hpp"
#include "randpoly/report.hpp"
#include "randpoly/stats.hpp"

using namespace randpoly;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome constants_exactness(unsigned) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int d = 2; d <= 10; ++d) {
    const ConstantsTable t = constants(d);
    const double beta = unit_ball_volume(d);
    worst = std::max({worst, rel_err(t.beta_d, beta), rel_err(t.alpha1, beta * (std::pow(3.0, d) - 1.0)),
                      rel_err(t.alpha2, beta * (std::pow(2.0, d) - 1.0)),
                      rel_err(t.alpha3, std::pow(3.0, d + 1) + std::pow(2.0, d) - 3.0),
                      rel_err(t.C2, t.alpha3 * t.beta_d),
                      rel_err(t.alpha3, 1.0 + (3.0 * t.alpha1 + t.alpha2) / t.beta_d)});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-12 && secs < 1.0, fmt::format("max relative error {:.3g} (tol 1e-12), {:.3f} s", worst, secs)};
}

Outcome steiner_check(unsigned) {
  const std::vector<double> lambdas{0.1, 0.2, 0.3, 0.4, 0.5};
  bool pass = true;
  std::string detail;
  for (int d = 2; d <= 3; ++d) {
    const SteinerFit fit = fit_steiner_ball(d, lambdas, 10'000'000, 2024);
    const auto exact = steiner_coeffs_ball(d);
    for (int j = 0; j < d; ++j) {
      const auto k = static_cast<std::size_t>(j);
      const double err = rel_err(fit.coefficients[k], exact[k]);
      pass = pass && err <= 0.02;
      detail += fmt::format("d={} L{}={:.5f} (exact {:.5f}, {:.2f}%) ", d, j + 1, fit.coefficients[k], exact[k],
                            100.0 * err);
    }
  }
  return {pass, detail + "tol 2%"};
}

Outcome mvee_ratio(unsigned) {
  const MveeOptions opts{.tolerance = 1e-7};
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    RngStream s(3, k);
    const ConvexBody g = polygon::to_body(random_disc_polygon(s));
    const MveeCertificate c = mvee(g, opts);
    failures += !ratio_check(g, c);
    worst = std::max(worst, c.ratio);
  }
  double worst3 = 0.0;
  for (const char* id : {"cube3", "simplex3"}) {
    const ConvexBody g = builtin_body(id);
    const MveeCertificate c = mvee(g, opts);
    failures += !ratio_check(g, c);
    worst3 = std::max(worst3, c.ratio);
  }
  return {failures == 0, fmt::format("{} failures; max ratio d=2 {:.4f} (bound {:.4f}), cube3/simplex3 {:.4f} (bound {:.4f})",
                                     failures, worst, 4.0 * std::pow(1.0 + 1e-7, 2), worst3,
                                     27.0 * std::pow(1.0 + 1e-7, 3))};
}

Outcome nikodym_vs_hausdorff(unsigned) {
  const Lemma2Result r = lemma2_check(1000, 4);
  return {r.max_ratio_exact <= r.alpha1,
          fmt::format("max |G^G'|/d_H = {:.4f} over {} pairs (bound 8pi = {:.4f}, 2pi = {:.4f}); with net upper bound {:.4f}",
                      r.max_ratio_exact, r.pairs, r.alpha1, 2.0 * kPi, r.max_ratio)};
}

Outcome smooth_rate(unsigned workers) {
  const std::vector<double> q{1.0, 2.0};
  const auto grid = parse_n_grid("32:4096:x2");
  const MomentTable disc = moment_table(builtin_body("disc"), "disc", q, grid, 10000, 5, workers);
  const auto fits = rate_fit(disc, FitModel::kPower);
  const std::vector<double> q1{1.0};
  const MomentTable ball = moment_table(builtin_body("ball3"), "ball3", q1, grid, 10000, 55, workers);
  const FitResult b = rate_fit(ball, FitModel::kPower).front();
  const bool pass = std::abs(fits[0].slope + 2.0 / 3.0) <= 0.07 && std::abs(fits[1].slope + 4.0 / 3.0) <= 0.12 &&
                    std::abs(b.slope + 0.5) <= 0.08;
  return {pass, fmt::format("disc q=1 slope {:.4f} (-2/3 +- 0.07), q=2 slope {:.4f} (-4/3 +- 0.12), ball3 q=1 slope "
                            "{:.4f} (-1/2 +- 0.08)",
                            fits[0].slope, fits[1].slope, b.slope)};
}

Outcome polytope_rate(unsigned workers) {
  const std::size_t n = 4096;
  const auto v = missing_volume_samples(builtin_body("square"), n, 10000, 6, workers);
  const stats::MeanSe m = stats::mean_se(v);
  const double scaled = m.mean * static_cast<double>(n) / std::log(static_cast<double>(n));
  const double se = m.se * static_cast<double>(n) / std::log(static_cast<double>(n));
  return {scaled >= 2.27 && scaled <= 3.07,
          fmt::format("E[v_rel] n/ln n = {:.4f} +- {:.4f} (target [2.27, 3.07])", scaled, se)};
}

Outcome exponential_tail(unsigned workers) {
  bool pass = true;
  std::string detail;
  for (std::size_t n : {100u, 1000u}) {
    const auto recs = run_missing_volume(builtin_body("disc"), "disc", n, 100000, 7, workers);
    const TailCurve c = tail_curve(recs, 2, n);
    pass = pass && c.fit_available && c.decay_rate >= 1.0 / kPi;
    detail += fmt::format("n={} rate {:.4f} +- {:.4f} (R2 {:.4f}) ", n, c.decay_rate, c.decay_rate_se, c.fit_r2);
  }
  return {pass, detail + fmt::format("(need >= 1/pi = {:.4f})", 1.0 / kPi)};
}

Outcome affine_invariance(unsigned workers) {
  Matrix m(2, 2);
  m << 2.0, 0.0, 0.0, 0.5;
  const ConvexBody disc = builtin_body("disc");
  const stats::KsResult same = affine_invariance_test(disc, AffineMap(m, Vector::Zero(2)), 64, 10000, 81, 82, workers);
  const auto a = missing_volume_samples(disc, 64, 10000, 83, workers);
  const auto b = missing_volume_samples(builtin_body("square"), 64, 10000, 84, workers);
  const stats::KsResult diff = stats::ks_two_sample(a, b);
  return {same.p_value > 0.01 && diff.p_value < 0.01,
          fmt::format("disc vs ellipse p = {:.4f} (> 0.01), disc vs square p = {:.3g} (< 0.01)", same.p_value,
                      diff.p_value)};
}

Outcome entropy_exponent(unsigned) {
  const std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};
  const PackingResult r = packing_number(deltas, 100000, 9);
  std::string detail;
  for (const PackingEntry& e : r.entries) {
    detail += fmt::format("N({})={}{} ", e.delta, e.count, e.saturated ? " (saturated)" : "");
  }
  if (!r.fit) return {false, detail + "no fit"};
  return {r.fit->r2 > 0.9 && r.fit->slope > 0.0,
          detail + fmt::format("b = {:.4f}, R2 = {:.4f} (need R2 > 0.9, b > 0)", r.fit->slope, r.fit->r2)};
}

std::vector<std::string> experiment_outputs(unsigned workers) {
  std::vector<std::string> out;
  const ConvexBody square = builtin_body("square");
  report::Metadata meta{.command = "simulate", .seed = 10};
  const auto recs = run_missing_volume(square, "square", 256, 2000, 10, workers);
  out.push_back(report::records_csv(meta, recs));
  const TailCurve c = tail_curve(recs, 2, 256);
  out.push_back(report::tail_csv(meta, c.unshifted));
  out.push_back(report::tail_csv(meta, c.shifted));
  out.push_back(report::tail_summary_json(meta, c).dump(2));
  const std::vector<double> q{1.0, 2.0};
  const auto grid = parse_n_grid("16:512:x2");
  meta.command = "moments";
  out.push_back(report::moments_csv(meta, moment_table(builtin_body("ball3"), "ball3", q, grid, 300, 10, workers)));
  return out;
}

Outcome determinism(unsigned) {
  const auto one = experiment_outputs(1);
  const auto four = experiment_outputs(4);
  const auto again = experiment_outputs(1);
  std::size_t differing = 0;
  for (std::size_t i = 0; i < one.size(); ++i) differing += one[i] != four[i] || one[i] != again[i];
  return {differing == 0, fmt::format("{} of {} output files differ between workers 1, 4 and a rerun", differing,
                                      one.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randpoly acceptance checks"};
  int only = 0;
  unsigned workers = 1;
  app.add_option("--criterion", only, "run a single criterion (1-10); default all")->check(CLI::Range(0, 10));
  app.add_option("--workers", workers, "worker threads for simulations");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome(unsigned)>>> checks{
      {"constants exactness", constants_exactness}, {"Steiner coefficients", steiner_check},
      {"MVEE volume ratio", mvee_ratio},            {"Nikodym vs Hausdorff", nikodym_vs_hausdorff},
      {"smooth rate", smooth_rate},                 {"polytope rate", polytope_rate},
      {"exponential tail", exponential_tail},       {"affine invariance", affine_invariance},
      {"entropy exponent", entropy_exponent},       {"determinism", determinism}};

  bool all = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = checks[i].second(workers);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("criterion {} {}: {} | {} [{:.1f} s]\n", i + 1, checks[i].first, o.pass ? "PASS" : "FAIL", o.detail,
               secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
