// randpoly: command-line front end for the random polytope experiments.
//
// Every output file starts with '#' metadata lines (seed, algorithm_id,
// grid, config) from which it can be regenerated. The worker count is not
// part of the config since it never changes an output byte.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "randpoly/body_io.hpp"
#include "randpoly/ellipsoid.hpp"
#include "randpoly/error.hpp"
#include "randpoly/experiments.hpp"
#include "randpoly/metrics.hpp"
#include "randpoly/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace randpoly;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
  std::string body = "disc";
  std::optional<int> dim;
  std::string n = "64";
  std::size_t reps = 1000;
  std::string q = "1";
  std::uint64_t seed = 1;
  std::string out;
  unsigned workers = 1;
  std::string deltas = "0.2,0.1,0.05,0.025";
  std::size_t pool = 100000;
  std::string model = "power";
  std::string in;
};

fs::path output_dir(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  if (const char* env = std::getenv("RANDPOLY_OUT"); env != nullptr && *env != '\0') return env;
  return ".";
}

// "ball" / "cube" / "simplex" take their dimension from --dim.
std::string body_name(const RunConfig& cfg) {
  if (cfg.dim && (cfg.body == "ball" || cfg.body == "cube" || cfg.body == "simplex")) {
    return cfg.body + std::to_string(*cfg.dim);
  }
  return cfg.body;
}

ConvexBody load(const RunConfig& cfg) {
  ConvexBody body = resolve_body(body_name(cfg));
  if (cfg.dim && *cfg.dim != body.dim()) {
    fail(ErrorCode::kDimensionMismatch,
         fmt::format("--dim {} does not match body of dimension {}", *cfg.dim, body.dim()));
  }
  return body;
}

std::string grid_label(const std::vector<std::size_t>& n) {
  std::string out = "n=";
  for (std::size_t i = 0; i < n.size(); ++i) out += (i ? "," : "") + std::to_string(n[i]);
  return out;
}

report::Metadata metadata(const std::string& command, const RunConfig& cfg, const std::string& grid, json config) {
  config["subcommand"] = command;
  config["seed"] = cfg.seed;
  return {command, cfg.seed, std::string(RngStream::kAlgorithmId), grid, std::move(config)};
}

void emit(const fs::path& path, const std::string& content) {
  report::write_file(path, content);
  std::cout << path.string() << '\n';
}

int cmd_constants(const RunConfig& cfg) {
  if (!cfg.dim || *cfg.dim < 2 || *cfg.dim > 10) fail(ErrorCode::kInvalidArgument, "--dim must lie in [2, 10]");
  const json doc = to_json(constants(*cfg.dim));
  std::cout << doc.dump(2) << '\n';
  if (!cfg.out.empty()) report::write_file(fs::path(cfg.out) / "constants.json", doc.dump(2) + "\n");
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  const ConvexBody body = load(cfg);
  const std::vector<std::size_t> grid = parse_n_grid(cfg.n);
  std::vector<ReplicateRecord> records;
  for (std::size_t n : grid) {
    const auto part = run_missing_volume(body, body_name(cfg), n, cfg.reps, cfg.seed, cfg.workers);
    records.insert(records.end(), part.begin(), part.end());
  }
  const json config = {{"body", body_name(cfg)}, {"d", body.dim()}, {"n", grid}, {"reps", cfg.reps}};
  emit(output_dir(cfg) / "records.csv",
       report::records_csv(metadata("simulate", cfg, grid_label(grid), config), records));
  return 0;
}

int cmd_tail(const RunConfig& cfg) {
  const ConvexBody body = load(cfg);
  const std::vector<std::size_t> grid = parse_n_grid(cfg.n);
  if (grid.size() != 1) fail(ErrorCode::kInvalidArgument, "tail takes a single --n");
  const std::size_t n = grid.front();
  const auto records = run_missing_volume(body, body_name(cfg), n, cfg.reps, cfg.seed, cfg.workers);
  const TailCurve curve = tail_curve(records, body.dim(), n);
  const json config = {{"body", body_name(cfg)}, {"d", body.dim()}, {"n", n}, {"reps", cfg.reps}};
  const report::Metadata meta = metadata("tail", cfg, grid_label(grid), config);
  const fs::path dir = output_dir(cfg);
  emit(dir / "tail_unshifted.csv", report::tail_csv(meta, curve.unshifted));
  emit(dir / "tail_shifted.csv", report::tail_csv(meta, curve.shifted));
  emit(dir / "tail.json", report::tail_summary_json(meta, curve).dump(2) + "\n");
  return 0;
}

int cmd_moments(const RunConfig& cfg) {
  const ConvexBody body = load(cfg);
  const std::vector<std::size_t> grid = parse_n_grid(cfg.n);
  const std::vector<double> q = parse_real_list(cfg.q);
  const MomentTable table = moment_table(body, body_name(cfg), q, grid, cfg.reps, cfg.seed, cfg.workers);
  const json config = {{"body", body_name(cfg)}, {"d", body.dim()}, {"n", grid}, {"q", q}, {"reps", cfg.reps}};
  emit(output_dir(cfg) / "moments.csv",
       report::moments_csv(metadata("moments", cfg, grid_label(grid), config), table));
  return 0;
}

int cmd_fit(const RunConfig& cfg) {
  if (cfg.in.empty()) fail(ErrorCode::kInvalidArgument, "fit needs --in <moments.csv>");
  const std::string text = report::read_file(cfg.in);
  const MomentTable table = report::parse_moments_csv(text);
  const FitModel model = parse_fit_model(cfg.model);
  json fits = json::array();
  for (const FitResult& f : rate_fit(table, model)) fits.push_back(report::to_json(f));
  const json doc = {{"source_metadata", report::comment_lines(text)},
                    {"model", to_string(model)},
                    {"body_id", table.body_id},
                    {"d", table.d},
                    {"fits", fits}};
  std::cout << doc.dump(2) << '\n';
  report::write_file(output_dir(cfg) / "fit.json", doc.dump(2) + "\n");
  return 0;
}

int cmd_packing(const RunConfig& cfg) {
  const std::vector<double> deltas = parse_real_list(cfg.deltas);
  const PackingResult result = packing_number(deltas, cfg.pool, cfg.seed);
  const json config = {{"deltas", deltas}, {"pool", cfg.pool}};
  const report::Metadata meta = metadata("packing", cfg, "delta=" + cfg.deltas, config);
  const fs::path dir = output_dir(cfg);
  emit(dir / "packing.csv", report::packing_csv(meta, result));
  json fit = nullptr;
  if (result.fit) fit = {{"intercept", result.fit->intercept}, {"slope", result.fit->slope}, {"r2", result.fit->r2}};
  emit(dir / "packing_fit.json",
       json{{"metadata", report::metadata_json(meta)}, {"model", "log N = a + b delta^-1/2"}, {"fit", fit}}.dump(2) +
           "\n");
  return 0;
}

int cmd_normalize(const RunConfig& cfg) {
  const ConvexBody body = load(cfg);
  const Normalization norm = normalize(body);
  const auto matrix_json = [](const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  const Vector& off = norm.transform.offset();
  const Vector& c = norm.enclosing.center;
  const json doc = {
      {"body", body_name(cfg)},
      {"transform", {{"linear", matrix_json(norm.transform.linear())},
                     {"offset", std::vector<double>(off.data(), off.data() + off.size())},
                     {"determinant", norm.transform.determinant()}}},
      {"enclosing_ellipsoid", {{"center", std::vector<double>(c.data(), c.data() + c.size())},
                               {"shape", matrix_json(norm.enclosing.shape)},
                               {"volume", norm.enclosing_volume}}},
      {"ratio", norm.enclosing_volume / volume(body)},
      {"normalized_volume", volume(norm.body)}};
  std::cout << doc.dump(2) << '\n';
  if (!cfg.out.empty()) report::write_file(fs::path(cfg.out) / "normalize.json", doc.dump(2) + "\n");
  return 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kUnsupported:
    case ErrorCode::kParse:
    case ErrorCode::kNonConvex:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random polytope simulations: missing volumes, tails, moments and constants"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto body_opts = [&](CLI::App* sub) {
    sub->add_option("--body", cfg.body, "builtin name or body JSON file");
    sub->add_option("--dim", cfg.dim, "ambient dimension (checked against the body)");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--out", cfg.out, "output directory (default $RANDPOLY_OUT or .)");
    sub->add_option("--workers", cfg.workers, "worker threads (0: all cores)");
  };
  auto* constants_cmd = app.add_subcommand("constants", "print the constants table as JSON");
  constants_cmd->add_option("--dim", cfg.dim, "dimension in [2, 10]")->required();
  constants_cmd->add_option("--out", cfg.out, "also write constants.json here");

  auto* simulate = app.add_subcommand("simulate", "replicate missing volumes as CSV");
  body_opts(simulate);
  simulate->add_option("--n", cfg.n, "sample size or grid (32:4096:x2, 10,20)");
  simulate->add_option("--reps", cfg.reps, "replicates per n")->check(CLI::PositiveNumber);

  auto* tail = app.add_subcommand("tail", "shifted and unshifted tail curves");
  body_opts(tail);
  tail->add_option("--n", cfg.n, "sample size");
  tail->add_option("--reps", cfg.reps, "replicates")->check(CLI::PositiveNumber);

  auto* moments = app.add_subcommand("moments", "moment table over an n grid");
  body_opts(moments);
  moments->add_option("--n", cfg.n, "n grid");
  moments->add_option("--q", cfg.q, "moment orders, comma separated");
  moments->add_option("--reps", cfg.reps, "replicates per n")->check(CLI::PositiveNumber);

  auto* fit = app.add_subcommand("fit", "rate fit of a moments CSV");
  fit->add_option("--in", cfg.in, "moments.csv")->required();
  fit->add_option("--model", cfg.model, "power | power-log");
  fit->add_option("--out", cfg.out, "output directory");

  auto* packing = app.add_subcommand("packing", "greedy Hausdorff packing counts in the unit disc");
  packing->add_option("--deltas", cfg.deltas, "separations, comma separated");
  packing->add_option("--pool", cfg.pool, "random bodies in the pool")->check(CLI::PositiveNumber);
  packing->add_option("--seed", cfg.seed, "master seed");
  packing->add_option("--out", cfg.out, "output directory");
  packing->add_option("--workers", cfg.workers, "accepted for uniformity; packing is sequential");

  auto* normalize_cmd = app.add_subcommand("normalize", "MVEE normalization T as JSON");
  normalize_cmd->add_option("--body", cfg.body, "builtin name or body JSON file");
  normalize_cmd->add_option("--dim", cfg.dim, "ambient dimension");
  normalize_cmd->add_option("--out", cfg.out, "also write normalize.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*constants_cmd) return cmd_constants(cfg);
    if (*simulate) return cmd_simulate(cfg);
    if (*tail) return cmd_tail(cfg);
    if (*moments) return cmd_moments(cfg);
    if (*fit) return cmd_fit(cfg);
    if (*packing) return cmd_packing(cfg);
    if (*normalize_cmd) return cmd_normalize(cfg);
  } catch (const Error& e) {
    std::cerr << "randpoly: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "randpoly: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
