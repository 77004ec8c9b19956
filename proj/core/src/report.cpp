#include "randpoly/report.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "randpoly/error.hpp"

namespace randpoly::report {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, sep);) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail(ErrorCode::kParse, "bad number '" + s + "'");
  }
  if (pos != s.size()) fail(ErrorCode::kParse, "bad number '" + s + "'");
  return v;
}

}  // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

nlohmann::json metadata_json(const Metadata& meta) {
  return {{"command", meta.command}, {"seed", meta.seed},     {"algorithm_id", meta.algorithm_id},
          {"grid", meta.grid},       {"config", meta.config}};
}

std::string metadata_block(const Metadata& meta) {
  std::string out = fmt::format("# randpoly {}\n", meta.command);
  out += fmt::format("# seed: {}\n", meta.seed);
  out += fmt::format("# algorithm_id: {}\n", meta.algorithm_id);
  out += fmt::format("# grid: {}\n", meta.grid);
  out += fmt::format("# config: {}\n", meta.config.dump());
  return out;
}

std::string records_csv(const Metadata& meta, std::span<const ReplicateRecord> records) {
  std::string out = metadata_block(meta);
  out += "body_id,d,n,rep,v_rel\n";
  for (const ReplicateRecord& r : records) {
    out += fmt::format("{},{},{},{},{}\n", r.body_id, r.d, r.n, r.rep, format_real(r.v_rel));
  }
  return out;
}

std::string tail_csv(const Metadata& meta, std::span<const TailPoint> points) {
  std::string out = metadata_block(meta);
  out += "x,S,ci_lo,ci_hi\n";
  for (const TailPoint& p : points) {
    out += fmt::format("{},{},{},{}\n", format_real(p.x), format_real(p.S), format_real(p.ci_lo),
                       format_real(p.ci_hi));
  }
  return out;
}

nlohmann::json tail_summary_json(const Metadata& meta, const TailCurve& c) {
  nlohmann::json fit = nullptr;
  if (c.fit_available) {
    fit = {{"decay_rate", c.decay_rate}, {"decay_rate_se", c.decay_rate_se}, {"r2", c.fit_r2},
           {"x_lo", c.fit_x_lo},         {"x_hi", c.fit_x_hi}};
  }
  return {{"metadata", metadata_json(meta)},
          {"d", c.d},
          {"n", c.n},
          {"reps", c.reps},
          {"shift", c.shift},
          {"shifted_degenerate", c.shifted_degenerate},
          {"unshifted_fit", fit}};
}

std::string moments_csv(const Metadata& meta, const MomentTable& t) {
  std::string out = metadata_block(meta);
  out += "body_id,d,n,q,estimate,se,reps\n";
  for (std::size_t qi = 0; qi < t.q.size(); ++qi) {
    for (std::size_t k = 0; k < t.n.size(); ++k) {
      out += fmt::format("{},{},{},{},{},{},{}\n", t.body_id, t.d, t.n[k], format_real(t.q[qi]),
                         format_real(t.estimate[qi][k]), format_real(t.se[qi][k]), t.reps);
    }
  }
  return out;
}

std::vector<std::string> comment_lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    if (line.empty() || line[0] != '#') break;
    out.push_back(line);
  }
  return out;
}

MomentTable parse_moments_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  bool header = false;
  MomentTable t;
  std::map<double, std::map<std::size_t, std::pair<double, double>>> cells;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "body_id,d,n,q,estimate,se,reps") fail(ErrorCode::kParse, "not a moments table");
      header = true;
      continue;
    }
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 7) fail(ErrorCode::kParse, "moments row needs 7 fields");
    t.body_id = f[0];
    t.d = static_cast<int>(parse_double(f[1]));
    t.reps = static_cast<std::size_t>(parse_double(f[6]));
    const auto n = static_cast<std::size_t>(parse_double(f[2]));
    cells[parse_double(f[3])][n] = {parse_double(f[4]), parse_double(f[5])};
  }
  if (!header || cells.empty()) fail(ErrorCode::kParse, "moments table is empty");
  for (const auto& [q, row] : cells) {
    t.q.push_back(q);
    std::vector<std::size_t> ns;
    std::vector<double> est;
    std::vector<double> se;
    for (const auto& [n, v] : row) {
      ns.push_back(n);
      est.push_back(v.first);
      se.push_back(v.second);
    }
    if (t.n.empty()) t.n = ns;
    if (ns != t.n) fail(ErrorCode::kParse, "moments table rows use different n grids");
    t.estimate.push_back(std::move(est));
    t.se.push_back(std::move(se));
  }
  return t;
}

nlohmann::json to_json(const FitResult& f) {
  return {{"model", to_string(f.model)}, {"q", f.q},   {"slope", f.slope},
          {"intercept", f.intercept},    {"slope_se", f.slope_se},
          {"r2", f.r2},                  {"residual_rms", f.residual_rms},
          {"residual_max", f.residual_max}, {"constant", f.constant}};
}

std::string packing_csv(const Metadata& meta, const PackingResult& r) {
  std::string out = metadata_block(meta);
  out += "delta,count,saturated\n";
  for (const PackingEntry& e : r.entries) {
    out += fmt::format("{},{},{}\n", format_real(e.delta), e.count, e.saturated ? 1 : 0);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) fail(ErrorCode::kInvalidArgument, "write failed for '" + path.string() + "'");
}

}  // namespace randpoly::report
