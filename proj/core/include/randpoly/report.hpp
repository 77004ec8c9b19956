#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "randpoly/experiments.hpp"
#include "randpoly/metrics.hpp"
#include "randpoly/rng.hpp"

namespace randpoly::report {

/// Header carried by every output file. `config` is the validated run
/// configuration; together with the seed it regenerates the file.
struct Metadata {
  std::string command;
  std::uint64_t seed = 0;
  std::string algorithm_id{RngStream::kAlgorithmId};
  std::string grid;
  nlohmann::json config = nlohmann::json::object();
};

/// Shortest round-trip decimal ("{:.17g}").
std::string format_real(double v);

/// "# key: value" lines; CSV readers skip lines starting with '#'.
std::string metadata_block(const Metadata& meta);
nlohmann::json metadata_json(const Metadata& meta);

/// Columns body_id,d,n,rep,v_rel.
std::string records_csv(const Metadata& meta, std::span<const ReplicateRecord> records);
/// Columns x,S,ci_lo,ci_hi.
std::string tail_csv(const Metadata& meta, std::span<const TailPoint> points);
nlohmann::json tail_summary_json(const Metadata& meta, const TailCurve& curve);
/// Columns body_id,d,n,q,estimate,se,reps.
std::string moments_csv(const Metadata& meta, const MomentTable& table);
MomentTable parse_moments_csv(const std::string& text);
/// Leading '#' lines of a CSV document, verbatim.
std::vector<std::string> comment_lines(const std::string& text);

nlohmann::json to_json(const FitResult& fit);
/// Columns delta,count,saturated.
std::string packing_csv(const Metadata& meta, const PackingResult& result);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace randpoly::report
