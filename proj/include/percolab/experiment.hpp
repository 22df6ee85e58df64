#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "percolab/stats.hpp"

namespace percolab {

inline constexpr const char* kVersion = "0.1.0";

// Experiments accepted in configs; CLI subcommands map onto these.
const std::vector<std::string>& experiment_names();

// Throws ValidationError on unknown experiments, unknown or missing fields
// and malformed values. Source descriptors are parsed as part of the check.
void validate_config(const nlohmann::json& config);

// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string config_hash(const nlohmann::json& config);

struct ExperimentResult {
  std::vector<EstimateReport> rows;
  nlohmann::json document;  // full structured result; includes the rows
  std::vector<std::uint64_t> seeds;
};

ExperimentResult run_experiment(const nlohmann::json& config);

std::string render_csv(const std::vector<EstimateReport>& rows, const std::string& config_hash);

struct RunManifest {
  std::string config_hash;
  std::string version = kVersion;
  std::string started;   // UTC, ISO 8601
  double wall_seconds = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::string>> outputs;  // path, FNV-1a digest

  nlohmann::json to_json() const;
};

// Validates, runs, and writes `out` (csv or json body) plus
// `out + ".manifest.json"`. With an empty `out` the body goes to `echo`.
RunManifest run(const nlohmann::json& config, const std::string& out, const std::string& format,
                std::string* echo = nullptr);

}  // namespace percolab
