#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "percolab/estimators.hpp"
#include "percolab/generators.hpp"

namespace percolab {

/// Empirical law of the rooted r-ball, keyed by canonical code (hex).
struct BallDistribution {
  int radius = 0;
  std::map<std::string, double> freq;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  // Some observed code has fewer than 20 hits.
  bool undersampled = false;

  nlohmann::json to_json() const;
  static BallDistribution from_json(const nlohmann::json& j);
};

BallDistribution ball_distribution(const GraphSource& src, int r, std::size_t replicas,
                                   std::uint64_t seed);
// Several radii from the same sampled instances.
std::vector<BallDistribution> ball_distributions(const GraphSource& src, const std::vector<int>& radii,
                                                 std::size_t replicas, std::uint64_t seed);

double tv_distance(const BallDistribution& a, const BallDistribution& b);

struct LocalityRow {
  std::string label;
  nlohmann::json source;
  int radius = 0;
  double tv = 0.0;
  std::optional<CriticalEstimate> pc;  // on the first row of each source
  nlohmann::json to_json() const;
};

struct PcPlan {
  double p_lo = 0.0;
  double p_hi = 1.0;
  PcSettings settings;
};

struct LabeledSource {
  std::string label;
  SourcePtr source;
};

// TV of each source to the target at each radius, plus a pc interval for
// every source when a plan is given.
std::vector<LocalityRow> locality_experiment(const std::vector<LabeledSource>& sequence,
                                             const GraphSource& target, const std::vector<int>& radii,
                                             std::size_t replicas, std::uint64_t seed,
                                             const std::optional<PcPlan>& pc_plan = std::nullopt);

}  // namespace percolab
