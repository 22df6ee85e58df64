#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "percolab/generators.hpp"
#include "percolab/stats.hpp"

namespace percolab {

/// Interval statement about a critical value with the probe rows behind it.
/// Every verdict is empirical: finite radii stand in for infinite clusters.
struct CriticalEstimate {
  std::string kind;  // "pc" | "pT_diag" | "pTa_diag" | "ptilde_a"
  Interval interval;
  bool conclusive = true;
  std::vector<EstimateReport> evidence;
  nlohmann::json verdicts = nlohmann::json::array();  // per probed p
  std::string notes;

  nlohmann::json to_json() const;
};

enum class SurvivalVerdict { kSubcritical, kSupercritical, kInconclusive };
std::string to_string(SurvivalVerdict v);

struct PcSettings {
  std::vector<int> radii{25, 50, 100};
  double theta_min = 0.02;
  double max_relative_drop = 0.2;
  double tol = 0.02;
  std::size_t replicas = 2000;
  std::uint64_t seed = 1;
};

// Supercritical: survival >= theta_min at every radius with relative drops
// below max_relative_drop; subcritical: below theta_min / 4 at the largest.
SurvivalVerdict classify_survival(const std::vector<EstimateReport>& profile,
                                  const PcSettings& s);

CriticalEstimate pc_bisect(const GraphSource& src, double p_lo, double p_hi,
                           const PcSettings& settings);

enum class GrowthVerdict { kConverging, kDiverging, kInconclusive };
std::string to_string(GrowthVerdict v);

// Increment-ratio classifier on truncated sums at increasing radii: ratios
// of consecutive increments over the top three truncations all > 0.95
// diverge, all < 0.5 converge.
GrowthVerdict classify_growth(const std::vector<double>& truncated_means);

struct DiagSettings {
  std::vector<int> radii{10, 20, 30, 40, 50, 60};
  std::size_t instances = 20;   // sampled roots (quenched)
  std::size_t replicas = 200;   // percolation replicas per root (quenched)
  std::uint64_t seed = 1;
};

// Quenched: classifies E_p^omega |C_o cap B(o,R)| per sampled root; the
// verdict at p is the majority. Reports the crossover band.
CriticalEstimate pt_diagnostic(const GraphSource& src, const std::vector<double>& ps,
                               const DiagSettings& settings);

// Annealed: classifies the root-averaged truncated means; `replicas` roots,
// one percolation sample each. Heavy-tail warning from max / mean.
CriticalEstimate pta_diagnostic(const GraphSource& src, const std::vector<double>& ps,
                                const DiagSettings& settings);

// Root of p (1 - (1 - p)^3)^2 = 1/2 in (1/2, 1).
double p0_root();
double p0_map(double p);

}  // namespace percolab
