#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace percolab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

double normal_quantile(double p);

// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double confidence = 0.95);

/// Streaming mean and variance (Welford), mergeable.
class MeanAccumulator {
 public:
  void add(double x) noexcept;
  void merge(const MeanAccumulator& other) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  // sample variance
  double standard_error() const noexcept;
  double max() const noexcept { return max_; }
  Interval ci(double confidence = 0.95) const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double max_ = 0.0;
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;
};

// Pearson goodness of fit. Cells whose expected count is below min_expected
// are pooled from the right into a tail cell.
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& probs,
                               double min_expected = 5.0);

/// One estimate with its interval and run parameters; one CSV row.
struct EstimateReport {
  std::string experiment;
  nlohmann::json source;
  double p = 0.0;
  int radius = 0;
  std::size_t replicas = 0;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double se = 0.0;
  std::uint64_t seed = 0;
  nlohmann::json extra = nlohmann::json::object();

  Interval ci() const noexcept { return {ci_lo, ci_hi}; }
  std::string source_hash() const;
  nlohmann::json to_json() const;
  static EstimateReport from_json(const nlohmann::json& j);
};

std::string csv_header();
std::string csv_row(const EstimateReport& r, const std::string& config_hash = "");
// Fixed 12-significant-digit formatting used by all CSV output.
std::string format_double(double x);

}  // namespace percolab
