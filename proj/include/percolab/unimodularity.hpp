#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "percolab/generators.hpp"
#include "percolab/stats.hpp"

namespace percolab {

/// Nonnegative isomorphism-invariant f(omega, x, y), zero when d(x, y) > radius.
/// `eval` receives d = d(x, y) <= radius from the caller.
struct TransportFunction {
  std::string name;
  int radius = 1;
  std::function<double(LocalGraph&, VertexId x, VertexId y, int d)> eval;

  // Computes the distance itself.
  double operator()(LocalGraph& g, VertexId x, VertexId y) const;
};

struct MtpReport {
  std::string function;
  nlohmann::json source;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  double alpha = 0.01;
  double sent_mean = 0.0, sent_se = 0.0;
  double received_mean = 0.0, received_se = 0.0;
  double diff_mean = 0.0, diff_se = 0.0;
  double z = 0.0;
  bool pass = true;

  nlohmann::json to_json() const;
};

TransportFunction edge_indicator();
TransportFunction parent_indicator();       // canopy only
TransportFunction ball_size_weighted();     // 1{x~y} |B(x,2)|
TransportFunction boundary_edge_counter();  // 1{x~y} #edges from y leaving B(x,1)
TransportFunction distance_indicator(int k);
TransportFunction distance2_degree();       // 1{d(x,y)=2} deg(y)

// Built-in functions by name: edge, parent, ball_size, boundary_edges,
// distance1..3, distance2_degree.
TransportFunction transport_by_name(const std::string& name);

// Standard battery for a source (parent only where the source has one).
std::vector<TransportFunction> standard_battery(const GraphSource& src);

// Paired test on shared instances; one report per function.
std::vector<MtpReport> mtp_battery(const GraphSource& src, const std::vector<TransportFunction>& fs,
                                   std::size_t replicas, std::uint64_t seed, double alpha = 0.01);
MtpReport mtp_test(const GraphSource& src, const TransportFunction& f, std::size_t replicas,
                   std::uint64_t seed, double alpha = 0.01);

struct RootLawReport {
  std::string statistic;
  std::vector<double> observed;  // counts by value
  std::vector<double> expected;  // declared probabilities
  ChiSquareResult chi;
  double alpha = 0.01;
  bool pass = true;
  std::size_t replicas = 0;

  nlohmann::json to_json() const;
};

using RootStatistic = std::function<std::int64_t(LocalGraph&)>;
RootStatistic root_degree_statistic();
RootStatistic root_label_statistic();

// Chi-square fit of the root statistic to `probs` (values 0..probs.size()-1,
// larger values fall into the last cell).
RootLawReport root_law_check(const GraphSource& src, const std::vector<double>& probs,
                             const RootStatistic& stat, std::size_t replicas, std::uint64_t seed,
                             double alpha = 0.01, const std::string& name = "statistic");

}  // namespace percolab
