#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percolab/generators.hpp"
#include "percolab/graph.hpp"
#include "percolab/stats.hpp"

namespace percolab {

enum class PhiMethod { kAuto, kBrute, kTree, kMonteCarlo, kCanopySeries };

PhiMethod phi_method_from_string(const std::string& s);
std::string to_string(PhiMethod m);

/// phi_p(S): expected number of open boundary edges of S whose inner
/// endpoint is joined to the root by an open path inside S.
struct PhiResult {
  double value = 0.0;
  double se = 0.0;  // zero for exact methods
  Interval ci;
  double p = 0.0;
  PhiMethod method = PhiMethod::kAuto;
  int boundary_size = 0;
};

PhiResult phi_bruteforce(const RootedSet& s, double p);
PhiResult phi_tree(const RootedSet& s, double p);
PhiResult phi_monte_carlo(const RootedSet& s, double p, std::size_t replicas, std::uint64_t seed);
// Tree if acyclic, brute force up to 24 edges, else Monte Carlo.
PhiResult phi_auto(const RootedSet& s, double p, std::size_t mc_replicas, std::uint64_t seed);

// B(o, r) as a rooted set, cut out of a larger ball around the same center.
RootedSet sub_ball(const Ball& b, int r);

// Closed form for the canopy: 2p(sqrt2 p)^r (r even), 3/2 (sqrt2 p)^(r+1) (r odd).
double canopy_expected_phi_closed(double p, int r);
// Exact sum over root levels: p^(r+1) E|S(o, r+1)|.
double canopy_expected_phi_series(double p, int r);

/// E_mu[phi_p(B(o, r))] over sampled roots, for every (r, p) pair of a grid,
/// using the same sampled instances for all cells. Result[i][j] is radius i,
/// probability j.
std::vector<std::vector<EstimateReport>> expected_phi_grid(
    const GraphSource& src, const std::vector<int>& radii, const std::vector<double>& ps,
    PhiMethod method, std::size_t replicas, std::uint64_t seed);

EstimateReport expected_phi(const GraphSource& src, int r, double p, PhiMethod method,
                            std::size_t replicas, std::uint64_t seed);

struct PtildeEstimate {
  Interval interval;
  bool conclusive = true;
  std::vector<EstimateReport> evidence;  // one row per probed (p, r)
  std::string notes;
  EstimateReport report() const;
};

// Witness verdict at one p: E phi < 1 - 3 SE for some r <= r_max.
enum class WitnessVerdict { kWitness, kNoWitness, kInconclusive };

/// Bisection for the annealed critical value defined by ball witnesses.
PtildeEstimate ptilde_a_bisect(const GraphSource& src, int r_max, double p_lo, double p_hi,
                               double tol, std::size_t replicas, std::uint64_t seed,
                               PhiMethod method = PhiMethod::kAuto,
                               std::size_t replica_budget = 0);

struct Witness {
  int radius = 0;          // ball radius the set was cut from
  std::vector<VertexId> set;
  double phi = 0.0;
  bool trimmed = false;
};

/// First ball B(o, r), r <= r_max, with phi_p < 1; with `greedy`, balls that
/// fail are trimmed vertex by vertex before moving on.
std::optional<Witness> witness_search(LocalGraph& g, double p, int r_max, bool greedy = false);

struct PhiDecay {
  std::vector<EstimateReport> rows;
  double rate = 0.0;  // exp of the fitted slope of log E phi against r
  bool growth = false;
};

PhiDecay phi_decay_diagnostic(const GraphSource& src, double p, const std::vector<int>& radii,
                              std::size_t replicas, std::uint64_t seed);

}  // namespace percolab
