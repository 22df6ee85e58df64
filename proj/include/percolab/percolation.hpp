#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "percolab/generators.hpp"
#include "percolab/graph.hpp"
#include "percolab/stats.hpp"

namespace percolab {

// Uniform attached to edge `item` of replica `stream`. An edge is open at p
// iff its uniform is below p, which couples all p monotonically.
inline double edge_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t item) {
  return keyed_uniform(seed, stream, item);
}
// Edge key for lazily generated graphs.
inline std::uint64_t edge_key(VertexId u, VertexId v) {
  return unordered_pair_key(u.value, v.value);
}

/// Open/closed states of the edges of a finite graph.
struct PercConfig {
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<bool> open;  // indexed like graph.edges()

  std::size_t open_count() const;
};

PercConfig percolate(const FiniteGraph& g, double p, std::uint64_t seed, std::uint64_t stream);

class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  bool unite(int a, int b);
  int size_of(int x) { return size_[static_cast<std::size_t>(find(x))]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

/// Open clusters of a finite graph.
struct ClusterPartition {
  std::vector<int> cluster;  // cluster id per vertex, ids dense from 0
  std::vector<int> sizes;    // per cluster id

  int count() const noexcept { return static_cast<int>(sizes.size()); }
  bool connected(int u, int v) const { return cluster[static_cast<std::size_t>(u)] == cluster[static_cast<std::size_t>(v)]; }
  int size_of(int v) const { return sizes[static_cast<std::size_t>(cluster[static_cast<std::size_t>(v)])]; }
};

ClusterPartition clusters(const FiniteGraph& g, const std::vector<bool>& open);
ClusterPartition clusters(const FiniteGraph& g, const PercConfig& cfg);

// Vertices reachable from `root` through open edges (BFS).
std::vector<int> open_cluster_bfs(const FiniteGraph& g, const std::vector<bool>& open, int root);

// Per-replica cap on vertices touched by the survival and cluster probes.
inline constexpr std::size_t kReplicaCap = 1'000'000;

/// Largest graph distance from the root reached by the open cluster, capped
/// at max_radius. Replica `stream` selects the edge uniforms.
int cluster_reach(LocalGraph& g, double p, int max_radius, std::uint64_t seed,
                  std::uint64_t stream, std::size_t cap = kReplicaCap);

// P(o <-> dB(o, R)) with a Wilson interval.
EstimateReport survival_probe(const GraphSource& src, double p, int radius,
                              std::size_t replicas, std::uint64_t seed);
// Same for several radii on one exploration per replica (shared coupling).
std::vector<EstimateReport> survival_profile(const GraphSource& src, double p,
                                             const std::vector<int>& radii,
                                             std::size_t replicas, std::uint64_t seed);

/// |C_o cap B(o, R)| for each R, where C_o is the open cluster of the root
/// for percolation restricted to the ball B(o, R). Nondecreasing in R.
std::vector<double> truncated_cluster_sizes(LocalGraph& g, double p,
                                            const std::vector<int>& radii, std::uint64_t seed,
                                            std::uint64_t stream, std::size_t cap = kReplicaCap);

// E|C_o cap B(o, R)| per radius, averaged over roots; extra["max_over_mean"]
// records the heavy-tail ratio.
std::vector<EstimateReport> expected_cluster_size_probe(const GraphSource& src, double p,
                                                        const std::vector<int>& radii,
                                                        std::size_t replicas, std::uint64_t seed);

/// Exact partial sums of E|C_o| on the canopy for a root at a given level.
struct CanopyClusterSeries {
  std::vector<double> partial;    // partial[d] = sum_{d' <= d} count(n, d') p^d'
  std::vector<double> increment;  // count(n, d) p^d
  // First depth whose increment drops below 1e-9 and stays below to the end.
  std::optional<int> converged_at;
  double last_increment() const { return increment.back(); }
};

CanopyClusterSeries canopy_expected_cluster_size_exact(double p, int root_level, int depth);

// Exact P(x <-> y) by enumeration of all 2^|E| configurations (|E| <= 24).
double connectivity_oracle(const FiniteGraph& g, double p, int x, int y);
// P(root <-> v) for every v, from one enumeration.
std::vector<double> connection_probabilities(const FiniteGraph& g, double p, int root);
inline constexpr int kOracleEdgeCap = 24;

// Q_n with vertex (x, y) at index (x + n) + (y + n)(2n + 1).
FiniteGraph lattice_box(int n);

// P((0,n), (0,-n), (n,0), (-n,0) share an open cluster of Q_n).
EstimateReport four_point_crossing(int n, double p, std::size_t replicas, std::uint64_t seed);

struct VolumeRow {
  int radius = 0;
  double mean = 0.0;
  double max = 0.0;
};
std::vector<VolumeRow> ball_volume_profile(const GraphSource& src, const std::vector<int>& radii,
                                           std::size_t replicas, std::uint64_t seed);

}  // namespace percolab
