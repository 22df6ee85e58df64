#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "percolab/graph.hpp"
#include "percolab/laws.hpp"
#include "percolab/rng.hpp"

namespace percolab {

/// Sampler of rooted graphs from a unimodular measure.
///
/// sample() is a pure function of the seed and may be called concurrently.
class GraphSource {
 public:
  virtual ~GraphSource() = default;

  virtual std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const = 0;
  // {"kind": ..., "params": {...}}
  virtual nlohmann::json descriptor() const = 0;

  // Every instance is a tree.
  virtual bool tree_instances() const { return false; }
  // Every instance is finite.
  virtual bool finite_instances() const { return false; }
  // Deterministic bound on vertex degrees, when one exists.
  virtual std::optional<int> max_degree() const { return std::nullopt; }

  std::uint64_t descriptor_hash() const;
  std::string kind() const { return descriptor().at("kind").get<std::string>(); }
};

using SourcePtr = std::shared_ptr<const GraphSource>;

// Parses a descriptor; unknown kinds and fields raise ValidationError.
SourcePtr make_source(const nlohmann::json& descriptor);

// Per-replica seed derived from a run seed.
inline std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
  return hash_combine(hash_combine(seed, 0x5eedULL), replica);
}

/// Canopy tree with root level law P(level = n) proportional to decay^(-n)
/// (decay = 2 gives the unimodular law 2^(-n-1)).
class CanopySource final : public GraphSource {
 public:
  explicit CanopySource(double decay = 2.0);

  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  std::unique_ptr<LocalGraph> sample_at_level(int level) const;
  nlohmann::json descriptor() const override;
  bool tree_instances() const override { return true; }
  std::optional<int> max_degree() const override { return 3; }

  const DiscreteLaw& level_law() const noexcept { return level_law_; }
  double decay() const noexcept { return decay_; }

 private:
  double decay_;
  DiscreteLaw level_law_;
};

/// Unimodular Galton-Watson tree, optionally conditioned to be infinite.
class UgwSource final : public GraphSource {
 public:
  UgwSource(OffspringLaw law, bool conditioned);

  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;
  bool tree_instances() const override { return true; }
  std::optional<int> max_degree() const override {
    return static_cast<int>(law_.support_size());
  }

  const OffspringLaw& law() const noexcept { return law_; }
  const SurvivalDecomposition& decomposition() const noexcept { return decomp_; }
  const DiscreteLaw& root_degree_law() const noexcept { return root_law_; }
  bool conditioned() const noexcept { return conditioned_; }

  struct Impl;

 private:
  OffspringLaw law_;
  bool conditioned_;
  SurvivalDecomposition decomp_;
  DiscreteLaw root_law_;
  std::shared_ptr<const Impl> impl_;
};

/// Directed-cover tree G_{k,l}: every branching vertex has degree k+l+1,
/// with l+1 direct branching neighbours and k neighbours reached through a
/// degree-2 vertex. Root has degree 2 with probability k/(k+2).
class GklSource final : public GraphSource {
 public:
  GklSource(int k, int l);
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;
  bool tree_instances() const override { return true; }
  std::optional<int> max_degree() const override { return k_ + l_ + 1; }
  int k() const noexcept { return k_; }
  int l() const noexcept { return l_; }

 private:
  int k_, l_;
};

// Lattice coordinates packed into a VertexId.
VertexId pack_xy(std::int32_t x, std::int32_t y);
std::pair<std::int32_t, std::int32_t> unpack_xy(VertexId v);

/// Bi-infinite path Z with root 0.
class PathSource final : public GraphSource {
 public:
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override { return {{"kind", "path"}, {"params", nlohmann::json::object()}}; }
  bool tree_instances() const override { return true; }
  std::optional<int> max_degree() const override { return 2; }
};

/// Z^2 rooted at the origin.
class Z2Source final : public GraphSource {
 public:
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override { return {{"kind", "z2"}, {"params", nlohmann::json::object()}}; }
  std::optional<int> max_degree() const override { return 4; }
};

/// Q_n = [-n, n]^2 with a uniform root.
class BoxSource final : public GraphSource {
 public:
  explicit BoxSource(int n);
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;
  bool finite_instances() const override { return true; }
  std::optional<int> max_degree() const override { return 4; }
  int n() const noexcept { return n_; }

 private:
  int n_;
};

/// The box sequence G_n: copies of Q_n at the sites of Z^2, neighbouring
/// boxes joined by paths of length `connector` between side midpoints.
/// Realized as a periodic subgraph of Z^2; root uniform on one period.
class BoxSequenceSource final : public GraphSource {
 public:
  BoxSequenceSource(int n, int connector = 2);
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;
  std::optional<int> max_degree() const override { return 4; }
  int n() const noexcept { return n_; }
  int connector() const noexcept { return connector_; }

 private:
  int n_, connector_;
};

/// Explicit finite graph with a uniform root.
class FiniteSource final : public GraphSource {
 public:
  FiniteSource(FiniteGraph g, std::optional<int> fixed_root = std::nullopt);
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;
  bool tree_instances() const override { return graph_->is_forest(); }
  bool finite_instances() const override { return true; }
  std::optional<int> max_degree() const override;
  const FiniteGraph& graph() const noexcept { return *graph_; }

 private:
  std::shared_ptr<const FiniteGraph> graph_;
  std::optional<int> fixed_root_;
};

/// Two-pointed finite graph replacing an edge.
struct EdgeKit {
  FiniteGraph graph;
  int a = 0;
  int b = 1;
};

/// Edge replacement: every base edge e = {u, v} becomes a copy of its kit
/// with the distinguished vertices glued to u and v. The root is re-biased
/// by w(o) = 1 + sum over edges at o of (|K_e| - 2)/2 and then placed on o
/// or inside an incident kit.
class EdgeReplacementSource final : public GraphSource {
 public:
  // kit: {"type": "edge"} | {"type": "path", "length": L} |
  //      {"type": "box", "m": m} | {"type": "box_by_level", "cap": c}
  EdgeReplacementSource(SourcePtr base, nlohmann::json kit);
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;
  bool tree_instances() const override;

  struct Impl;

 private:
  SourcePtr base_;
  nlohmann::json kit_;
  std::shared_ptr<const Impl> impl_;
};

/// Vertex replacement of Z^2 by boxes [0, 2X_m] x [0, 2X'_n] (X per column,
/// X' per row) wired at side midpoints. The root box is biased by its
/// vertex count unless `size_bias` is false.
class VertexReplacementSource final : public GraphSource {
 public:
  // kit: {"type": "single"} | {"type": "box_const", "n": n} |
  //      {"type": "box_law", "law": {"pmf": [...]} | {"power": a},
  //       "size_bias": true}
  explicit VertexReplacementSource(nlohmann::json kit);
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;
  std::optional<int> max_degree() const override { return 4; }

  // Law of the half side X of a non-root box.
  const DiscreteLaw& side_law() const noexcept { return side_law_; }
  // Law of the half side of the root box.
  const DiscreteLaw& root_side_law() const noexcept { return root_side_law_; }
  // Heavy-tail truncation record (zero for finite laws).
  double tail_mass() const noexcept { return tail_mass_; }
  double biased_tail_mass() const noexcept { return biased_tail_mass_; }
  std::optional<PowerLaw> power_law() const { return power_; }

  // Half sides of the root box of an instance.
  static std::pair<int, int> root_box(const LocalGraph& g);

 private:
  nlohmann::json kit_;
  DiscreteLaw side_law_;
  std::shared_ptr<const DiscreteLaw> side_ptr_;
  DiscreteLaw root_side_law_;
  std::optional<PowerLaw> power_;
  double tail_mass_ = 0.0;
  double biased_tail_mass_ = 0.0;
};

/// Quotient by label-1 edges, re-biased by 1/|C_o|.
class ContractionSource final : public GraphSource {
 public:
  // labels: {"type": "none"} | {"type": "bernoulli", "q": q} |
  //         {"type": "alternating"} (path base only) |
  //         {"type": "explicit", "edges": [[u, v], ...]} (finite base only)
  ContractionSource(SourcePtr base, nlohmann::json labels);
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;
  bool finite_instances() const override { return base_->finite_instances(); }
  bool tree_instances() const override { return base_->tree_instances(); }

  struct Impl;

 private:
  SourcePtr base_;
  nlohmann::json labels_;
  std::shared_ptr<const Impl> impl_;
};

/// Open cluster of the root in Bernoulli(p) percolation on a base
/// instance, optionally conditioned to reach chemical distance
/// `condition_radius` (retried up to `max_retries` times).
class PercClusterSource final : public GraphSource {
 public:
  PercClusterSource(SourcePtr base, double p, int condition_radius = 0,
                    int max_retries = 1000);
  std::unique_ptr<LocalGraph> sample(std::uint64_t seed) const override;
  nlohmann::json descriptor() const override;
  bool tree_instances() const override { return base_->tree_instances(); }
  bool finite_instances() const override { return base_->finite_instances(); }
  std::optional<int> max_degree() const override { return base_->max_degree(); }

 private:
  SourcePtr base_;
  double p_;
  int condition_radius_;
  int max_retries_;
};

// Sphere sizes of the canopy: count(n, d) vertices at distance d from a
// level-n vertex.
double canopy_sphere_count(int level, int d);

}  // namespace percolab
