#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace percolab {

/// Vertex of a lazily generated graph: a 64-bit digest of the vertex's
/// address relative to the root (or an exact packing of coordinates for
/// lattice-like generators). Equal digests denote equal vertices within an
/// instance; the root of every instance is produced first.
struct VertexId {
  std::uint64_t value = 0;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct VertexIdHash {
  std::size_t operator()(VertexId v) const noexcept {
    return static_cast<std::size_t>(v.value * 0x9e3779b97f4a7c15ULL >> 7) ^
           static_cast<std::size_t>(v.value);
  }
};

template <class T>
using VertexMap = std::unordered_map<VertexId, T, VertexIdHash>;

// Hard cap on vertices touched by one exploration; PERCOLAB_BUDGET overrides.
std::size_t exploration_budget();
void set_exploration_budget(std::size_t cap);

/// Rooted, locally finite graph exposed as a neighbor oracle.
///
/// Neighbor lists are memoized per instance so repeated queries return the
/// identical list. Instances are not safe for concurrent mutation; workers
/// each sample their own instance.
class LocalGraph {
 public:
  LocalGraph(std::uint64_t seed, VertexId root) : seed_(seed), root_(root) {}
  virtual ~LocalGraph() = default;
  LocalGraph(const LocalGraph&) = delete;
  LocalGraph& operator=(const LocalGraph&) = delete;

  std::uint64_t seed() const noexcept { return seed_; }
  VertexId root() const noexcept { return root_; }

  const std::vector<VertexId>& neighbors(VertexId v);
  std::size_t degree(VertexId v) { return neighbors(v).size(); }

  // True when every instance is a tree (graph distance equals tree depth).
  virtual bool is_tree() const { return false; }
  // Isomorphism-invariant parent, where the graph has one (canopy levels).
  virtual std::optional<VertexId> parent(VertexId) { return std::nullopt; }
  // Isomorphism-invariant integer label, e.g. canopy level.
  virtual std::optional<std::int64_t> label(VertexId) { return std::nullopt; }
  // Human-readable address for debugging.
  virtual std::string address(VertexId v) const;

  std::size_t explored() const noexcept { return cache_.size(); }

 protected:
  virtual std::vector<VertexId> compute_neighbors(VertexId v) = 0;
  void set_root(VertexId r) noexcept { root_ = r; }

 private:
  std::uint64_t seed_;
  VertexId root_;
  VertexMap<std::vector<VertexId>> cache_;
};

struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite simple graph on vertices 0..n-1.
class FiniteGraph {
 public:
  FiniteGraph() = default;
  explicit FiniteGraph(int n) : adj_(static_cast<std::size_t>(n)) {}
  FiniteGraph(int n, const std::vector<Edge>& edges);

  int add_vertex();
  int add_edge(int u, int v);  // returns edge index

  int vertex_count() const noexcept { return static_cast<int>(adj_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  // (neighbor, edge index) pairs
  const std::vector<std::pair<int, int>>& incident(int v) const {
    return adj_[static_cast<std::size_t>(v)];
  }
  int degree(int v) const { return static_cast<int>(incident(v).size()); }
  bool has_edge(int u, int v) const;
  bool is_connected() const;
  bool is_forest() const;
  std::vector<int> distances_from(int source) const;  // -1 = unreachable

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
};

/// Finite vertex set S containing a root, with its induced edges and edge
/// boundary. Boundary entries hold the inner endpoint index; parallel
/// boundary edges appear once each.
struct RootedSet {
  FiniteGraph graph;
  int root = 0;
  std::vector<int> boundary_inner;

  int boundary_size() const noexcept {
    return static_cast<int>(boundary_inner.size());
  }
};

/// Induced ball B(center, r) with its edge boundary.
struct Ball {
  VertexId center;
  int radius = 0;
  std::vector<VertexId> vertices;  // BFS order, center first
  std::vector<int> dist;           // distance from the center
  std::vector<Edge> edges;         // indices into vertices, u < v
  struct BoundaryEdge {
    int inner;        // index into vertices
    VertexId outer;   // vertex outside the ball
  };
  std::vector<BoundaryEdge> boundary;

  std::optional<int> index_of(VertexId v) const;
  FiniteGraph graph() const;
  RootedSet rooted_set() const;
  nlohmann::json to_json() const;
};

Ball ball(LocalGraph& g, VertexId center, int r,
          std::size_t cap = exploration_budget());

std::optional<int> distance(LocalGraph& g, VertexId x, VertexId y, int cap);

// Shortest cycle inside the ball's induced graph; nullopt when acyclic.
std::optional<int> girth(const FiniteGraph& g);
inline std::optional<int> girth_in_ball(const Ball& b) { return girth(b.graph()); }

/// Canonical form of a finite rooted graph.
struct CanonicalCode {
  std::vector<std::uint8_t> bytes;
  std::string hex() const;
  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
};

// Cap on vertices accepted by canonical_code.
inline constexpr int kCanonicalCap = 64;

CanonicalCode canonical_code(const FiniteGraph& g, int root);
CanonicalCode canonical_code(const Ball& b);

}  // namespace percolab

template <>
struct std::hash<percolab::CanonicalCode> {
  std::size_t operator()(const percolab::CanonicalCode& c) const noexcept;
};
