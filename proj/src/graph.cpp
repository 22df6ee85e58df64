#include "percolab/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <deque>
#include <queue>
#include <sstream>

#include "percolab/error.hpp"

namespace percolab {

namespace {
std::atomic<std::size_t> g_budget{0};

std::size_t default_budget() {
  if (const char* env = std::getenv("PERCOLAB_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 5'000'000;
}
}  // namespace

std::size_t exploration_budget() {
  std::size_t b = g_budget.load(std::memory_order_relaxed);
  if (b == 0) {
    b = default_budget();
    g_budget.store(b, std::memory_order_relaxed);
  }
  return b;
}

void set_exploration_budget(std::size_t cap) { g_budget.store(cap); }

const std::vector<VertexId>& LocalGraph::neighbors(VertexId v) {
  auto it = cache_.find(v);
  if (it != cache_.end()) return it->second;
  auto list = compute_neighbors(v);
  return cache_.emplace(v, std::move(list)).first->second;
}

std::string LocalGraph::address(VertexId v) const {
  std::ostringstream os;
  os << std::hex << v.value;
  return os.str();
}

FiniteGraph::FiniteGraph(int n, const std::vector<Edge>& edges)
    : adj_(static_cast<std::size_t>(n)) {
  for (const auto& e : edges) add_edge(e.u, e.v);
}

int FiniteGraph::add_vertex() {
  adj_.emplace_back();
  return vertex_count() - 1;
}

int FiniteGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count() || u == v)
    throw ValidationError("invalid edge");
  const int idx = edge_count();
  edges_.push_back({std::min(u, v), std::max(u, v)});
  adj_[static_cast<std::size_t>(u)].emplace_back(v, idx);
  adj_[static_cast<std::size_t>(v)].emplace_back(u, idx);
  return idx;
}

bool FiniteGraph::has_edge(int u, int v) const {
  for (auto [w, e] : incident(u))
    if (w == v) return true;
  return false;
}

std::vector<int> FiniteGraph::distances_from(int source) const {
  std::vector<int> d(static_cast<std::size_t>(vertex_count()), -1);
  std::queue<int> q;
  d[static_cast<std::size_t>(source)] = 0;
  q.push(source);
  while (!q.empty()) {
    const int x = q.front();
    q.pop();
    for (auto [y, e] : incident(x)) {
      if (d[static_cast<std::size_t>(y)] < 0) {
        d[static_cast<std::size_t>(y)] = d[static_cast<std::size_t>(x)] + 1;
        q.push(y);
      }
    }
  }
  return d;
}

bool FiniteGraph::is_connected() const {
  if (vertex_count() == 0) return true;
  const auto d = distances_from(0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

bool FiniteGraph::is_forest() const {
  // A graph is a forest iff |E| = |V| - #components.
  std::vector<int> seen(static_cast<std::size_t>(vertex_count()), 0);
  int components = 0;
  for (int s = 0; s < vertex_count(); ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    ++components;
    std::vector<int> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (auto [y, e] : incident(x)) {
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          stack.push_back(y);
        }
      }
    }
  }
  return edge_count() == vertex_count() - components;
}

std::optional<int> Ball::index_of(VertexId v) const {
  const auto it = std::find(vertices.begin(), vertices.end(), v);
  if (it == vertices.end()) return std::nullopt;
  return static_cast<int>(it - vertices.begin());
}

FiniteGraph Ball::graph() const {
  return FiniteGraph(static_cast<int>(vertices.size()), edges);
}

RootedSet Ball::rooted_set() const {
  RootedSet s;
  s.graph = graph();
  s.root = 0;
  s.boundary_inner.reserve(boundary.size());
  for (const auto& b : boundary) s.boundary_inner.push_back(b.inner);
  return s;
}

nlohmann::json Ball::to_json() const {
  nlohmann::json j;
  j["center"] = center.value;
  j["radius"] = radius;
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (auto v : vertices) vs.push_back(v.value);
  auto& es = j["edges"] = nlohmann::json::array();
  for (auto e : edges)
    es.push_back({vertices[static_cast<std::size_t>(e.u)].value,
                  vertices[static_cast<std::size_t>(e.v)].value});
  auto& bs = j["boundary"] = nlohmann::json::array();
  for (const auto& b : boundary)
    bs.push_back({vertices[static_cast<std::size_t>(b.inner)].value, b.outer.value});
  return j;
}

Ball ball(LocalGraph& g, VertexId center, int r, std::size_t cap) {
  if (r < 0) throw ValidationError("ball radius must be nonnegative");
  Ball b;
  b.center = center;
  b.radius = r;
  VertexMap<int> index;
  index.emplace(center, 0);
  b.vertices.push_back(center);
  b.dist.push_back(0);
  for (std::size_t head = 0; head < b.vertices.size(); ++head) {
    const int d = b.dist[head];
    if (d == r) continue;
    const VertexId x = b.vertices[head];
    for (VertexId y : g.neighbors(x)) {
      if (index.emplace(y, static_cast<int>(b.vertices.size())).second) {
        b.vertices.push_back(y);
        b.dist.push_back(d + 1);
        if (b.vertices.size() > cap)
          throw BudgetError("ball exploration exceeded the vertex budget");
      }
    }
  }
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    const int ii = static_cast<int>(i);
    for (VertexId y : g.neighbors(b.vertices[i])) {
      const auto it = index.find(y);
      if (it == index.end()) {
        b.boundary.push_back({ii, y});
      } else if (it->second > ii) {
        b.edges.push_back({ii, it->second});
      } else if (it->second == ii) {
        throw ValidationError("self-loop in generated graph");
      }
    }
  }
  // Neighbor symmetry on every induced edge.
  for (const auto& e : b.edges) {
    const auto& back = g.neighbors(b.vertices[static_cast<std::size_t>(e.v)]);
    if (std::find(back.begin(), back.end(),
                  b.vertices[static_cast<std::size_t>(e.u)]) == back.end())
      throw std::logic_error("asymmetric neighbor oracle");
  }
  return b;
}

std::optional<int> distance(LocalGraph& g, VertexId x, VertexId y, int cap) {
  if (x == y) return 0;
  VertexMap<int> seen;
  seen.emplace(x, 0);
  std::deque<VertexId> q{x};
  while (!q.empty()) {
    const VertexId v = q.front();
    q.pop_front();
    const int d = seen[v];
    if (d >= cap) continue;
    for (VertexId w : g.neighbors(v)) {
      if (seen.emplace(w, d + 1).second) {
        if (w == y) return d + 1;
        if (seen.size() > exploration_budget())
          throw BudgetError("distance search exceeded the vertex budget");
        q.push_back(w);
      }
    }
  }
  return std::nullopt;
}

std::optional<int> girth(const FiniteGraph& g) {
  int best = -1;
  const int n = g.vertex_count();
  std::vector<int> d(static_cast<std::size_t>(n));
  std::vector<int> via(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::fill(d.begin(), d.end(), -1);
    std::queue<int> q;
    d[static_cast<std::size_t>(s)] = 0;
    via[static_cast<std::size_t>(s)] = -1;
    q.push(s);
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      for (auto [y, e] : g.incident(x)) {
        if (e == via[static_cast<std::size_t>(x)]) continue;
        if (d[static_cast<std::size_t>(y)] < 0) {
          d[static_cast<std::size_t>(y)] = d[static_cast<std::size_t>(x)] + 1;
          via[static_cast<std::size_t>(y)] = e;
          q.push(y);
        } else {
          const int len = d[static_cast<std::size_t>(x)] + d[static_cast<std::size_t>(y)] + 1;
          if (best < 0 || len < best) best = len;
        }
      }
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

std::string CanonicalCode::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

}  // namespace percolab

std::size_t std::hash<percolab::CanonicalCode>::operator()(
    const percolab::CanonicalCode& c) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : c.bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}
