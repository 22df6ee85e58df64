#include "percolab/percolation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>

#include "percolab/error.hpp"
#include "percolab/parallel.hpp"

namespace percolab {

namespace {
constexpr std::uint64_t kEdgeSeedTag = 0xed9eULL;

std::uint64_t edge_seed(std::uint64_t seed) { return hash_combine(seed, kEdgeSeedTag); }
}  // namespace

std::size_t PercConfig::open_count() const {
  return static_cast<std::size_t>(std::count(open.begin(), open.end(), true));
}

PercConfig percolate(const FiniteGraph& g, double p, std::uint64_t seed, std::uint64_t stream) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("percolate: p must be in [0, 1]");
  PercConfig cfg;
  cfg.p = p;
  cfg.seed = seed;
  cfg.stream = stream;
  cfg.open.resize(static_cast<std::size_t>(g.edge_count()));
  const StreamRng rng(seed, stream);
  for (int e = 0; e < g.edge_count(); ++e)
    cfg.open[static_cast<std::size_t>(e)] = rng.uniform_at(static_cast<std::uint64_t>(e)) < p;
  return cfg;
}

UnionFind::UnionFind(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  auto ux = static_cast<std::size_t>(x);
  while (parent_[ux] != static_cast<int>(ux)) {
    parent_[ux] = parent_[static_cast<std::size_t>(parent_[ux])];
    ux = static_cast<std::size_t>(parent_[ux]);
  }
  return static_cast<int>(ux);
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
  return true;
}

ClusterPartition clusters(const FiniteGraph& g, const std::vector<bool>& open) {
  if (open.size() != static_cast<std::size_t>(g.edge_count()))
    throw ValidationError("clusters: configuration length differs from edge count");
  UnionFind uf(g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e)
    if (open[static_cast<std::size_t>(e)]) uf.unite(g.edges()[static_cast<std::size_t>(e)].u, g.edges()[static_cast<std::size_t>(e)].v);
  ClusterPartition out;
  out.cluster.assign(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<int> id_of_root(static_cast<std::size_t>(g.vertex_count()), -1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto r = static_cast<std::size_t>(uf.find(v));
    if (id_of_root[r] < 0) {
      id_of_root[r] = out.count();
      out.sizes.push_back(0);
    }
    out.cluster[static_cast<std::size_t>(v)] = id_of_root[r];
    ++out.sizes[static_cast<std::size_t>(id_of_root[r])];
  }
  return out;
}

ClusterPartition clusters(const FiniteGraph& g, const PercConfig& cfg) {
  return clusters(g, cfg.open);
}

std::vector<int> open_cluster_bfs(const FiniteGraph& g, const std::vector<bool>& open, int root) {
  std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<int> out{root};
  seen[static_cast<std::size_t>(root)] = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& [w, e] : g.incident(out[i])) {
      if (!open[static_cast<std::size_t>(e)] || seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      out.push_back(w);
    }
  }
  return out;
}

int cluster_reach(LocalGraph& g, double p, int max_radius, std::uint64_t seed,
                  std::uint64_t stream, std::size_t cap) {
  if (max_radius <= 0 || p <= 0.0) return 0;
  const StreamRng rng(edge_seed(seed), stream);
  const VertexId o = g.root();
  if (g.is_tree()) {
    // Depth-first, so supercritical replicas reach max_radius quickly.
    struct Frame {
      VertexId v, from;
      int depth;
    };
    std::vector<Frame> stack{{o, o, 0}};
    int best = 0;
    std::size_t touched = 1;
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      best = std::max(best, f.depth);
      if (best >= max_radius) return max_radius;
      for (VertexId w : g.neighbors(f.v)) {
        if (f.depth > 0 && w == f.from) continue;
        if (rng.uniform_at(edge_key(f.v, w)) >= p) continue;
        if (++touched > cap) throw BudgetError("cluster_reach: replica cap exceeded before reaching the radius");
        stack.push_back({w, f.v, f.depth + 1});
      }
    }
    return best;
  }
  const Ball b = ball(g, o, max_radius, std::min(cap, exploration_budget()));
  const FiniteGraph fg = b.graph();
  std::vector<char> seen(b.vertices.size(), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  int best = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const int x = queue[i];
    for (const auto& [w, e] : fg.incident(x)) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      if (rng.uniform_at(edge_key(b.vertices[static_cast<std::size_t>(x)], b.vertices[static_cast<std::size_t>(w)])) >= p) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      best = std::max(best, b.dist[static_cast<std::size_t>(w)]);
      if (best >= max_radius) return max_radius;
      queue.push_back(w);
    }
  }
  return best;
}

std::vector<EstimateReport> survival_profile(const GraphSource& src, double p,
                                             const std::vector<int>& radii,
                                             std::size_t replicas, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("survival_probe: p must be in [0, 1]");
  if (radii.empty() || replicas == 0) throw ValidationError("survival_probe: need radii and replicas");
  const int rmax = *std::max_element(radii.begin(), radii.end());
  const auto reach = parallel_map(replicas, [&](std::size_t i) {
    auto g = src.sample(replica_seed(seed, i));
    return cluster_reach(*g, p, rmax, seed, i);
  });
  std::vector<EstimateReport> out;
  for (int r : radii) {
    const auto k = static_cast<std::size_t>(std::count_if(reach.begin(), reach.end(), [r](int x) { return x >= r; }));
    EstimateReport rep;
    rep.experiment = "survival";
    rep.source = src.descriptor();
    rep.p = p;
    rep.radius = r;
    rep.replicas = replicas;
    rep.seed = seed;
    rep.estimate = static_cast<double>(k) / static_cast<double>(replicas);
    const Interval ci = wilson_interval(k, replicas);
    rep.ci_lo = ci.lo;
    rep.ci_hi = ci.hi;
    rep.se = std::sqrt(rep.estimate * (1.0 - rep.estimate) / static_cast<double>(replicas));
    out.push_back(std::move(rep));
  }
  return out;
}

EstimateReport survival_probe(const GraphSource& src, double p, int radius, std::size_t replicas,
                              std::uint64_t seed) {
  if (radius < 0) throw ValidationError("survival_probe: radius must be >= 0");
  return survival_profile(src, p, {radius}, replicas, seed).front();
}

std::vector<double> truncated_cluster_sizes(LocalGraph& g, double p, const std::vector<int>& radii,
                                            std::uint64_t seed, std::uint64_t stream,
                                            std::size_t cap) {
  if (radii.empty()) return {};
  const int rmax = *std::max_element(radii.begin(), radii.end());
  const StreamRng rng(edge_seed(seed), stream);
  const VertexId o = g.root();
  std::vector<double> per_depth(static_cast<std::size_t>(std::max(rmax, 0)) + 1, 0.0);
  if (g.is_tree()) {
    struct Frame {
      VertexId v, from;
      int depth;
    };
    std::vector<Frame> stack{{o, o, 0}};
    std::size_t touched = 1;
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      per_depth[static_cast<std::size_t>(f.depth)] += 1.0;
      if (f.depth >= rmax) continue;
      for (VertexId w : g.neighbors(f.v)) {
        if (f.depth > 0 && w == f.from) continue;
        if (rng.uniform_at(edge_key(f.v, w)) >= p) continue;
        if (++touched > cap) throw BudgetError("truncated_cluster_sizes: replica cap exceeded");
        stack.push_back({w, f.v, f.depth + 1});
      }
    }
    std::partial_sum(per_depth.begin(), per_depth.end(), per_depth.begin());
    std::vector<double> out;
    for (int r : radii) out.push_back(per_depth[static_cast<std::size_t>(std::max(r, 0))]);
    return out;
  }
  // Add induced edges in order of their outer distance; after all edges
  // inside B(o, R) are in, the root's component is the cluster for R.
  const Ball b = ball(g, o, rmax, std::min(cap, exploration_budget()));
  std::vector<std::pair<int, int>> order;  // (max endpoint distance, edge index)
  for (std::size_t e = 0; e < b.edges.size(); ++e) {
    const Edge ed = b.edges[e];
    order.emplace_back(std::max(b.dist[static_cast<std::size_t>(ed.u)], b.dist[static_cast<std::size_t>(ed.v)]), static_cast<int>(e));
  }
  std::sort(order.begin(), order.end());
  UnionFind uf(static_cast<int>(b.vertices.size()));
  std::size_t next = 0;
  for (int r = 0; r <= rmax; ++r) {
    while (next < order.size() && order[next].first <= r) {
      const Edge ed = b.edges[static_cast<std::size_t>(order[next].second)];
      if (rng.uniform_at(edge_key(b.vertices[static_cast<std::size_t>(ed.u)], b.vertices[static_cast<std::size_t>(ed.v)])) < p)
        uf.unite(ed.u, ed.v);
      ++next;
    }
    per_depth[static_cast<std::size_t>(r)] = uf.size_of(0);
  }
  std::vector<double> out;
  for (int r : radii) out.push_back(per_depth[static_cast<std::size_t>(std::max(r, 0))]);
  return out;
}

std::vector<EstimateReport> expected_cluster_size_probe(const GraphSource& src, double p,
                                                        const std::vector<int>& radii,
                                                        std::size_t replicas, std::uint64_t seed) {
  if (radii.empty() || replicas == 0) throw ValidationError("cluster probe: need radii and replicas");
  const auto sizes = parallel_map(replicas, [&](std::size_t i) {
    auto g = src.sample(replica_seed(seed, i));
    return truncated_cluster_sizes(*g, p, radii, seed, i);
  });
  std::vector<EstimateReport> out;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    MeanAccumulator acc;
    for (const auto& row : sizes) acc.add(row[k]);
    EstimateReport rep;
    rep.experiment = "cluster_size";
    rep.source = src.descriptor();
    rep.p = p;
    rep.radius = radii[k];
    rep.replicas = replicas;
    rep.seed = seed;
    rep.estimate = acc.mean();
    rep.se = acc.standard_error();
    const Interval ci = acc.ci();
    rep.ci_lo = ci.lo;
    rep.ci_hi = ci.hi;
    rep.extra["max_over_mean"] = acc.mean() > 0 ? acc.max() / acc.mean() : 0.0;
    out.push_back(std::move(rep));
  }
  return out;
}

CanopyClusterSeries canopy_expected_cluster_size_exact(double p, int root_level, int depth) {
  if (!(p >= 0.0 && p < 1.0)) throw ValidationError("canopy series: p must be in [0, 1)");
  if (root_level < 0 || depth < 0) throw ValidationError("canopy series: level and depth must be >= 0");
  CanopyClusterSeries s;
  double acc = 0.0;
  for (int d = 0; d <= depth; ++d) {
    const double inc = canopy_sphere_count(root_level, d) * std::pow(p, d);
    acc += inc;
    s.increment.push_back(inc);
    s.partial.push_back(acc);
  }
  for (int d = depth; d >= 0 && s.increment[static_cast<std::size_t>(d)] < 1e-9; --d) s.converged_at = d;
  return s;
}

std::vector<double> connection_probabilities(const FiniteGraph& g, double p, int root) {
  const int m = g.edge_count();
  const int n = g.vertex_count();
  if (m > kOracleEdgeCap) throw BudgetError("connectivity oracle: more than 24 edges");
  if (n > 64) throw BudgetError("connectivity oracle: more than 64 vertices");
  if (root < 0 || root >= n) throw ValidationError("connectivity oracle: vertex out of range");
  // Edges in BFS discovery order so one sweep usually closes the reach set.
  std::vector<int> order;
  {
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    const auto dist = g.distances_from(root);
    std::vector<int> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), 0);
    auto key = [&](int e) {
      const Edge& ed = g.edges()[static_cast<std::size_t>(e)];
      const int du = dist[static_cast<std::size_t>(ed.u)], dv = dist[static_cast<std::size_t>(ed.v)];
      return std::min(du < 0 ? 1 << 20 : du, dv < 0 ? 1 << 20 : dv);
    };
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key(a) < key(b); });
    order = idx;
  }
  std::vector<std::uint64_t> eu(static_cast<std::size_t>(m)), ev(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const Edge& ed = g.edges()[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    eu[static_cast<std::size_t>(k)] = 1ULL << ed.u;
    ev[static_cast<std::size_t>(k)] = 1ULL << ed.v;
  }
  std::vector<double> weight(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) weight[static_cast<std::size_t>(k)] = std::pow(p, k) * std::pow(1.0 - p, m - k);
  std::vector<double> prob(static_cast<std::size_t>(n), 0.0);
  const std::uint64_t configs = 1ULL << m;
  for (std::uint64_t mask = 0; mask < configs; ++mask) {
    const double w = weight[static_cast<std::size_t>(std::popcount(mask))];
    if (w == 0.0) continue;
    std::uint64_t reach = 1ULL << root;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint64_t bits = mask; bits; bits &= bits - 1) {
        const auto k = static_cast<std::size_t>(std::countr_zero(bits));
        const bool iu = reach & eu[k], iv = reach & ev[k];
        if (iu != iv) {
          reach |= eu[k] | ev[k];
          changed = true;
        }
      }
    }
    for (std::uint64_t bits = reach; bits; bits &= bits - 1)
      prob[static_cast<std::size_t>(std::countr_zero(bits))] += w;
  }
  return prob;
}

double connectivity_oracle(const FiniteGraph& g, double p, int x, int y) {
  if (y < 0 || y >= g.vertex_count()) throw ValidationError("connectivity oracle: vertex out of range");
  if (x == y) return 1.0;
  return connection_probabilities(g, p, x)[static_cast<std::size_t>(y)];
}

FiniteGraph lattice_box(int n) {
  const int side = 2 * n + 1;
  FiniteGraph g(side * side);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      if (x + 1 < side) g.add_edge(x + y * side, x + 1 + y * side);
      if (y + 1 < side) g.add_edge(x + y * side, x + (y + 1) * side);
    }
  return g;
}

EstimateReport four_point_crossing(int n, double p, std::size_t replicas, std::uint64_t seed) {
  if (n < 1) throw ValidationError("crossing: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("crossing: p must be in [0, 1]");
  const FiniteGraph box = lattice_box(n);
  const int side = 2 * n + 1;
  auto at = [&](int x, int y) { return (x + n) + (y + n) * side; };
  const int a = at(0, n), b = at(0, -n), c = at(n, 0), d = at(-n, 0);
  const auto hits = parallel_map(replicas, [&](std::size_t i) {
    const auto cfg = percolate(box, p, edge_seed(seed), i);
    UnionFind uf(box.vertex_count());
    for (int e = 0; e < box.edge_count(); ++e)
      if (cfg.open[static_cast<std::size_t>(e)]) uf.unite(box.edges()[static_cast<std::size_t>(e)].u, box.edges()[static_cast<std::size_t>(e)].v);
    const int r = uf.find(a);
    return static_cast<char>(uf.find(b) == r && uf.find(c) == r && uf.find(d) == r);
  });
  const auto k = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 1));
  EstimateReport rep;
  rep.experiment = "crossing";
  rep.source = {{"kind", "box"}, {"params", {{"n", n}}}};
  rep.p = p;
  rep.radius = n;
  rep.replicas = replicas;
  rep.seed = seed;
  rep.estimate = replicas ? static_cast<double>(k) / static_cast<double>(replicas) : 0.0;
  const Interval ci = wilson_interval(k, replicas);
  rep.ci_lo = ci.lo;
  rep.ci_hi = ci.hi;
  rep.se = replicas ? std::sqrt(rep.estimate * (1 - rep.estimate) / static_cast<double>(replicas)) : 0.0;
  return rep;
}

std::vector<VolumeRow> ball_volume_profile(const GraphSource& src, const std::vector<int>& radii,
                                           std::size_t replicas, std::uint64_t seed) {
  if (radii.empty() || replicas == 0) throw ValidationError("volume profile: need radii and replicas");
  const int rmax = *std::max_element(radii.begin(), radii.end());
  const auto counts = parallel_map(replicas, [&](std::size_t i) {
    auto g = src.sample(replica_seed(seed, i));
    const Ball b = ball(*g, g->root(), rmax);
    std::vector<double> c;
    for (int r : radii)
      c.push_back(static_cast<double>(std::count_if(b.dist.begin(), b.dist.end(), [r](int d) { return d <= r; })));
    return c;
  });
  std::vector<VolumeRow> out;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    MeanAccumulator acc;
    for (const auto& c : counts) acc.add(c[k]);
    out.push_back({radii[k], acc.mean(), acc.max()});
  }
  return out;
}

}  // namespace percolab
