#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "percolab/error.hpp"
#include "percolab/generators.hpp"
#include "percolab/graph.hpp"
#include "percolab/percolation.hpp"

using namespace percolab;

namespace {

FiniteGraph path_graph(int n) {
  FiniteGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

FiniteGraph permuted(const FiniteGraph& g, const std::vector<int>& perm) {
  FiniteGraph h(g.vertex_count());
  auto edges = g.edges();
  std::reverse(edges.begin(), edges.end());
  for (const auto& e : edges) h.add_edge(perm[static_cast<std::size_t>(e.v)], perm[static_cast<std::size_t>(e.u)]);
  return h;
}

}  // namespace

TEST_CASE("radius-0 ball is the center with all incident edges on the boundary") {
  auto g = Z2Source().sample(1);
  const Ball b = ball(*g, g->root(), 0);
  CHECK(b.vertices.size() == 1);
  CHECK(b.edges.empty());
  CHECK(b.boundary.size() == 4);
}

TEST_CASE("canopy leaf ball of radius 1") {
  auto g = CanopySource().sample_at_level(0);
  const Ball b = ball(*g, g->root(), 1);
  CHECK(b.vertices.size() == 2);
  CHECK(b.edges.size() == 1);
  CHECK(b.boundary.size() == 2);
  CHECK(ball(*g, g->root(), 2).vertices.size() == 4);
}

TEST_CASE("path ball of radius 3") {
  auto g = PathSource().sample(3);
  const Ball b = ball(*g, g->root(), 3);
  CHECK(b.vertices.size() == 7);
  CHECK(b.edges.size() == 6);
  CHECK(b.boundary.size() == 2);
}

TEST_CASE("distances") {
  auto path = PathSource().sample(1);
  const VertexId o = path->root();
  CHECK(distance(*path, o, o, 5) == 0);
  CHECK(distance(*path, o, path->neighbors(o)[0], 5) == 1);
  auto canopy = CanopySource().sample_at_level(0);
  const VertexId leaf = canopy->root();
  const VertexId parent = *canopy->parent(leaf);
  const VertexId grand = *canopy->parent(parent);
  CHECK(distance(*canopy, leaf, grand, 5) == 2);
  CHECK_FALSE(distance(*canopy, leaf, grand, 1).has_value());
}

TEST_CASE("ball exploration respects the budget") {
  auto g = Z2Source().sample(1);
  CHECK_THROWS_AS(ball(*g, g->root(), 50, 100), BudgetError);
}

TEST_CASE("ball nesting and boundary endpoints") {
  for (const auto& d : {nlohmann::json{{"kind", "canopy"}}, nlohmann::json{{"kind", "gkl"}, {"params", {{"k", 3}, {"l", 5}}}},
                        nlohmann::json{{"kind", "box_seq"}, {"params", {{"n", 2}}}}}) {
    const auto src = make_source(d);
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto g = src->sample(s);
      for (int r = 0; r < 4; ++r) {
        const Ball a = ball(*g, g->root(), r);
        const Ball b = ball(*g, g->root(), r + 1);
        for (VertexId v : a.vertices) CHECK(b.index_of(v).has_value());
        for (const auto& e : a.boundary) {
          CHECK_FALSE(a.index_of(e.outer).has_value());
          CHECK(b.index_of(e.outer).has_value());
        }
      }
    }
  }
}

TEST_CASE("ball extraction is deterministic per seed") {
  const auto src = make_source({{"kind", "ugw"}, {"params", {{"law", {{"uniform", {1, 3}}}}}}});
  auto g1 = src->sample(42);
  auto g2 = src->sample(42);
  const Ball a = ball(*g1, g1->root(), 4);
  const Ball b = ball(*g2, g2->root(), 4);
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("canonical codes") {
  FiniteGraph single(1);
  CHECK(canonical_code(single, 0) == canonical_code(FiniteGraph(1), 0));
  const auto p3 = path_graph(3);
  CHECK(canonical_code(p3, 1) != canonical_code(p3, 0));
  CHECK(canonical_code(p3, 0) == canonical_code(p3, 2));
  FiniteGraph big(70);
  CHECK_THROWS_AS(canonical_code(big, 0), BudgetError);
}

TEST_CASE("canonical code is invariant under relabeling") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 120; ++t) {
    const int n = 2 + static_cast<int>(rng() % 11);
    FiniteGraph g(n);
    for (int v = 1; v < n; ++v) g.add_edge(static_cast<int>(rng() % static_cast<unsigned>(v)), v);
    const int extra = static_cast<int>(rng() % 5);
    for (int k = 0; k < extra; ++k) {
      const int u = static_cast<int>(rng() % static_cast<unsigned>(n)), v = static_cast<int>(rng() % static_cast<unsigned>(n));
      if (u != v && !g.has_edge(u, v)) g.add_edge(u, v);
    }
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const int root = static_cast<int>(rng() % static_cast<unsigned>(n));
    CHECK(canonical_code(g, root) == canonical_code(permuted(g, perm), perm[static_cast<std::size_t>(root)]));
  }
}

TEST_CASE("canonical code separates non-isomorphic rooted graphs") {
  // C6 rooted anywhere vs two triangles joined by an edge.
  FiniteGraph c6(6);
  for (int i = 0; i < 6; ++i) c6.add_edge(i, (i + 1) % 6);
  FiniteGraph tt(6);
  tt.add_edge(0, 1);
  tt.add_edge(1, 2);
  tt.add_edge(2, 0);
  tt.add_edge(3, 4);
  tt.add_edge(4, 5);
  tt.add_edge(5, 3);
  tt.add_edge(0, 3);
  CHECK(canonical_code(c6, 0) != canonical_code(tt, 0));
  // Same degree sequence, different structure: 3-prism vs K_{3,3}.
  FiniteGraph prism(6), k33(6);
  for (auto [u, v] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {0, 3}, {1, 4}, {2, 5}})
    prism.add_edge(u, v);
  for (int a = 0; a < 3; ++a)
    for (int b = 3; b < 6; ++b) k33.add_edge(a, b);
  CHECK(canonical_code(prism, 0) != canonical_code(k33, 0));
  CHECK(canonical_code(lattice_box(2), 12).hex() == canonical_code(lattice_box(2), 12).hex());
}

TEST_CASE("girth") {
  CHECK_FALSE(girth(path_graph(5)).has_value());
  FiniteGraph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(2, 0);
  CHECK(girth(tri) == 3);
  auto z = Z2Source().sample(1);
  CHECK(girth_in_ball(ball(*z, z->root(), 1)) == std::nullopt);  // the star has no cycle
  CHECK(girth_in_ball(ball(*z, z->root(), 2)) == 4);
  auto c = CanopySource().sample(9);
  CHECK_FALSE(girth_in_ball(ball(*c, c->root(), 5)).has_value());
}

TEST_CASE("ball volume profile") {
  const auto rows = ball_volume_profile(PathSource(), {5}, 50, 1);
  CHECK(rows[0].mean == 11.0);
  CHECK(rows[0].max == 11.0);
  const auto t3 = ball_volume_profile(*make_source({{"kind", "ugw"}, {"params", {{"law", {{"constant", 2}}}}}}), {3}, 50, 1);
  CHECK(t3[0].mean == 22.0);
}

TEST_CASE("ball json") {
  auto g = PathSource().sample(1);
  const auto j = ball(*g, g->root(), 1).to_json();
  CHECK(j.at("vertices").size() == 3);
  CHECK(j.at("edges").size() == 2);
  CHECK(j.at("boundary").size() == 2);
  CHECK(j.contains("center"));
  CHECK(j.at("radius") == 1);
}
