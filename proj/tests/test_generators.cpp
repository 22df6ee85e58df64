#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "percolab/error.hpp"
#include "percolab/generators.hpp"
#include "percolab/graph.hpp"

using namespace percolab;
using nlohmann::json;

namespace {

json src(const std::string& kind, json params = json::object()) { return {{"kind", kind}, {"params", params}}; }

std::map<std::size_t, double> root_degree_freq(const GraphSource& s, std::size_t n, std::uint64_t seed = 1) {
  std::map<std::size_t, double> f;
  for (std::size_t i = 0; i < n; ++i) {
    auto g = s.sample(replica_seed(seed, i));
    f[g->degree(g->root())] += 1.0 / static_cast<double>(n);
  }
  return f;
}

// Codes of B(o, r) for r <= 4 on the same seeds.
std::vector<std::string> codes(const GraphSource& s, int r, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto g = s.sample(replica_seed(3, i));
    out.push_back(canonical_code(ball(*g, g->root(), r)).hex());
  }
  return out;
}

}  // namespace

TEST_CASE("canopy root level law and degrees") {
  const CanopySource canopy;
  double level0 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    auto g = canopy.sample(replica_seed(2, static_cast<std::uint64_t>(i)));
    if (*g->label(g->root()) == 0) level0 += 1.0 / n;
  }
  CHECK(std::abs(level0 - 0.5) < 0.01);
  for (int level = 0; level < 5; ++level) {
    auto g = canopy.sample_at_level(level);
    const Ball b = ball(*g, g->root(), 6);
    for (VertexId v : b.vertices) CHECK(g->degree(v) == (*g->label(v) == 0 ? 1u : 3u));
  }
  CHECK(canopy.level_law().tail_mass() < 1e-9);
}

TEST_CASE("canopy parent structure") {
  auto g = CanopySource().sample_at_level(3);
  const VertexId o = g->root();
  const VertexId up = *g->parent(o);
  CHECK(*g->label(up) == 4);
  int children = 0;
  for (VertexId w : g->neighbors(o))
    if (w != up) {
      CHECK(*g->parent(w) == o);
      CHECK(*g->label(w) == 2);
      ++children;
    }
  CHECK(children == 2);
}

TEST_CASE("ugw root degrees") {
  const auto two = make_source(src("ugw", {{"law", {{"constant", 2}}}}));
  CHECK(root_degree_freq(*two, 10000)[3] == doctest::Approx(1.0));
  const auto u = make_source(src("ugw", {{"law", {{"uniform", {1, 3}}}}}));
  CHECK(std::abs(root_degree_freq(*u, 100000)[2] - 6.0 / 13) < 0.01);
  const auto zero = make_source(src("ugw", {{"law", {{"constant", 0}}}}));
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto g = zero->sample(s);
    CHECK(ball(*g, g->root(), 5).vertices.size() == 2);  // a single edge
  }
}

TEST_CASE("conditioned ugw needs a supercritical law and never dies out") {
  CHECK_THROWS_AS(make_source(src("ugw", {{"law", {{"pmf", {0.5, 0.0, 0.5}}}}, {"conditioned", true}})), ValidationError);
  const auto s = make_source(src("ugw", {{"law", {{"pmf", {0.3, 0.3, 0.4}}}}, {"conditioned", true}}));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto g = s->sample(seed);
    // Follow surviving vertices by DFS down to depth 10^4.
    std::vector<std::pair<VertexId, VertexId>> stack{{g->root(), g->root()}};
    std::vector<int> depth{0};
    int deepest = 0;
    std::size_t visited = 0;
    while (!stack.empty() && deepest < 10000 && visited < 3000000) {
      const auto [v, from] = stack.back();
      const int d = depth.back();
      stack.pop_back();
      depth.pop_back();
      ++visited;
      deepest = std::max(deepest, d);
      for (VertexId w : g->neighbors(v))
        if (w != from) {
          stack.emplace_back(w, v);
          depth.push_back(d + 1);
        }
    }
    CHECK(deepest >= 10000);
  }
}

TEST_CASE("gkl root law and degrees") {
  const GklSource g(3, 5);
  const auto f = root_degree_freq(g, 100000);
  CHECK(std::abs(f.at(2) - 0.6) < 0.01);
  double mean = 0.0;
  for (auto [d, p] : f) mean += static_cast<double>(d) * p;
  CHECK(std::abs(mean - 4.8) < 0.05);
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto inst = g.sample(s);
    const Ball b = ball(*inst, inst->root(), 4);
    for (VertexId v : b.vertices) {
      const auto d = inst->degree(v);
      CHECK((d == 2 || d == 9));
    }
  }
}

TEST_CASE("lattices") {
  auto q1 = BoxSource(1).sample(0);
  CHECK(ball(*q1, q1->root(), 10).vertices.size() == 9);
  CHECK(ball(*q1, q1->root(), 10).edges.size() == 12);
  auto z = Z2Source().sample(0);
  for (VertexId v : ball(*z, z->root(), 3).vertices) CHECK(z->degree(v) == 4);
  CHECK(z->root() == pack_xy(0, 0));
  CHECK(unpack_xy(pack_xy(-3, 7)) == std::pair<std::int32_t, std::int32_t>{-3, 7});
  auto q3 = BoxSource(3).sample(0);
  const Ball all = ball(*q3, q3->root(), 20);
  int corners = 0;
  for (VertexId v : all.vertices) corners += q3->degree(v) == 2;
  CHECK(corners == 4);
}

TEST_CASE("box sequence structure") {
  const BoxSequenceSource g(3);
  std::map<std::size_t, int> degs;
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto inst = g.sample(s);
    for (VertexId v : ball(*inst, inst->root(), 3).vertices) ++degs[inst->degree(v)];
  }
  CHECK(degs.count(2) == 1);  // corners and connector vertices
  CHECK(degs.count(4) == 1);  // interior and side midpoints
  CHECK(degs.count(3) == 1);
}

TEST_CASE("identity kits leave the base unchanged") {
  const auto base = make_source(src("canopy"));
  const auto edge = make_source(src("edge_repl", {{"base", src("canopy")}, {"kit", {{"type", "edge"}}}}));
  const auto single = make_source(src("vertex_repl", {{"kit", {{"type", "single"}}}}));
  const auto z2 = make_source(src("z2"));
  const auto none = make_source(src("contraction", {{"base", src("canopy")}, {"labels", {{"type", "none"}}}}));
  for (int r = 0; r <= 4; ++r) {
    CHECK(codes(*edge, r, 50) == codes(*base, r, 50));
    if (r <= 3) {
      // Contraction resamples its base, so compare supports.
      const auto a = codes(*none, r, 400), b = codes(*base, r, 400);
      CHECK(std::set<std::string>(a.begin(), a.end()) == std::set<std::string>(b.begin(), b.end()));
    }
    CHECK(codes(*single, r, 5) == codes(*z2, r, 5));
  }
}

TEST_CASE("edge replacement") {
  // Path kits of length 2 on Z^2 subdivide every edge.
  const auto sub = make_source(src("edge_repl", {{"base", src("z2")}, {"kit", {{"type", "path"}, {"length", 2}}}}));
  int deg2 = 0, deg4 = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    auto g = sub->sample(s);
    const auto d = g->degree(g->root());
    deg2 += d == 2;
    deg4 += d == 4;
  }
  CHECK(deg2 + deg4 == 2000);
  // Two subdivision vertices per lattice vertex.
  CHECK(std::abs(deg2 / 2000.0 - 2.0 / 3.0) < 0.04);
  auto g = sub->sample(7);
  CHECK_FALSE(girth_in_ball(ball(*g, g->root(), 4)) == std::optional<int>(4));
  // Box kits on the canopy keep volume growth quadratic.
  const auto sc = make_source(src("edge_repl", {{"base", src("canopy")}, {"kit", {{"type", "box_by_level"}, {"cap", 4}}}}));
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto h = sc->sample(s);
    for (int r : {4, 8, 16}) CHECK(ball(*h, h->root(), r).vertices.size() <= static_cast<std::size_t>(10 * r * r));
  }
}

TEST_CASE("vertex replacement") {
  // Constant boxes with connector paths reproduce the box sequence.
  const auto vr = make_source(src("vertex_repl", {{"kit", {{"type", "box_const"}, {"n", 2}, {"connector", 2}}}}));
  const BoxSequenceSource bs(2);
  std::map<std::string, int> a, b;
  for (const auto& c : codes(*vr, 3, 4000)) ++a[c];
  for (const auto& c : codes(bs, 3, 4000)) ++b[c];
  CHECK(a.size() == b.size());
  for (const auto& [c, n] : a) CHECK(b.count(c) == 1);
  // Power-law boxes: root half side biased by the box side.
  const VertexReplacementSource ptk(json{{"type", "box_law"}, {"law", {{"power", 2.5}}}, {"size_bias", true}});
  CHECK(ptk.tail_mass() < 1e-9);
  const auto& law = ptk.side_law();
  const auto& root = ptk.root_side_law();
  CHECK(root.prob(2) / root.prob(1) == doctest::Approx((law.prob(2) * 5) / (law.prob(1) * 3)).epsilon(1e-9));
  CHECK_THROWS_AS(make_source(src("vertex_repl", {{"kit", {{"type", "box_const"}, {"n", 2}, {"connector", 5}}}})), ValidationError);
}

TEST_CASE("contraction") {
  FiniteGraph c6(6);
  for (int i = 0; i < 6; ++i) c6.add_edge(i, (i + 1) % 6);
  json edges = json::array();
  for (const auto& e : c6.edges()) edges.push_back({e.u, e.v});
  const json fin = src("finite", {{"n", 6}, {"edges", edges}});
  const auto c5 = make_source(src("contraction", {{"base", fin}, {"labels", {{"type", "explicit"}, {"edges", {{0, 1}}}}}}));
  auto g = c5->sample(1);
  const Ball b = ball(*g, g->root(), 10);
  CHECK(b.vertices.size() == 5);
  CHECK(b.edges.size() == 5);
  const auto alt = make_source(src("contraction", {{"base", src("path")}, {"labels", {{"type", "alternating"}}}}));
  const auto path = make_source(src("path"));
  for (int r = 0; r <= 4; ++r) CHECK(codes(*alt, r, 20) == codes(*path, r, 20));
}

TEST_CASE("percolation cluster source") {
  const auto full = make_source(src("perc_cluster", {{"base", src("z2")}, {"p", 1.0}}));
  const auto z2 = make_source(src("z2"));
  for (int r = 0; r <= 3; ++r) CHECK(codes(*full, r, 5) == codes(*z2, r, 5));
  const auto none = make_source(src("perc_cluster", {{"base", src("z2")}, {"p", 0.0}}));
  auto g = none->sample(1);
  CHECK(ball(*g, g->root(), 3).vertices.size() == 1);
  const auto sup = make_source(src("perc_cluster", {{"base", src("z2")}, {"p", 0.9}, {"condition_radius", 50}}));
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto h = sup->sample(s);
    CHECK(ball(*h, h->root(), 50).dist.back() == 50);
  }
  const auto sub = make_source(src("perc_cluster", {{"base", src("z2")}, {"p", 0.1}, {"condition_radius", 50}, {"max_retries", 20}}));
  CHECK_THROWS_AS(sub->sample(1), BudgetError);
}

TEST_CASE("descriptors round-trip and reject junk") {
  for (const auto& d : {src("canopy", {{"decay", 2.0}}), src("gkl", {{"k", 3}, {"l", 5}}), src("box_seq", {{"n", 4}, {"connector", 2}}),
                        src("ugw", {{"law", {{"pmf", {0.0, 0.5, 0.5}}}}, {"conditioned", true}})}) {
    const auto s = make_source(d);
    CHECK(make_source(s->descriptor())->descriptor() == s->descriptor());
    CHECK(make_source(s->descriptor())->descriptor_hash() == s->descriptor_hash());
  }
  CHECK_THROWS_AS(make_source(src("canoppy")), ValidationError);
  CHECK_THROWS_AS(make_source(src("canopy", {{"decay", 2}, {"extra", 1}})), ValidationError);
  CHECK_THROWS_AS(make_source(json{{"kind", "z2"}, {"junk", 1}}), ValidationError);
  CHECK_THROWS_AS(make_source(src("gkl", {{"k", 0}, {"l", 5}})), ValidationError);
}

TEST_CASE("identical seeds give identical instances") {
  for (const auto& d : {src("canopy"), src("gkl", {{"k", 2}, {"l", 1}}), src("vertex_repl", {{"kit", {{"type", "box_law"}, {"law", {{"power", 2.5}}}}}})}) {
    const auto s = make_source(d);
    CHECK(codes(*s, 3, 30) == codes(*s, 3, 30));
  }
}

TEST_CASE("canopy sphere counts") {
  CHECK(canopy_sphere_count(0, 0) == 1.0);
  CHECK(canopy_sphere_count(0, 1) == 1.0);
  CHECK(canopy_sphere_count(0, 2) == 2.0);
  CHECK(canopy_sphere_count(2, 1) == 3.0);
}
