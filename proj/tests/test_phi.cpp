#include <cmath>
#include <random>

#include "doctest.h"
#include "percolab/error.hpp"
#include "percolab/generators.hpp"
#include "percolab/percolation.hpp"
#include "percolab/phi.hpp"

using namespace percolab;
using nlohmann::json;

namespace {

RootedSet ball_set(const GraphSource& s, int r, std::uint64_t seed = 1) {
  auto g = s.sample(seed);
  return ball(*g, g->root(), r).rooted_set();
}

RootedSet random_set(std::mt19937_64& rng, bool tree) {
  RootedSet s;
  const int n = 1 + static_cast<int>(rng() % 7);
  s.graph = FiniteGraph(n);
  for (int v = 1; v < n; ++v) s.graph.add_edge(static_cast<int>(rng() % static_cast<unsigned>(v)), v);
  if (!tree)
    for (int t = 0; t < 4; ++t) {
      const int u = static_cast<int>(rng() % static_cast<unsigned>(n)), v = static_cast<int>(rng() % static_cast<unsigned>(n));
      if (u != v && !s.graph.has_edge(u, v)) s.graph.add_edge(u, v);
    }
  const int b = 1 + static_cast<int>(rng() % 4);
  for (int k = 0; k < b; ++k) s.boundary_inner.push_back(static_cast<int>(rng() % static_cast<unsigned>(n)));
  return s;
}

}  // namespace

TEST_CASE("phi on small sets") {
  RootedSet star;
  star.graph = FiniteGraph(1);
  star.boundary_inner = {0, 0, 0};
  CHECK(phi_bruteforce(star, 0.2).value == doctest::Approx(0.6));
  RootedSet two;
  two.graph = FiniteGraph(2);
  two.graph.add_edge(0, 1);
  two.boundary_inner = {1};
  CHECK(phi_bruteforce(two, 0.5).value == doctest::Approx(0.25));
  CHECK(phi_bruteforce(two, 0.0).value == 0.0);
  CHECK(phi_bruteforce(two, 1.0).value == 1.0);
  star.boundary_inner = {0, 0, 0, 0};
  const auto mc = phi_monte_carlo(star, 0.7, 20000, 3);
  CHECK(std::abs(mc.value - 2.8) < 4 * mc.se);
  CHECK(phi_monte_carlo(two, 0.0, 100, 1).value == 0.0);
}

TEST_CASE("phi_tree closed forms") {
  const PathSource path;
  CHECK(phi_tree(ball_set(path, 3), 0.5).value == doctest::Approx(0.125));
  const auto t3 = make_source({{"kind", "ugw"}, {"params", {{"law", {{"constant", 2}}}}}});
  for (double p : {0.2, 0.5, 0.9}) {
    const auto s = ball_set(*t3, 1);
    CHECK(phi_tree(s, p).value == doctest::Approx(6 * p * p));
    CHECK(phi_bruteforce(s, p).value == doctest::Approx(6 * p * p).epsilon(1e-12));
  }
  RootedSet cyc;
  cyc.graph = FiniteGraph(3);
  cyc.graph.add_edge(0, 1);
  cyc.graph.add_edge(1, 2);
  cyc.graph.add_edge(2, 0);
  CHECK_THROWS_AS(phi_tree(cyc, 0.5), ValidationError);
}

TEST_CASE("brute force preconditions") {
  RootedSet disc;
  disc.graph = FiniteGraph(2);
  disc.boundary_inner = {1};
  CHECK_THROWS_AS(phi_bruteforce(disc, 0.5), ValidationError);
  CHECK_THROWS_AS(phi_bruteforce(ball_set(Z2Source(), 3), 0.5), BudgetError);
}

TEST_CASE("method agreement, bounds and monotonicity on random sets") {
  std::mt19937_64 rng(11);
  int covered = 0;
  for (int t = 0; t < 100; ++t) {
    const auto tree = random_set(rng, true);
    const double p = static_cast<double>(rng() % 1000) / 1000.0;
    CHECK(std::abs(phi_tree(tree, p).value - phi_bruteforce(tree, p).value) <= 1e-12);
    const auto g = random_set(rng, false);
    double last = -1.0;
    for (double q = 0.0; q <= 1.0; q += 0.125) {
      const double v = phi_bruteforce(g, q).value;
      CHECK(v >= last - 1e-15);
      CHECK(v <= q * static_cast<double>(g.boundary_inner.size()) + 1e-12);
      last = v;
    }
    const double exact = phi_bruteforce(g, p).value;
    const auto mc = phi_monte_carlo(g, p, 4000, static_cast<std::uint64_t>(t));
    covered += mc.ci.contains(exact) || (mc.se == 0.0 && std::abs(mc.value - exact) < 1e-12);
  }
  CHECK(covered >= 93);
}

TEST_CASE("canopy closed form") {
  CHECK(canopy_expected_phi_closed(0.5, 2) == doctest::Approx(0.5));
  CHECK(canopy_expected_phi_closed(0.5, 1) == doctest::Approx(0.75));
  CHECK(canopy_expected_phi_closed(0.3, 0) == doctest::Approx(0.6));
  // Independent exact sum over root levels.
  for (int r = 0; r <= 10; ++r)
    for (double p : {0.3, 0.6, 0.9}) CHECK(canopy_expected_phi_series(p, r) == doctest::Approx(canopy_expected_phi_closed(p, r)).epsilon(1e-9));
}

TEST_CASE("annealed phi") {
  const auto canopy = make_source({{"kind", "canopy"}});
  const auto r = expected_phi(*canopy, 2, 0.5, PhiMethod::kAuto, 100000, 1);
  CHECK(std::abs(r.estimate - 0.5) < 0.01);
  const auto gkl = make_source({{"kind", "gkl"}, {"params", {{"k", 3}, {"l", 5}}}});
  const auto g0 = expected_phi(*gkl, 0, 5.0 / 24.0, PhiMethod::kAuto, 100000, 1);
  CHECK(std::abs(g0.estimate - 1.0) < 0.01);
  const auto path = make_source({{"kind", "path"}});
  for (int rr : {0, 3, 6}) {
    const auto pr = expected_phi(*path, rr, 0.7, PhiMethod::kAuto, 50, 1);
    CHECK(pr.estimate == doctest::Approx(2 * std::pow(0.7, rr + 1)));
    CHECK(pr.se == 0.0);
  }
}

TEST_CASE("radius-0 identity") {
  const auto gkl = make_source({{"kind", "gkl"}, {"params", {{"k", 3}, {"l", 5}}}});
  const std::size_t n = 2000;
  double deg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto g = gkl->sample(replica_seed(4, i));
    deg += static_cast<double>(g->degree(g->root()));
  }
  const auto r = expected_phi(*gkl, 0, 0.3, PhiMethod::kAuto, n, 4);
  CHECK(r.estimate == doctest::Approx(0.3 * deg / n).epsilon(1e-12));
}

TEST_CASE("witness threshold bisection") {
  const auto canopy = make_source({{"kind", "canopy"}});
  const auto far = ptilde_a_bisect(*canopy, 1000, 0.5, 0.9, 0.01, 1000, 1, PhiMethod::kCanopySeries);
  CHECK(far.interval.width() <= 0.01);
  CHECK(far.interval.contains(1.0 / std::sqrt(2.0)));
  // Capped at r = 12 the threshold is the root of 2p(sqrt2 p)^12 = 1.
  const double root12 = std::pow(0.5 / std::pow(2.0, 6), 1.0 / 13);
  const auto near = ptilde_a_bisect(*canopy, 12, 0.5, 0.9, 0.01, 1000, 1, PhiMethod::kCanopySeries);
  CHECK(near.interval.contains(root12));
  CHECK_FALSE(near.interval.contains(1.0 / std::sqrt(2.0)));
  const auto gkl = make_source({{"kind", "gkl"}, {"params", {{"k", 3}, {"l", 5}}}});
  const auto lb = ptilde_a_bisect(*gkl, 0, 0.1, 0.3, 0.02, 20000, 1);
  CHECK(lb.interval.contains(5.0 / 24.0));
  const auto path = make_source({{"kind", "path"}});
  const auto pp = ptilde_a_bisect(*path, 2000, 0.5, 1.0, 0.01, 10, 1);
  CHECK(pp.interval.hi == 1.0);
  CHECK(pp.interval.lo >= 0.99);
  CHECK_THROWS_AS(ptilde_a_bisect(*path, 5, 0.9, 0.99, 0.01, 10, 1), BracketError);
}

TEST_CASE("witness search") {
  auto path = PathSource().sample(1);
  const auto w = witness_search(*path, 0.9, 10);
  REQUIRE(w.has_value());
  CHECK(w->radius == 6);
  CHECK(w->phi == doctest::Approx(2 * std::pow(0.9, 7)));
  CHECK(phi_tree(ball(*path, path->root(), 7).rooted_set(), 0.9).value == doctest::Approx(0.861).epsilon(1e-3));
  auto z = Z2Source().sample(1);
  const auto w0 = witness_search(*z, 0.0, 3);
  REQUIRE(w0.has_value());
  CHECK(w0->radius == 0);
  CHECK(w0->phi == 0.0);
  auto t3 = make_source({{"kind", "ugw"}, {"params", {{"law", {{"constant", 2}}}}}})->sample(1);
  CHECK_FALSE(witness_search(*t3, 0.6, 8).has_value());
}

TEST_CASE("phi decay diagnostic") {
  const auto path = make_source({{"kind", "path"}});
  CHECK(phi_decay_diagnostic(*path, 0.5, {0, 1, 2, 3, 4}, 20, 1).rate == doctest::Approx(0.5));
  const auto canopy = make_source({{"kind", "canopy"}});
  const auto c = phi_decay_diagnostic(*canopy, 0.8, {0, 2, 4, 6, 8}, 20000, 1);
  CHECK(c.rate > 1.0);
  CHECK(c.growth);
  const auto gkl = make_source({{"kind", "gkl"}, {"params", {{"k", 3}, {"l", 5}}}});
  CHECK(phi_decay_diagnostic(*gkl, 0.15, {0, 1, 2, 3, 4}, 20000, 1).rate < 1.0);
}

TEST_CASE("method names") {
  CHECK(phi_method_from_string("mc") == PhiMethod::kMonteCarlo);
  CHECK(to_string(PhiMethod::kCanopySeries) == "canopy_series");
  CHECK_THROWS_AS(phi_method_from_string("magic"), ValidationError);
}
