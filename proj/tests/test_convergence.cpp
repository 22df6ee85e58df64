#include <cmath>

#include "doctest.h"
#include "percolab/convergence.hpp"
#include "percolab/error.hpp"

using namespace percolab;
using nlohmann::json;

namespace {

BallDistribution dist(int r, std::map<std::string, double> f) {
  BallDistribution d;
  d.radius = r;
  d.freq = std::move(f);
  return d;
}

double total(const BallDistribution& d) {
  double s = 0.0;
  for (const auto& [c, f] : d.freq) s += f;
  return s;
}

}  // namespace

TEST_CASE("single-code laws") {
  const auto path = make_source({{"kind", "path"}});
  for (int r : {0, 1, 4}) {
    const auto d = ball_distribution(*path, r, 200, 1);
    CHECK(d.freq.size() == 1);
    CHECK(d.freq.begin()->second == 1.0);
  }
  const auto two = make_source({{"kind", "ugw"}, {"params", {{"law", {{"constant", 2}}}}}});
  CHECK(ball_distribution(*two, 1, 500, 1).freq.size() == 1);
}

TEST_CASE("canopy radius-1 law") {
  const auto canopy = make_source({{"kind", "canopy"}});
  const auto d = ball_distribution(*canopy, 1, 40000, 3);
  REQUIRE(d.freq.size() == 2);
  for (const auto& [c, f] : d.freq) CHECK(std::abs(f - 0.5) < 0.01);
  CHECK(total(d) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(d.undersampled);
}

TEST_CASE("tv examples and errors") {
  const auto a = dist(1, {{"A", 0.5}, {"B", 0.5}});
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(a, dist(1, {{"A", 1.0}})) == doctest::Approx(0.5));
  CHECK(tv_distance(a, dist(1, {{"C", 1.0}})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(tv_distance(a, dist(2, {{"A", 1.0}})), ValidationError);
}

TEST_CASE("tv is a metric on sampled laws") {
  const std::vector<SourcePtr> srcs = {
      make_source({{"kind", "canopy"}}),
      make_source({{"kind", "ugw"}, {"params", {{"law", {{"uniform", {1, 3}}}}}}}),
      make_source({{"kind", "gkl"}, {"params", {{"k", 2}, {"l", 3}}}})};
  std::vector<BallDistribution> d;
  for (const auto& s : srcs) d.push_back(ball_distribution(*s, 2, 3000, 9));
  for (const auto& x : d)
    for (const auto& y : d) {
      CHECK(tv_distance(x, y) == doctest::Approx(tv_distance(y, x)));
      for (const auto& z : d) CHECK(tv_distance(x, z) <= tv_distance(x, y) + tv_distance(y, z) + 1e-12);
    }
}

TEST_CASE("coupled tv is monotone in r") {
  const auto a = make_source({{"kind", "box_seq"}, {"params", {{"n", 2}}}});
  const auto b = make_source({{"kind", "z2"}});
  const auto da = ball_distributions(*a, {0, 1, 2, 3}, 5000, 4);
  const auto db = ball_distributions(*b, {0, 1, 2, 3}, 5000, 4);
  for (std::size_t i = 0; i + 1 < da.size(); ++i) CHECK(tv_distance(da[i], db[i]) <= tv_distance(da[i + 1], db[i + 1]) + 1e-12);
}

TEST_CASE("self distance") {
  // Radius 3 balls of G_{3,5} exceed the canonicalization cap.
  const std::vector<std::pair<json, std::vector<int>>> cases = {
      {json{{"kind", "canopy"}}, {1, 2, 3}},
      {json{{"kind", "gkl"}, {"params", {{"k", 3}, {"l", 5}}}}, {1, 2}},
      {json{{"kind", "ugw"}, {"params", {{"law", {{"uniform", {1, 3}}}}, {"conditioned", true}}}}, {1, 2, 3}}};
  for (const auto& [d, radii] : cases) {
    const auto s = make_source(d);
    const auto x = ball_distributions(*s, radii, 100000, 1);
    const auto y = ball_distributions(*s, radii, 100000, 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
      INFO(d.dump(), " r=", x[i].radius, " codes=", x[i].freq.size());
      const double tv = tv_distance(x[i], y[i]);
      if (!x[i].undersampled) {
        CHECK(tv < 0.02);
      } else {
        // Plug-in bias dominates on large code spaces; it must shrink with replicas.
        const auto xs = ball_distribution(*s, radii[i], 10000, 3), ys = ball_distribution(*s, radii[i], 10000, 4);
        CHECK(tv < tv_distance(xs, ys));
      }
    }
  }
}

TEST_CASE("serialization") {
  const auto d = ball_distribution(*make_source({{"kind", "canopy"}}), 2, 1000, 5);
  const json j = d.to_json();
  CHECK(j.at("radius") == 2);
  CHECK(j.at("entries").size() == d.freq.size());
  CHECK(j.at("entries")[0].contains("code"));
  CHECK(BallDistribution::from_json(j).freq == d.freq);
}

TEST_CASE("locality experiment") {
  const auto target = make_source({{"kind", "ugw"}, {"params", {{"law", {{"constant", 2}}}}}});
  std::vector<LabeledSource> seq;
  for (int n : {2, 10, 50}) {
    const double q = 1.0 / n;
    seq.push_back({"n=" + std::to_string(n),
                   make_source({{"kind", "ugw"}, {"params", {{"law", {{"pmf", {0.0, 0.0, 1.0 - q, q}}}}}}})});
  }
  const auto rows = locality_experiment(seq, *target, {1, 2}, 4000, 3);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].tv > rows[4].tv);
  CHECK(rows[1].tv > rows[5].tv);
  CHECK(rows[4].tv < 0.1);
  std::vector<LabeledSource> self{{"same", target}};
  CHECK(locality_experiment(self, *target, {1, 2}, 2000, 3)[1].tv == 0.0);
}
