#include <cmath>

#include "doctest.h"
#include "percolab/error.hpp"
#include "percolab/laws.hpp"

using namespace percolab;
using nlohmann::json;

TEST_CASE("offspring law parsing") {
  const auto c = offspring_law_from_json({{"constant", 2}});
  CHECK(c.prob(2) == 1.0);
  CHECK(c.mean() == 2.0);
  const auto u = offspring_law_from_json({{"uniform", {1, 3}}});
  CHECK(u.prob(0) == 0.0);
  CHECK(u.prob(1) == doctest::Approx(1.0 / 3));
  CHECK(u.mean() == doctest::Approx(2.0));
  CHECK_THROWS_AS(offspring_law_from_json({{"pmf", {0.5, 0.4}}}), ValidationError);
  CHECK_THROWS_AS(offspring_law_from_json({{"pmf", {1.5, -0.5}}}), ValidationError);
  CHECK_THROWS_AS(offspring_law_from_json({{"poisson", 1}}), ValidationError);
  CHECK(offspring_law_from_json(to_json(u)).pmf() == u.pmf());
}

TEST_CASE("inversion sampling hits every atom with the right weight") {
  const DiscreteLaw law({0.25, 0.0, 0.75});
  CHECK(law.sample(0.0) == 0);
  CHECK(law.sample(0.2499) == 0);
  CHECK(law.sample(0.25) == 2);
  CHECK(law.sample(0.999999) == 2);
}

TEST_CASE("extinction probabilities") {
  CHECK(extinction_probability(offspring_law_from_json({{"constant", 2}})).q == 0.0);
  CHECK(extinction_probability(offspring_law_from_json({{"pmf", {0.5, 0.0, 0.5}}})).q == 1.0);
  const auto d = extinction_probability(offspring_law_from_json({{"pmf", {0.25, 0.0, 0.75}}}));
  CHECK(d.q == doctest::Approx(1.0 / 3).epsilon(1e-10));
  // q is a fixed point.
  const auto law = offspring_law_from_json({{"pmf", {0.25, 0.0, 0.75}}});
  CHECK(std::abs(law.pgf(d.q) - d.q) < 1e-12);
}

TEST_CASE("survival decomposition laws are probability laws with the right pgfs") {
  const auto law = offspring_law_from_json({{"pmf", {0.2, 0.3, 0.1, 0.4}}});
  const auto d = extinction_probability(law);
  REQUIRE(d.q > 0.0);
  REQUIRE(d.q < 1.0);
  double s_star = 0.0, s_bar = 0.0;
  for (double x : d.star_law.pmf()) s_star += x;
  for (double x : d.bar_law.pmf()) s_bar += x;
  CHECK(s_star == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s_bar == doctest::Approx(1.0).epsilon(1e-12));
  for (double t : {0.0, 0.3, 0.7, 1.0}) {
    const double q = d.q;
    CHECK(d.star_law.pgf(t) == doctest::Approx((law.pgf(q + (1 - q) * t) - q) / (1 - q)).epsilon(1e-12));
    CHECK(d.bar_law.pgf(t) == doctest::Approx(law.pgf(q * t) / q).epsilon(1e-12));
  }
  CHECK(d.star_law.prob(0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("unimodular root degree law") {
  const auto two = ugw_root_degree_law(offspring_law_from_json({{"constant", 2}}));
  CHECK(two.prob(3) == doctest::Approx(1.0));
  const auto u = ugw_root_degree_law(offspring_law_from_json({{"uniform", {1, 3}}}));
  CHECK(u.prob(2) == doctest::Approx(6.0 / 13));
  CHECK(u.prob(3) == doctest::Approx(4.0 / 13));
  CHECK(u.prob(4) == doctest::Approx(3.0 / 13));
}

TEST_CASE("power law normalization and truncation record") {
  const auto pl = PowerLaw::make(2.5);
  // zeta(5/2) = 1.341487257250917...
  CHECK(pl.normalizer == doctest::Approx(1.0 / 1.341487257250917).epsilon(1e-9));
  CHECK(pl.tail_mass < 1e-9);
  CHECK(pl.tail_mass > 0.0);
  CHECK(pl.law.prob(0) == 0.0);
  CHECK(pl.law.prob(1) / pl.law.prob(4) == doctest::Approx(32.0));
}
