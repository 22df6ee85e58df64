#include <cmath>

#include "doctest.h"
#include "percolab/error.hpp"
#include "percolab/unimodularity.hpp"

using namespace percolab;

TEST_CASE("edge indicator is balanced exactly") {
  const auto gkl = make_source({{"kind", "gkl"}, {"params", {{"k", 3}, {"l", 5}}}});
  const auto r = mtp_test(*gkl, edge_indicator(), 500, 1);
  CHECK(r.diff_mean == 0.0);
  CHECK(r.z == 0.0);
  CHECK(r.pass);
  CHECK(r.sent_mean == doctest::Approx(r.received_mean));
}

TEST_CASE("canopy parent flow") {
  const auto canopy = make_source({{"kind", "canopy"}});
  const auto ok = mtp_test(*canopy, parent_indicator(), 20000, 2);
  CHECK(ok.pass);
  CHECK(ok.sent_mean == doctest::Approx(1.0));
  const auto bad = make_source({{"kind", "canopy"}, {"params", {{"decay", 3}}}});
  const auto r = mtp_test(*bad, parent_indicator(), 20000, 2);
  CHECK_FALSE(r.pass);
  CHECK(r.diff_mean > 0.0);
}

TEST_CASE("battery on unimodular sources") {
  const auto ugw = make_source({{"kind", "ugw"}, {"params", {{"law", {{"uniform", {1, 3}}}}}}});
  const auto reps = mtp_battery(*ugw, standard_battery(*ugw), 4000, 5);
  CHECK(reps.size() == standard_battery(*ugw).size());
  for (const auto& r : reps) {
    INFO(r.function);
    CHECK(std::abs(r.z) < 4.0);
  }
  CHECK(standard_battery(*make_source({{"kind", "canopy"}})).size() == reps.size() + 1);
}

TEST_CASE("transport functions by name") {
  CHECK(transport_by_name("distance2").radius == 2);
  CHECK(transport_by_name("edge").name == "edge");
  CHECK_THROWS_AS(transport_by_name("teleport"), ValidationError);
}

TEST_CASE("root laws") {
  const auto canopy = make_source({{"kind", "canopy"}});
  std::vector<double> geo;
  for (int n = 0; n < 12; ++n) geo.push_back(std::pow(2.0, -n - 1));
  geo.back() *= 2.0;
  CHECK(root_law_check(*canopy, geo, root_label_statistic(), 20000, 1).pass);
  const auto gkl = make_source({{"kind", "gkl"}, {"params", {{"k", 3}, {"l", 5}}}});
  // Degree 2 w.p. 3/5, 9 otherwise.
  CHECK(root_law_check(*gkl, {0, 0, 0.6, 0, 0, 0, 0, 0, 0, 0.4}, root_degree_statistic(), 20000, 1).pass);
  CHECK_FALSE(root_law_check(*gkl, {0, 0, 0.55, 0, 0, 0, 0, 0, 0, 0.45}, root_degree_statistic(), 20000, 1).pass);
  CHECK(root_law_check(*gkl, {0, 0, 0, 1.0}, root_degree_statistic(), 2000, 1).chi.p_value == 0.0);
  const auto ugw = make_source({{"kind", "ugw"}, {"params", {{"law", {{"uniform", {1, 3}}}}}}});
  const auto r = root_law_check(*ugw, {0, 0, 6.0 / 13, 4.0 / 13, 3.0 / 13}, root_degree_statistic(), 20000, 1);
  CHECK(r.pass);
  CHECK(r.to_json().contains("p_value"));
}
