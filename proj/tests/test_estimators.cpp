#include <cmath>

#include "doctest.h"
#include "percolab/error.hpp"
#include "percolab/estimators.hpp"
#include "percolab/percolation.hpp"

using namespace percolab;
using nlohmann::json;

namespace {

EstimateReport row(int r, double est) {
  EstimateReport e;
  e.radius = r;
  e.estimate = est;
  return e;
}

SourcePtr tree3() { return make_source({{"kind", "ugw"}, {"params", {{"law", {{"constant", 2}}}}}}); }

}  // namespace

TEST_CASE("survival classifier") {
  PcSettings s;
  CHECK(classify_survival({row(25, 0.5), row(50, 0.48), row(100, 0.47)}, s) == SurvivalVerdict::kSupercritical);
  CHECK(classify_survival({row(25, 0.2), row(50, 0.02), row(100, 0.001)}, s) == SurvivalVerdict::kSubcritical);
  CHECK(classify_survival({row(25, 0.5), row(50, 0.2), row(100, 0.1)}, s) == SurvivalVerdict::kInconclusive);
  CHECK(to_string(SurvivalVerdict::kSubcritical) == "subcritical");
}

TEST_CASE("growth classifier") {
  CHECK(classify_growth({1, 2, 3, 4, 5, 6}) == GrowthVerdict::kDiverging);
  CHECK(classify_growth({1, 2, 4, 8, 16}) == GrowthVerdict::kDiverging);
  CHECK(classify_growth({1, 1.5, 1.6, 1.61, 1.611}) == GrowthVerdict::kConverging);
  CHECK(classify_growth({3, 3, 3, 3, 3}) == GrowthVerdict::kConverging);
  CHECK(classify_growth({1, 2, 2.7, 3.2, 3.6}) == GrowthVerdict::kInconclusive);
  CHECK(classify_growth({1, 2, 3}) == GrowthVerdict::kInconclusive);
}

TEST_CASE("pc on the 3-regular tree") {
  PcSettings s;
  s.tol = 0.05;
  s.seed = 3;
  const auto est = pc_bisect(*tree3(), 0.3, 0.8, s);
  CHECK(est.kind == "pc");
  CHECK(est.interval.contains(0.5));
  CHECK(est.interval.width() <= 0.1);
  CHECK(est.to_json().at("empirical") == true);
  CHECK_FALSE(est.evidence.empty());
}

TEST_CASE("pc on the path has no supercritical end") {
  PcSettings s;
  s.replicas = 500;
  const auto path = make_source({{"kind", "path"}});
  CHECK_THROWS_AS(pc_bisect(*path, 0.3, 0.9, s), BracketError);
  const auto prof = survival_profile(*path, 0.9, s.radii, s.replicas, 1);
  CHECK(classify_survival(prof, s) == SurvivalVerdict::kSubcritical);
  CHECK_THROWS_AS(pc_bisect(*tree3(), 0.7, 0.8, s), BracketError);
}

TEST_CASE("quenched diagnostic") {
  DiagSettings s;
  s.instances = 5;
  s.replicas = 100;
  const auto path = make_source({{"kind", "path"}});
  const auto pe = pt_diagnostic(*path, {0.5}, s);
  REQUIRE(pe.verdicts.size() == 1);
  CHECK(pe.verdicts[0].at("verdict") == "converging");
  const auto z = pt_diagnostic(*make_source({{"kind", "z2"}}), {0.0}, s);
  CHECK(z.evidence.front().estimate == doctest::Approx(1.0));
  s.instances = 21;
  const auto canopy = make_source({{"kind", "canopy"}});
  const auto band = pt_diagnostic(*canopy, {0.55, 0.65, 0.75, 0.85}, s);
  CHECK(band.interval.contains(1.0 / std::sqrt(2.0)));
  CHECK(band.interval.width() <= 0.1 + 1e-12);
}

TEST_CASE("annealed diagnostic") {
  DiagSettings s;
  s.replicas = 1000;
  const auto path = make_source({{"kind", "path"}});
  const auto est = pta_diagnostic(*path, {0.3, 0.5}, s);
  for (const auto& v : est.verdicts) CHECK(v.at("verdict") == "converging");
  s.radii = {4, 8, 12, 16, 20};
  const auto div = pta_diagnostic(*tree3(), {0.7}, s);
  CHECK(div.verdicts[0].at("verdict") == "diverging");
}

TEST_CASE("p0 fixed point") {
  const double r = p0_root();
  CHECK(std::abs(r - 0.583) < 0.002);
  CHECK(p0_map(r) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p0_map(0.57) < 0.5);
  CHECK(p0_map(0.60) > 0.5);
  CHECK(p0_map(1.0) == 1.0);
  double last = 0.0;
  for (double p = 0.05; p <= 1.0; p += 0.05) {
    CHECK(p0_map(p) > last);
    last = p0_map(p);
  }
}
