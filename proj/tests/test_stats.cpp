#include <cmath>

#include "doctest.h"
#include "percolab/parallel.hpp"
#include "percolab/stats.hpp"

using namespace percolab;

TEST_CASE("normal quantiles") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-9));
  CHECK(normal_quantile(0.995) == doctest::Approx(2.575829304).epsilon(1e-9));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
}

TEST_CASE("wilson interval") {
  const auto a = wilson_interval(0, 100);
  CHECK(a.lo == 0.0);
  CHECK(a.hi > 0.0);
  CHECK(a.hi < 0.05);
  const auto b = wilson_interval(50, 100);
  CHECK(b.contains(0.5));
  CHECK(b.lo == doctest::Approx(1 - b.hi));
  const auto c = wilson_interval(100, 100);
  CHECK(c.hi == doctest::Approx(1.0));
}

TEST_CASE("mean accumulator merges like a single pass") {
  MeanAccumulator all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::sin(i) * 3 + i % 7;
    all.add(x);
    (i < 400 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.count() == all.count());
  CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-10));
  CHECK(left.max() == all.max());
  MeanAccumulator empty;
  empty.merge(all);
  CHECK(empty.mean() == all.mean());
}

TEST_CASE("chi-square goodness of fit") {
  const auto ok = chi_square_gof({498, 502}, {0.5, 0.5});
  CHECK(ok.p_value > 0.5);
  CHECK(ok.dof == 1);
  const auto bad = chi_square_gof({600, 400}, {0.5, 0.5});
  CHECK(bad.p_value < 1e-6);
  // Sparse tail cells are pooled.
  const auto pooled = chi_square_gof({90, 8, 1, 1}, {0.9, 0.08, 0.01, 0.01});
  CHECK(pooled.bins < 4);
}

TEST_CASE("estimate reports serialize") {
  EstimateReport r;
  r.experiment = "phi";
  r.source = {{"kind", "canopy"}, {"params", nlohmann::json::object()}};
  r.p = 0.5;
  r.radius = 2;
  r.replicas = 10;
  r.estimate = 0.1234567890123456;
  r.ci_lo = 0.1;
  r.ci_hi = 0.2;
  r.seed = 7;
  const auto back = EstimateReport::from_json(r.to_json());
  CHECK(back.estimate == r.estimate);
  CHECK(back.source_hash() == r.source_hash());
  CHECK(r.source_hash().size() == 16);
  CHECK(csv_header() == "config_hash,experiment,source_hash,p,radius,replicas,estimate,ci_lo,ci_hi,seed");
  CHECK(csv_row(r, "abc").find("0.123456789012") != std::string::npos);
  CHECK(format_double(1.0 / 3) == "0.333333333333");
}

TEST_CASE("parallel map keeps index order and propagates errors") {
  set_threads(4);
  const auto v = parallel_map(1000, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == i * i);
  CHECK_THROWS(parallel_map(10, [](std::size_t i) -> int {
    if (i == 7) throw std::runtime_error("x");
    return 0;
  }));
  set_threads(0);
}
