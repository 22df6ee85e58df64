#include "percolab/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "percolab/error.hpp"

namespace percolab {

DiscreteLaw::DiscreteLaw(std::vector<double> pmf, double tail_mass)
    : pmf_(std::move(pmf)), tail_mass_(tail_mass) {
  if (pmf_.empty()) throw ValidationError("empty pmf");
  double total = 0.0;
  for (double p : pmf_) {
    if (!(p >= 0.0)) throw ValidationError("negative probability in pmf");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    if (total <= 0.0) throw ValidationError("pmf has zero mass");
    for (double& p : pmf_) p /= total;
  }
  cdf_.resize(pmf_.size());
  std::partial_sum(pmf_.begin(), pmf_.end(), cdf_.begin());
  cdf_.back() = 1.0;
}

double DiscreteLaw::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < pmf_.size(); ++k) m += static_cast<double>(k) * pmf_[k];
  return m;
}

double DiscreteLaw::pgf(double t) const {
  double acc = 0.0;
  for (std::size_t k = pmf_.size(); k-- > 0;) acc = acc * t + pmf_[k];
  return acc;
}

std::size_t DiscreteLaw::sample(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
  if (k >= pmf_.size()) k = pmf_.size() - 1;
  while (pmf_[k] == 0.0 && k > 0) --k;  // guard against flat cdf segments
  return k;
}

OffspringLaw offspring_law_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1)
    throw ValidationError("offspring law must have exactly one of constant/uniform/pmf");
  if (j.contains("constant")) {
    const int k = j.at("constant").get<int>();
    if (k < 0) throw ValidationError("constant offspring must be nonnegative");
    std::vector<double> pmf(static_cast<std::size_t>(k) + 1, 0.0);
    pmf.back() = 1.0;
    return OffspringLaw(std::move(pmf));
  }
  if (j.contains("uniform")) {
    const auto ab = j.at("uniform").get<std::vector<int>>();
    if (ab.size() != 2 || ab[0] < 0 || ab[1] < ab[0])
      throw ValidationError("uniform offspring needs [a, b] with 0 <= a <= b");
    std::vector<double> pmf(static_cast<std::size_t>(ab[1]) + 1, 0.0);
    for (int k = ab[0]; k <= ab[1]; ++k)
      pmf[static_cast<std::size_t>(k)] = 1.0 / (ab[1] - ab[0] + 1);
    return OffspringLaw(std::move(pmf));
  }
  if (j.contains("pmf")) {
    auto pmf = j.at("pmf").get<std::vector<double>>();
    double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
      throw ValidationError("offspring pmf must sum to 1 within 1e-12");
    return OffspringLaw(std::move(pmf));
  }
  throw ValidationError("offspring law must have exactly one of constant/uniform/pmf");
}

nlohmann::json to_json(const DiscreteLaw& law) {
  return {{"pmf", law.pmf()}};
}

SurvivalDecomposition extinction_probability(const OffspringLaw& law) {
  SurvivalDecomposition out;
  const double m = law.mean();
  if (law.prob(1) == 1.0) {
    out.q = 0.0;
  } else if (m <= 1.0) {
    out.q = 1.0;  // (sub)critical and non-degenerate
  } else {
    // Monotone iteration from 0 converges geometrically when m > 1.
    double t = 0.0;
    for (int it = 0; it < 100000; ++it) {
      const double next = law.pgf(t);
      if (std::abs(next - t) < 1e-16) {
        t = next;
        break;
      }
      t = next;
    }
    // Newton polish on f(t) - t.
    for (int it = 0; it < 5; ++it) {
      double df = 0.0;
      for (std::size_t k = law.support_size(); k-- > 1;)
        df = df * t + static_cast<double>(k) * law.prob(k);
      const double g = law.pgf(t) - t;
      const double dg = df - 1.0;
      if (dg == 0.0) break;
      const double nt = t - g / dg;
      if (!(nt >= 0.0 && nt < 1.0)) break;
      t = nt;
    }
    out.q = t;
  }
  const double q = out.q;
  const std::size_t K = law.support_size();
  if (q < 1.0) {
    std::vector<double> star(K, 0.0);
    for (std::size_t k = 1; k < K; ++k) {
      const double pk = law.prob(k);
      if (pk == 0.0) continue;
      // P(j of k children survive), j >= 1
      double binom = 1.0;
      for (std::size_t j = 0; j <= k; ++j) {
        if (j > 0) binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
        if (j == 0) continue;
        star[j] += pk * binom * std::pow(1.0 - q, static_cast<double>(j)) *
                   std::pow(q, static_cast<double>(k - j)) / (1.0 - q);
      }
    }
    out.star_law = DiscreteLaw(std::move(star), law.tail_mass());
  }
  if (q > 0.0) {
    std::vector<double> bar(K, 0.0);
    for (std::size_t k = 0; k < K; ++k)
      bar[k] = law.prob(k) * std::pow(q, static_cast<double>(k)) / q;
    out.bar_law = DiscreteLaw(std::move(bar), law.tail_mass());
  }
  return out;
}

DiscreteLaw ugw_root_degree_law(const OffspringLaw& law) {
  double inv_mean = 0.0;
  for (std::size_t k = 0; k < law.support_size(); ++k)
    inv_mean += law.prob(k) / static_cast<double>(k + 1);
  std::vector<double> pmf(law.support_size() + 1, 0.0);
  for (std::size_t k = 1; k <= law.support_size(); ++k)
    pmf[k] = law.prob(k - 1) / (static_cast<double>(k) * inv_mean);
  return DiscreteLaw(std::move(pmf), law.tail_mass());
}

PowerLaw PowerLaw::make(double exponent, double tail_cut) {
  if (!(exponent > 2.0)) throw ValidationError("power-law exponent must exceed 2");
  PowerLaw pl;
  pl.exponent = exponent;
  // Sum to N directly, then bound the tail by the integral from N + 1/2,
  // which is accurate to O(N^(-exponent-2)).
  constexpr std::size_t kDirect = 4'000'000;
  double s = 0.0;
  for (std::size_t k = kDirect; k >= 1; --k) s += std::pow(static_cast<double>(k), -exponent);
  const double tail = std::pow(kDirect + 0.5, 1.0 - exponent) / (exponent - 1.0);
  pl.normalizer = 1.0 / (s + tail);
  const double c = pl.normalizer;
  // Smallest kmax with sum_{k > kmax} c k^-a < tail_cut.
  std::size_t kmax = static_cast<std::size_t>(
      std::ceil(std::pow(tail_cut * (exponent - 1.0) / c, 1.0 / (1.0 - exponent))));
  kmax = std::max<std::size_t>(kmax, 1);
  std::vector<double> pmf(kmax + 1, 0.0);
  double kept = 0.0;
  for (std::size_t k = kmax; k >= 1; --k) {
    pmf[k] = c * std::pow(static_cast<double>(k), -exponent);
    kept += pmf[k];
  }
  pl.kmax = kmax;
  pl.tail_mass = std::max(0.0, 1.0 - kept);
  pl.law = DiscreteLaw(std::move(pmf), pl.tail_mass);
  return pl;
}

DiscreteLaw PowerLaw::biased(double (*weight)(std::size_t)) const {
  std::vector<double> pmf(kmax + 1, 0.0);
  for (std::size_t k = 1; k <= kmax; ++k) pmf[k] = law.prob(k) * weight(k);
  return DiscreteLaw(std::move(pmf), biased_tail_mass(weight));
}

double PowerLaw::biased_tail_mass(double (*weight)(std::size_t)) const {
  // Fraction of the weighted mass beyond kmax, by the integral bound.
  double kept = 0.0;
  for (std::size_t k = kmax; k >= 1; --k) kept += law.prob(k) * weight(k);
  const double a = exponent;
  const double x = static_cast<double>(kmax) + 0.5;
  // weight is at most affine in k for the callers here: w(k) <= w(1) * k
  const double w1 = weight(1);
  const double tail = normalizer * w1 * std::pow(x, 2.0 - a) / (a - 2.0);
  return tail / (kept + tail);
}

}  // namespace percolab
