#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

namespace percolab {

/// Distribution on {0, 1, ..., K} sampled by inversion.
class DiscreteLaw {
 public:
  DiscreteLaw() = default;
  explicit DiscreteLaw(std::vector<double> pmf, double tail_mass = 0.0);

  const std::vector<double>& pmf() const noexcept { return pmf_; }
  double prob(std::size_t k) const noexcept {
    return k < pmf_.size() ? pmf_[k] : 0.0;
  }
  std::size_t support_size() const noexcept { return pmf_.size(); }
  double tail_mass() const noexcept { return tail_mass_; }
  double mean() const;
  // Probability generating function.
  double pgf(double t) const;
  // Inverse-CDF draw from a uniform u in [0,1).
  std::size_t sample(double u) const;

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  double tail_mass_ = 0.0;
};

/// Offspring distribution X of a Galton-Watson tree.
using OffspringLaw = DiscreteLaw;

// {"constant": k} | {"uniform": [a, b]} | {"pmf": [p0, p1, ...]}
OffspringLaw offspring_law_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DiscreteLaw& law);

/// Extinction probability q and the laws of the surviving (X*) and dying
/// (X-bar) offspring counts.
struct SurvivalDecomposition {
  double q = 1.0;
  DiscreteLaw star_law;  // pgf (f(q + (1-q)t) - q) / (1-q); empty when q = 1
  DiscreteLaw bar_law;   // pgf f(qt) / q; empty when q = 0
};

SurvivalDecomposition extinction_probability(const OffspringLaw& law);

/// Law of the root degree of the unimodular Galton-Watson tree:
/// P(deg o = k) = P(X = k-1) / (k E[1/(X+1)]).
DiscreteLaw ugw_root_degree_law(const OffspringLaw& law);

/// P(X = k) = c k^(-exponent) on k >= 1, truncated where the remaining mass
/// drops below `tail_cut`. c is computed by direct summation plus an
/// integral bound for the tail.
struct PowerLaw {
  double exponent = 2.5;
  double normalizer = 0.0;  // c
  std::size_t kmax = 0;
  double tail_mass = 0.0;   // mass beyond kmax that the sampler discards
  DiscreteLaw law;          // index k, with law.prob(0) = 0

  static PowerLaw make(double exponent, double tail_cut = 1e-9);
  // The same support reweighted by w(k) and renormalized; records the
  // weighted mass lost to truncation.
  DiscreteLaw biased(double (*weight)(std::size_t)) const;
  double biased_tail_mass(double (*weight)(std::size_t)) const;
};

}  // namespace percolab
