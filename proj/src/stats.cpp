#include "percolab/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "percolab/error.hpp"
#include "percolab/parallel.hpp"
#include "percolab/rng.hpp"

namespace percolab {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_threads(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
  const unsigned n = g_threads.load();
  if (n > 0) return n;
  return std::max(1U, std::thread::hardware_concurrency());
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<>(0.0, 1.0), p);
}

Interval wilson_interval(std::size_t k, std::size_t n, double confidence) {
  if (n == 0) return {0.0, 1.0};
  const double z = normal_quantile(0.5 + confidence / 2.0);
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double denom = 1.0 + z * z / nn;
  const double center = (phat + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {k == 0 ? 0.0 : std::max(0.0, center - half), k == n ? 1.0 : std::min(1.0, center + half)};
}

void MeanAccumulator::add(double x) noexcept {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
  if (n_ == 1 || x > max_) max_ = x;
}

void MeanAccumulator::merge(const MeanAccumulator& o) noexcept {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double total = static_cast<double>(n_ + o.n_);
  const double d = o.mean_ - mean_;
  mean_ += d * static_cast<double>(o.n_) / total;
  m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / total;
  n_ += o.n_;
  max_ = std::max(max_, o.max_);
}

double MeanAccumulator::variance() const noexcept {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double MeanAccumulator::standard_error() const noexcept {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

Interval MeanAccumulator::ci(double confidence) const {
  const double z = normal_quantile(0.5 + confidence / 2.0);
  const double se = standard_error();
  return {mean_ - z * se, mean_ + z * se};
}

ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& probs, double min_expected) {
  if (observed.size() != probs.size() || observed.empty())
    throw ValidationError("chi_square_gof: size mismatch");
  double total = 0.0;
  for (double o : observed) total += o;
  double psum = 0.0;
  for (double p : probs) psum += p;
  // Zero-probability cells carry no information unless something landed there.
  std::vector<double> o2, p2;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    if (probs[c] > 0.0) {
      o2.push_back(observed[c]);
      p2.push_back(probs[c]);
    } else if (observed[c] > 0.0) {
      ChiSquareResult r;
      r.statistic = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
      r.bins = static_cast<int>(probs.size());
      r.dof = r.bins - 1;
      return r;
    }
  }
  if (o2.size() < observed.size()) return chi_square_gof(o2, p2, min_expected);
  // Cells from the left are kept while their expectation is large enough;
  // everything after the first small cell is pooled.
  std::vector<double> obs, expct;
  std::size_t i = 0;
  for (; i < observed.size(); ++i) {
    const double e = total * probs[i] / psum;
    if (e < min_expected) break;
    obs.push_back(observed[i]);
    expct.push_back(e);
  }
  double tail_o = 0.0, tail_e = 0.0;
  for (; i < observed.size(); ++i) {
    tail_o += observed[i];
    tail_e += total * probs[i] / psum;
  }
  if (tail_e > 0.0) {
    if (tail_e < min_expected && !expct.empty()) {
      obs.back() += tail_o;
      expct.back() += tail_e;
    } else {
      obs.push_back(tail_o);
      expct.push_back(tail_e);
    }
  }
  ChiSquareResult r;
  r.bins = static_cast<int>(obs.size());
  for (std::size_t c = 0; c < obs.size(); ++c) {
    const double d = obs[c] - expct[c];
    r.statistic += d * d / expct[c];
  }
  r.dof = r.bins - 1;
  if (r.dof <= 0) {
    r.p_value = 1.0;
    return r;
  }
  boost::math::chi_squared_distribution<> chi(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(chi, r.statistic));
  return r;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string EstimateReport::source_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash_string(source.dump())));
  return buf;
}

nlohmann::json EstimateReport::to_json() const {
  return {{"experiment", experiment}, {"source", source}, {"source_hash", source_hash()},
          {"p", p}, {"radius", radius}, {"replicas", replicas}, {"estimate", estimate},
          {"ci_lo", ci_lo}, {"ci_hi", ci_hi}, {"se", se}, {"seed", seed}, {"extra", extra}};
}

EstimateReport EstimateReport::from_json(const nlohmann::json& j) {
  EstimateReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.source = j.at("source");
  r.p = j.at("p").get<double>();
  r.radius = j.at("radius").get<int>();
  r.replicas = j.at("replicas").get<std::size_t>();
  r.estimate = j.at("estimate").get<double>();
  r.ci_lo = j.at("ci_lo").get<double>();
  r.ci_hi = j.at("ci_hi").get<double>();
  r.se = j.value("se", 0.0);
  r.seed = j.at("seed").get<std::uint64_t>();
  r.extra = j.value("extra", nlohmann::json::object());
  return r;
}

std::string csv_header() {
  return "config_hash,experiment,source_hash,p,radius,replicas,estimate,ci_lo,ci_hi,seed";
}

std::string csv_row(const EstimateReport& r, const std::string& config_hash) {
  return config_hash + "," + r.experiment + "," + r.source_hash() + "," + format_double(r.p) +
         "," + std::to_string(r.radius) + "," + std::to_string(r.replicas) + "," +
         format_double(r.estimate) + "," + format_double(r.ci_lo) + "," +
         format_double(r.ci_hi) + "," + std::to_string(r.seed);
}

}  // namespace percolab
