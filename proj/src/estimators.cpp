#include "percolab/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "percolab/error.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"

namespace percolab {

using nlohmann::json;

json CriticalEstimate::to_json() const {
  json ev = json::array();
  for (const auto& r : evidence) ev.push_back(r.to_json());
  return {{"kind", kind}, {"interval", {interval.lo, interval.hi}}, {"conclusive", conclusive},
          {"verdicts", verdicts}, {"notes", notes}, {"evidence", ev}, {"empirical", true}};
}

std::string to_string(SurvivalVerdict v) {
  switch (v) {
    case SurvivalVerdict::kSubcritical: return "subcritical";
    case SurvivalVerdict::kSupercritical: return "supercritical";
    default: return "inconclusive";
  }
}

std::string to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::kConverging: return "converging";
    case GrowthVerdict::kDiverging: return "diverging";
    default: return "inconclusive";
  }
}

SurvivalVerdict classify_survival(const std::vector<EstimateReport>& profile, const PcSettings& s) {
  if (profile.empty()) return SurvivalVerdict::kInconclusive;
  if (profile.back().estimate < s.theta_min / 4.0) return SurvivalVerdict::kSubcritical;
  bool stable = true;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].estimate < s.theta_min) stable = false;
    if (i > 0) {
      const double prev = profile[i - 1].estimate;
      if (prev <= 0.0 || (prev - profile[i].estimate) / prev >= s.max_relative_drop) stable = false;
    }
  }
  return stable ? SurvivalVerdict::kSupercritical : SurvivalVerdict::kInconclusive;
}

CriticalEstimate pc_bisect(const GraphSource& src, double p_lo, double p_hi, const PcSettings& s) {
  if (!(0.0 <= p_lo && p_lo < p_hi && p_hi <= 1.0)) throw ValidationError("pc_bisect: bad bracket");
  if (s.radii.empty() || !std::is_sorted(s.radii.begin(), s.radii.end()))
    throw ValidationError("pc_bisect: radii must be a nonempty increasing schedule");
  CriticalEstimate est;
  est.kind = "pc";
  auto probe = [&](double p) {
    const auto profile = survival_profile(src, p, s.radii, s.replicas, s.seed);
    const auto v = classify_survival(profile, s);
    for (const auto& r : profile) est.evidence.push_back(r);
    est.verdicts.push_back({{"p", p}, {"verdict", to_string(v)}});
    return v;
  };
  if (probe(p_lo) != SurvivalVerdict::kSubcritical)
    throw BracketError("pc_bisect: lower end of the bracket is not subcritical");
  if (probe(p_hi) != SurvivalVerdict::kSupercritical)
    throw BracketError("pc_bisect: upper end of the bracket is not supercritical");
  double lo = p_lo, hi = p_hi;
  while (hi - lo > s.tol) {
    const double mid = (lo + hi) / 2.0;
    const auto v = probe(mid);
    if (v == SurvivalVerdict::kSupercritical) {
      hi = mid;
      continue;
    }
    if (v == SurvivalVerdict::kSubcritical) {
      lo = mid;
      continue;
    }
    // Inconclusive midpoint: try the quarter points.
    bool moved = false;
    const double qlo = (lo + mid) / 2.0, qhi = (mid + hi) / 2.0;
    if (probe(qlo) == SurvivalVerdict::kSubcritical) {
      lo = qlo;
      moved = true;
    }
    if (probe(qhi) == SurvivalVerdict::kSupercritical) {
      hi = qhi;
      moved = true;
    }
    if (!moved) {
      est.conclusive = hi - lo <= s.tol;
      est.notes = "inconclusive band between " + format_double(qlo) + " and " + format_double(qhi);
      break;
    }
  }
  est.interval = {lo, hi};
  return est;
}

GrowthVerdict classify_growth(const std::vector<double>& m) {
  if (m.size() < 4) return GrowthVerdict::kInconclusive;
  const double scale = std::max(1.0, std::abs(m.back()));
  std::vector<double> inc;
  for (std::size_t i = 1; i < m.size(); ++i) inc.push_back(m[i] - m[i - 1]);
  // Ratios over the top three truncations.
  bool all_high = true, all_low = true;
  for (std::size_t k = inc.size() - 2; k < inc.size(); ++k) {
    const double prev = inc[k - 1], cur = inc[k];
    if (prev <= 1e-12 * scale) {
      // Sum already flat at this depth.
      all_high = false;
      if (cur > 1e-12 * scale) all_low = false;
      continue;
    }
    const double ratio = cur / prev;
    if (!(ratio > 0.95)) all_high = false;
    if (!(ratio < 0.5)) all_low = false;
  }
  if (all_high) return GrowthVerdict::kDiverging;
  if (all_low) return GrowthVerdict::kConverging;
  return GrowthVerdict::kInconclusive;
}

namespace {

void band_from_verdicts(CriticalEstimate& est, const std::vector<double>& ps,
                        const std::vector<GrowthVerdict>& vs) {
  double lo = 0.0, hi = 1.0;
  bool any_conv = false, any_div = false;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (vs[i] == GrowthVerdict::kConverging) {
      lo = any_conv ? std::max(lo, ps[i]) : ps[i];
      any_conv = true;
    }
    if (vs[i] == GrowthVerdict::kDiverging) {
      hi = any_div ? std::min(hi, ps[i]) : ps[i];
      any_div = true;
    }
  }
  est.interval = {lo, hi};
  est.conclusive = any_conv && any_div && lo <= hi;
  if (any_conv && any_div && lo > hi) est.notes = "verdicts are not monotone in p";
}

}  // namespace

CriticalEstimate pt_diagnostic(const GraphSource& src, const std::vector<double>& ps,
                               const DiagSettings& s) {
  if (ps.empty() || s.radii.size() < 4) throw ValidationError("pt_diagnostic: need p values and >= 4 radii");
  CriticalEstimate est;
  est.kind = "pT_diag";
  const auto* canopy = dynamic_cast<const CanopySource*>(&src);
  const int rmax = *std::max_element(s.radii.begin(), s.radii.end());
  std::vector<GrowthVerdict> verdicts;
  for (double p : ps) {
    // Per-root truncated means, one row per sampled root.
    const auto rows = parallel_map(s.instances, [&](std::size_t j) {
      auto g = src.sample(replica_seed(s.seed, j));
      std::vector<double> means(s.radii.size(), 0.0);
      if (canopy && canopy->decay() == 2.0 && p < 1.0) {
        // The canopy is determined by the root level: exact quenched sums.
        const auto series = canopy_expected_cluster_size_exact(p, static_cast<int>(*g->label(g->root())), rmax);
        for (std::size_t k = 0; k < s.radii.size(); ++k) means[k] = series.partial[static_cast<std::size_t>(s.radii[k])];
        return means;
      }
      for (std::size_t i = 0; i < s.replicas; ++i) {
        const auto sizes = truncated_cluster_sizes(*g, p, s.radii, hash_combine(s.seed, j), i);
        for (std::size_t k = 0; k < sizes.size(); ++k) means[k] += sizes[k] / static_cast<double>(s.replicas);
      }
      return means;
    });
    int conv = 0, div = 0;
    std::vector<MeanAccumulator> acc(s.radii.size());
    for (const auto& row : rows) {
      const auto v = classify_growth(row);
      conv += v == GrowthVerdict::kConverging;
      div += v == GrowthVerdict::kDiverging;
      for (std::size_t k = 0; k < row.size(); ++k) acc[k].add(row[k]);
    }
    const auto half = static_cast<int>(rows.size() / 2);
    const GrowthVerdict v = conv > half ? GrowthVerdict::kConverging
                            : div > half ? GrowthVerdict::kDiverging
                                         : GrowthVerdict::kInconclusive;
    verdicts.push_back(v);
    est.verdicts.push_back({{"p", p}, {"verdict", to_string(v)}, {"converging_roots", conv},
                            {"diverging_roots", div}, {"roots", rows.size()}});
    for (std::size_t k = 0; k < s.radii.size(); ++k) {
      EstimateReport rep;
      rep.experiment = "pT_diag";
      rep.source = src.descriptor();
      rep.p = p;
      rep.radius = s.radii[k];
      rep.replicas = s.instances;
      rep.seed = s.seed;
      rep.estimate = acc[k].mean();
      rep.se = acc[k].standard_error();
      const Interval ci = acc[k].ci();
      rep.ci_lo = ci.lo;
      rep.ci_hi = ci.hi;
      rep.extra["per_root_replicas"] = s.replicas;
      est.evidence.push_back(std::move(rep));
    }
  }
  band_from_verdicts(est, ps, verdicts);
  return est;
}

CriticalEstimate pta_diagnostic(const GraphSource& src, const std::vector<double>& ps,
                                const DiagSettings& s) {
  if (ps.empty() || s.radii.size() < 4) throw ValidationError("pta_diagnostic: need p values and >= 4 radii");
  CriticalEstimate est;
  est.kind = "pTa_diag";
  std::vector<GrowthVerdict> verdicts;
  for (double p : ps) {
    const auto rows = expected_cluster_size_probe(src, p, s.radii, s.replicas, s.seed);
    std::vector<double> means;
    double ratio = 0.0;
    for (const auto& r : rows) {
      means.push_back(r.estimate);
      ratio = std::max(ratio, r.extra.value("max_over_mean", 0.0));
    }
    const auto v = classify_growth(means);
    verdicts.push_back(v);
    json row = {{"p", p}, {"verdict", to_string(v)}, {"max_over_mean", ratio}};
    // A single root carrying a large share of the sum makes the mean unreliable.
    if (ratio > 0.1 * static_cast<double>(s.replicas)) row["heavy_tail_warning"] = true;
    est.verdicts.push_back(row);
    for (auto& r : rows) {
      auto copy = r;
      copy.experiment = "pTa_diag";
      est.evidence.push_back(std::move(copy));
    }
  }
  band_from_verdicts(est, ps, verdicts);
  return est;
}

double p0_map(double p) {
  const double a = 1.0 - std::pow(1.0 - p, 3);
  return p * a * a;
}

double p0_root() {
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = (lo + hi) / 2.0;
    (p0_map(mid) > 0.5 ? hi : lo) = mid;
  }
  return (lo + hi) / 2.0;
}

}  // namespace percolab
