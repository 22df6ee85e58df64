#include "percolab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "percolab/error.hpp"
#include "percolab/parallel.hpp"
#include "percolab/phi.hpp"

namespace percolab {

using nlohmann::json;

json BallDistribution::to_json() const {
  json entries = json::array();
  for (const auto& [code, f] : freq) entries.push_back({{"code", code}, {"freq", f}});
  return {{"radius", radius}, {"entries", entries}, {"replicas", replicas}, {"seed", seed},
          {"undersampled", undersampled}};
}

BallDistribution BallDistribution::from_json(const json& j) {
  BallDistribution d;
  d.radius = j.at("radius").get<int>();
  for (const auto& e : j.at("entries")) d.freq[e.at("code").get<std::string>()] = e.at("freq").get<double>();
  d.replicas = j.value("replicas", std::size_t{0});
  d.seed = j.value("seed", std::uint64_t{0});
  d.undersampled = j.value("undersampled", false);
  return d;
}

std::vector<BallDistribution> ball_distributions(const GraphSource& src, const std::vector<int>& radii,
                                                 std::size_t replicas, std::uint64_t seed) {
  if (replicas == 0) throw ValidationError("ball_distribution: need replicas");
  if (radii.empty()) return {};
  const int rmax = *std::max_element(radii.begin(), radii.end());
  if (rmax < 0) throw ValidationError("ball_distribution: negative radius");
  const auto codes = parallel_map(replicas, [&](std::size_t i) {
    auto g = src.sample(replica_seed(seed, i));
    const Ball big = ball(*g, g->root(), rmax);
    std::vector<std::string> out;
    for (int r : radii) {
      const RootedSet s = sub_ball(big, r);
      out.push_back(canonical_code(s.graph, s.root).hex());
    }
    return out;
  });
  std::vector<BallDistribution> out;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& row : codes) ++counts[row[k]];
    BallDistribution d;
    d.radius = radii[k];
    d.replicas = replicas;
    d.seed = seed;
    for (const auto& [c, n] : counts) {
      d.freq[c] = static_cast<double>(n) / static_cast<double>(replicas);
      if (n < 20) d.undersampled = true;
    }
    out.push_back(std::move(d));
  }
  return out;
}

BallDistribution ball_distribution(const GraphSource& src, int r, std::size_t replicas, std::uint64_t seed) {
  return ball_distributions(src, {r}, replicas, seed).front();
}

double tv_distance(const BallDistribution& a, const BallDistribution& b) {
  if (a.radius != b.radius) throw ValidationError("tv_distance: radius mismatch");
  double s = 0.0;
  for (const auto& [c, f] : a.freq) {
    const auto it = b.freq.find(c);
    s += std::abs(f - (it == b.freq.end() ? 0.0 : it->second));
  }
  for (const auto& [c, f] : b.freq)
    if (!a.freq.count(c)) s += f;
  return std::clamp(s / 2.0, 0.0, 1.0);
}

json LocalityRow::to_json() const {
  json j = {{"label", label}, {"source", source}, {"radius", radius}, {"tv", tv}};
  if (pc) j["pc"] = pc->to_json();
  return j;
}

std::vector<LocalityRow> locality_experiment(const std::vector<LabeledSource>& sequence,
                                             const GraphSource& target, const std::vector<int>& radii,
                                             std::size_t replicas, std::uint64_t seed,
                                             const std::optional<PcPlan>& pc_plan) {
  const auto target_dists = ball_distributions(target, radii, replicas, hash_combine(seed, 0x7a));
  std::vector<LocalityRow> rows;
  for (const auto& [label, src] : sequence) {
    if (!src) throw ValidationError("locality_experiment: null source");
    const auto dists = ball_distributions(*src, radii, replicas, seed);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      LocalityRow row;
      row.label = label;
      row.source = src->descriptor();
      row.radius = radii[k];
      row.tv = tv_distance(dists[k], target_dists[k]);
      if (k == 0 && pc_plan) row.pc = pc_bisect(*src, pc_plan->p_lo, pc_plan->p_hi, pc_plan->settings);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace percolab
