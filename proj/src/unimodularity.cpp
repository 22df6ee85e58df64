#include "percolab/unimodularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "percolab/error.hpp"
#include "percolab/parallel.hpp"

namespace percolab {

using nlohmann::json;

json MtpReport::to_json() const {
  return {{"function", function}, {"source", source}, {"replicas", replicas}, {"seed", seed},
          {"alpha", alpha}, {"sent", {{"mean", sent_mean}, {"se", sent_se}}},
          {"received", {{"mean", received_mean}, {"se", received_se}}},
          {"difference", {{"mean", diff_mean}, {"se", diff_se}}}, {"z", z}, {"pass", pass}};
}

TransportFunction edge_indicator() {
  return {"edge", 1, [](LocalGraph&, VertexId, VertexId, int d) { return d == 1 ? 1.0 : 0.0; }};
}

TransportFunction parent_indicator() {
  return {"parent", 1, [](LocalGraph& g, VertexId x, VertexId y, int d) {
            if (d != 1) return 0.0;
            const auto p = g.parent(x);
            return p && *p == y ? 1.0 : 0.0;
          }};
}

TransportFunction ball_size_weighted() {
  return {"ball_size", 1, [](LocalGraph& g, VertexId x, VertexId, int d) {
            if (d != 1) return 0.0;
            return static_cast<double>(ball(g, x, 2).vertices.size());
          }};
}

TransportFunction boundary_edge_counter() {
  return {"boundary_edges", 1, [](LocalGraph& g, VertexId x, VertexId y, int d) {
            if (d != 1) return 0.0;
            const auto& nx = g.neighbors(x);
            double count = 0.0;
            for (VertexId z : g.neighbors(y))
              if (z != x && std::find(nx.begin(), nx.end(), z) == nx.end()) count += 1.0;
            return count;
          }};
}

TransportFunction distance_indicator(int k) {
  if (k < 1 || k > 3) throw ValidationError("distance indicator needs 1 <= k <= 3");
  return {"distance" + std::to_string(k), k, [k](LocalGraph&, VertexId, VertexId, int d) {
            return d == k ? 1.0 : 0.0;
          }};
}

TransportFunction distance2_degree() {
  return {"distance2_degree", 2, [](LocalGraph& g, VertexId, VertexId y, int d) {
            return d == 2 ? static_cast<double>(g.degree(y)) : 0.0;
          }};
}

double TransportFunction::operator()(LocalGraph& g, VertexId x, VertexId y) const {
  if (x == y) return eval(g, x, y, 0);
  const auto d = distance(g, x, y, radius);
  return d ? eval(g, x, y, *d) : 0.0;
}

TransportFunction transport_by_name(const std::string& name) {
  if (name == "edge") return edge_indicator();
  if (name == "parent") return parent_indicator();
  if (name == "ball_size") return ball_size_weighted();
  if (name == "boundary_edges") return boundary_edge_counter();
  if (name == "distance2_degree") return distance2_degree();
  if (name.rfind("distance", 0) == 0 && name.size() == 9) return distance_indicator(name[8] - '0');
  throw ValidationError("unknown transport function: " + name);
}

std::vector<TransportFunction> standard_battery(const GraphSource& src) {
  std::vector<TransportFunction> out{edge_indicator(), ball_size_weighted(), boundary_edge_counter(),
                                     distance_indicator(2), distance2_degree()};
  if (dynamic_cast<const CanopySource*>(&src)) out.insert(out.begin() + 1, parent_indicator());
  return out;
}

std::vector<MtpReport> mtp_battery(const GraphSource& src, const std::vector<TransportFunction>& fs,
                                   std::size_t replicas, std::uint64_t seed, double alpha) {
  if (replicas < 2) throw ValidationError("mtp_test: need at least 2 replicas");
  int rmax = 0;
  for (const auto& f : fs) rmax = std::max(rmax, f.radius);
  const auto rows = parallel_map(replicas, [&](std::size_t i) {
    auto g = src.sample(replica_seed(seed, i));
    const VertexId o = g->root();
    const Ball b = ball(*g, o, rmax);
    std::vector<std::pair<double, double>> out;
    out.reserve(fs.size());
    for (const auto& f : fs) {
      double sent = 0.0, received = 0.0;
      for (std::size_t j = 0; j < b.vertices.size(); ++j) {
        if (b.dist[j] > f.radius) break;  // BFS order
        const VertexId x = b.vertices[j];
        sent += f.eval(*g, o, x, b.dist[j]);
        received += f.eval(*g, x, o, b.dist[j]);
      }
      out.emplace_back(sent, received);
    }
    return out;
  });
  const double crit = normal_quantile(1.0 - alpha / 2.0);
  std::vector<MtpReport> reports;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    MeanAccumulator s, r, d;
    for (const auto& row : rows) {
      s.add(row[k].first);
      r.add(row[k].second);
      d.add(row[k].first - row[k].second);
    }
    MtpReport rep;
    rep.function = fs[k].name;
    rep.source = src.descriptor();
    rep.replicas = replicas;
    rep.seed = seed;
    rep.alpha = alpha;
    rep.sent_mean = s.mean();
    rep.sent_se = s.standard_error();
    rep.received_mean = r.mean();
    rep.received_se = r.standard_error();
    rep.diff_mean = d.mean();
    rep.diff_se = d.standard_error();
    if (rep.diff_se > 0.0) {
      rep.z = rep.diff_mean / rep.diff_se;
    } else {
      rep.z = rep.diff_mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), rep.diff_mean);
    }
    rep.pass = std::abs(rep.z) < crit;
    reports.push_back(std::move(rep));
  }
  return reports;
}

MtpReport mtp_test(const GraphSource& src, const TransportFunction& f, std::size_t replicas,
                   std::uint64_t seed, double alpha) {
  return mtp_battery(src, {f}, replicas, seed, alpha).front();
}

json RootLawReport::to_json() const {
  return {{"statistic", statistic}, {"observed", observed}, {"expected", expected},
          {"chi_square", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value},
          {"alpha", alpha}, {"pass", pass}, {"replicas", replicas}};
}

RootStatistic root_degree_statistic() {
  return [](LocalGraph& g) { return static_cast<std::int64_t>(g.degree(g.root())); };
}

RootStatistic root_label_statistic() {
  return [](LocalGraph& g) {
    const auto l = g.label(g.root());
    if (!l) throw ValidationError("source has no root label");
    return *l;
  };
}

RootLawReport root_law_check(const GraphSource& src, const std::vector<double>& probs,
                             const RootStatistic& stat, std::size_t replicas, std::uint64_t seed,
                             double alpha, const std::string& name) {
  if (probs.empty()) throw ValidationError("root_law_check: empty law");
  const auto values = parallel_map(replicas, [&](std::size_t i) {
    auto g = src.sample(replica_seed(seed, i));
    return stat(*g);
  });
  RootLawReport rep;
  rep.statistic = name;
  rep.expected = probs;
  rep.observed.assign(probs.size(), 0.0);
  for (auto v : values) {
    const auto idx = static_cast<std::size_t>(std::clamp<std::int64_t>(v, 0, static_cast<std::int64_t>(probs.size()) - 1));
    rep.observed[idx] += 1.0;
  }
  rep.chi = chi_square_gof(rep.observed, probs);
  rep.alpha = alpha;
  rep.pass = rep.chi.p_value >= alpha;
  rep.replicas = replicas;
  return rep;
}

}  // namespace percolab
