#include "percolab/phi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "percolab/error.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"

namespace percolab {

namespace {

constexpr std::size_t kBlock = 4096;
constexpr std::size_t kWitnessMcReplicas = 20000;

void check_rooted(const RootedSet& s) {
  if (s.root < 0 || s.root >= s.graph.vertex_count()) throw ValidationError("phi: root not in S");
  if (!s.graph.is_connected()) throw ValidationError("phi: S is not connected");
}

PhiResult exact_result(double value, double p, PhiMethod m, const RootedSet& s) {
  PhiResult r;
  r.value = value;
  r.ci = {value, value};
  r.p = p;
  r.method = m;
  r.boundary_size = s.boundary_size();
  return r;
}

}  // namespace

PhiMethod phi_method_from_string(const std::string& s) {
  if (s == "auto") return PhiMethod::kAuto;
  if (s == "brute") return PhiMethod::kBrute;
  if (s == "tree") return PhiMethod::kTree;
  if (s == "mc") return PhiMethod::kMonteCarlo;
  if (s == "canopy_series") return PhiMethod::kCanopySeries;
  throw ValidationError("unknown phi method '" + s + "'");
}

std::string to_string(PhiMethod m) {
  switch (m) {
    case PhiMethod::kAuto: return "auto";
    case PhiMethod::kBrute: return "brute";
    case PhiMethod::kTree: return "tree";
    case PhiMethod::kMonteCarlo: return "mc";
    case PhiMethod::kCanopySeries: return "canopy_series";
  }
  return "auto";
}

PhiResult phi_bruteforce(const RootedSet& s, double p) {
  check_rooted(s);
  if (s.graph.edge_count() > kOracleEdgeCap) throw BudgetError("phi_bruteforce: more than 24 induced edges");
  const auto prob = connection_probabilities(s.graph, p, s.root);
  double v = 0.0;
  for (int b : s.boundary_inner) v += p * prob[static_cast<std::size_t>(b)];
  return exact_result(v, p, PhiMethod::kBrute, s);
}

PhiResult phi_tree(const RootedSet& s, double p) {
  check_rooted(s);
  if (!s.graph.is_forest()) throw ValidationError("phi_tree: S contains a cycle");
  const auto dist = s.graph.distances_from(s.root);
  double v = 0.0;
  for (int b : s.boundary_inner) v += std::pow(p, dist[static_cast<std::size_t>(b)] + 1);
  return exact_result(v, p, PhiMethod::kTree, s);
}

PhiResult phi_monte_carlo(const RootedSet& s, double p, std::size_t replicas, std::uint64_t seed) {
  check_rooted(s);
  if (replicas == 0) throw ValidationError("phi_monte_carlo: replicas must be positive");
  const auto m = static_cast<std::uint64_t>(s.graph.edge_count());
  MeanAccumulator acc;
  std::vector<char> in(static_cast<std::size_t>(s.graph.vertex_count()));
  for (std::size_t i = 0; i < replicas; ++i) {
    const auto cfg = percolate(s.graph, p, seed, i);
    std::fill(in.begin(), in.end(), 0);
    for (int v : open_cluster_bfs(s.graph, cfg.open, s.root)) in[static_cast<std::size_t>(v)] = 1;
    const StreamRng rng(seed, i);
    double count = 0.0;
    for (std::size_t k = 0; k < s.boundary_inner.size(); ++k)
      if (in[static_cast<std::size_t>(s.boundary_inner[k])] && rng.uniform_at(m + k) < p) count += 1.0;
    acc.add(count);
  }
  PhiResult r;
  r.value = acc.mean();
  r.se = acc.standard_error();
  r.ci = acc.ci();
  r.p = p;
  r.method = PhiMethod::kMonteCarlo;
  r.boundary_size = s.boundary_size();
  return r;
}

PhiResult phi_auto(const RootedSet& s, double p, std::size_t mc_replicas, std::uint64_t seed) {
  if (s.graph.is_forest()) return phi_tree(s, p);
  if (s.graph.edge_count() <= kOracleEdgeCap) return phi_bruteforce(s, p);
  return phi_monte_carlo(s, p, mc_replicas, seed);
}

RootedSet sub_ball(const Ball& b, int r) {
  if (r > b.radius || r < 0) throw ValidationError("sub_ball: radius outside the ball");
  if (r == b.radius) return b.rooted_set();
  const auto n = static_cast<int>(std::upper_bound(b.dist.begin(), b.dist.end(), r) - b.dist.begin());
  RootedSet s;
  s.graph = FiniteGraph(n);
  for (const Edge& e : b.edges) {
    const bool iu = e.u < n, iv = e.v < n;
    if (iu && iv) s.graph.add_edge(e.u, e.v);
    else if (iu) s.boundary_inner.push_back(e.u);
    else if (iv) s.boundary_inner.push_back(e.v);
  }
  return s;
}

double canopy_expected_phi_closed(double p, int r) {
  if (r < 0) throw ValidationError("canopy phi: r must be >= 0");
  const double s2p = std::numbers::sqrt2 * p;
  if (r % 2 == 0) return 2.0 * p * std::pow(s2p, r);
  return 1.5 * std::pow(s2p, r + 1);
}

double canopy_expected_phi_series(double p, int r) {
  if (r < 0) throw ValidationError("canopy phi: r must be >= 0");
  // Boundary edges of a tree ball match the sphere at distance r + 1; for
  // root levels n >= d = r + 1 the sphere has 3 2^(d-1) vertices, and those
  // levels carry total mass 2^-d, contributing exactly 3/2.
  const int d = r + 1;
  double e_sphere = 1.5;
  for (int n = 0; n < d; ++n) e_sphere += std::ldexp(canopy_sphere_count(n, d), -n - 1);
  return std::pow(p, d) * e_sphere;
}

std::vector<std::vector<EstimateReport>> expected_phi_grid(
    const GraphSource& src, const std::vector<int>& radii, const std::vector<double>& ps,
    PhiMethod method, std::size_t replicas, std::uint64_t seed) {
  if (radii.empty() || ps.empty()) throw ValidationError("expected_phi: need radii and p values");
  for (double p : ps)
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("expected_phi: p must be in [0, 1]");
  for (int r : radii)
    if (r < 0) throw ValidationError("expected_phi: radius must be >= 0");
  const std::size_t nr = radii.size(), np = ps.size();
  auto base_report = [&](int r, double p) {
    EstimateReport rep;
    rep.experiment = "expected_phi";
    rep.source = src.descriptor();
    rep.p = p;
    rep.radius = r;
    rep.seed = seed;
    rep.extra["method"] = to_string(method);
    return rep;
  };
  std::vector<std::vector<EstimateReport>> out(nr);
  if (method == PhiMethod::kCanopySeries) {
    const auto* canopy = dynamic_cast<const CanopySource*>(&src);
    if (!canopy || canopy->decay() != 2.0)
      throw ValidationError("expected_phi: canopy_series needs the unimodular canopy source");
    for (std::size_t i = 0; i < nr; ++i)
      for (double p : ps) {
        auto rep = base_report(radii[i], p);
        rep.estimate = rep.ci_lo = rep.ci_hi = canopy_expected_phi_series(p, radii[i]);
        out[i].push_back(std::move(rep));
      }
    return out;
  }
  if (replicas == 0) throw ValidationError("expected_phi: replicas must be positive");
  const int rmax = *std::max_element(radii.begin(), radii.end());
  std::vector<MeanAccumulator> acc(nr * np);
  for (std::size_t start = 0; start < replicas; start += kBlock) {
    const std::size_t count = std::min(kBlock, replicas - start);
    const auto rows = parallel_map(count, [&](std::size_t k) {
      const std::size_t i = start + k;
      auto g = src.sample(replica_seed(seed, i));
      const Ball b = ball(*g, g->root(), rmax);
      std::vector<double> vals(nr * np);
      for (std::size_t a = 0; a < nr; ++a) {
        const RootedSet s = sub_ball(b, radii[a]);
        for (std::size_t c = 0; c < np; ++c) {
          const double p = ps[c];
          const std::uint64_t inner = hash_combine(hash_combine(seed, i), a);
          PhiResult res;
          switch (method) {
            case PhiMethod::kTree: res = phi_tree(s, p); break;
            case PhiMethod::kBrute: res = phi_bruteforce(s, p); break;
            case PhiMethod::kMonteCarlo: res = phi_monte_carlo(s, p, 1, inner); break;
            default: res = phi_auto(s, p, 1, inner); break;
          }
          vals[a * np + c] = res.value;
        }
      }
      return vals;
    });
    for (const auto& v : rows)
      for (std::size_t c = 0; c < v.size(); ++c) acc[c].add(v[c]);
  }
  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t c = 0; c < np; ++c) {
      const auto& m = acc[a * np + c];
      auto rep = base_report(radii[a], ps[c]);
      rep.replicas = replicas;
      rep.estimate = m.mean();
      rep.se = m.standard_error();
      const Interval ci = m.ci();
      rep.ci_lo = ci.lo;
      rep.ci_hi = ci.hi;
      out[a].push_back(std::move(rep));
    }
  return out;
}

EstimateReport expected_phi(const GraphSource& src, int r, double p, PhiMethod method,
                            std::size_t replicas, std::uint64_t seed) {
  return expected_phi_grid(src, {r}, {p}, method, replicas, seed).front().front();
}

EstimateReport PtildeEstimate::report() const {
  EstimateReport rep;
  rep.experiment = "ptilde_a";
  if (!evidence.empty()) {
    rep.source = evidence.front().source;
    rep.seed = evidence.front().seed;
    rep.replicas = evidence.back().replicas;
    rep.radius = evidence.back().radius;
  }
  rep.estimate = (interval.lo + interval.hi) / 2.0;
  rep.ci_lo = interval.lo;
  rep.ci_hi = interval.hi;
  rep.extra["conclusive"] = conclusive;
  rep.extra["notes"] = notes;
  return rep;
}

namespace {

struct VerdictRow {
  WitnessVerdict verdict;
  EstimateReport row;
};

VerdictRow witness_verdict(const GraphSource& src, int r_max, double p, std::size_t replicas,
                           std::uint64_t seed, PhiMethod method, std::size_t budget) {
  std::vector<int> radii(static_cast<std::size_t>(r_max) + 1);
  for (int r = 0; r <= r_max; ++r) radii[static_cast<std::size_t>(r)] = r;
  std::size_t reps = replicas;
  for (;;) {
    const auto grid = expected_phi_grid(src, radii, {p}, method, reps, seed);
    const EstimateReport* best = nullptr;
    bool all_above = true;
    for (const auto& row : grid) {
      const auto& rep = row.front();
      if (rep.estimate < 1.0 - 3.0 * rep.se) return {WitnessVerdict::kWitness, rep};
      if (!(rep.estimate > 1.0 + 3.0 * rep.se)) all_above = false;
      if (!best || rep.estimate < best->estimate) best = &rep;
    }
    if (all_above) return {WitnessVerdict::kNoWitness, *best};
    if (method == PhiMethod::kCanopySeries || reps * 2 > budget)
      return {WitnessVerdict::kInconclusive, *best};
    reps *= 2;
  }
}

}  // namespace

PtildeEstimate ptilde_a_bisect(const GraphSource& src, int r_max, double p_lo, double p_hi,
                               double tol, std::size_t replicas, std::uint64_t seed,
                               PhiMethod method, std::size_t replica_budget) {
  if (!(0.0 <= p_lo && p_lo < p_hi && p_hi <= 1.0)) throw ValidationError("ptilde_a_bisect: bad bracket");
  if (r_max < 0 || !(tol > 0.0)) throw ValidationError("ptilde_a_bisect: bad r_max or tol");
  const std::size_t budget = replica_budget ? replica_budget : 4 * replicas;
  PtildeEstimate est;
  auto probe = [&](double p) {
    auto v = witness_verdict(src, r_max, p, replicas, seed, method, budget);
    v.row.extra["verdict"] = v.verdict == WitnessVerdict::kWitness     ? "witness"
                             : v.verdict == WitnessVerdict::kNoWitness ? "no_witness"
                                                                       : "inconclusive";
    est.evidence.push_back(v.row);
    return v.verdict;
  };
  if (probe(p_lo) != WitnessVerdict::kWitness)
    throw BracketError("ptilde_a_bisect: no witness at the lower end of the bracket");
  if (probe(p_hi) != WitnessVerdict::kNoWitness)
    throw BracketError("ptilde_a_bisect: the upper end of the bracket is not witness-free");
  double lo = p_lo, hi = p_hi;
  while (hi - lo > tol) {
    const double mid = (lo + hi) / 2.0;
    const auto v = probe(mid);
    if (v == WitnessVerdict::kWitness) {
      lo = mid;
    } else if (v == WitnessVerdict::kNoWitness) {
      hi = mid;
    } else {
      est.conclusive = false;
      est.notes = "replica budget exhausted near p = " + format_double(mid);
      break;
    }
  }
  est.interval = {lo, hi};
  return est;
}

namespace {

// Rooted set of the ball vertices selected by `keep` (root index 0 kept).
RootedSet masked_set(const Ball& b, const std::vector<char>& keep, std::vector<int>& index) {
  index.assign(b.vertices.size(), -1);
  int n = 0;
  for (std::size_t i = 0; i < b.vertices.size(); ++i)
    if (keep[i]) index[i] = n++;
  RootedSet s;
  s.graph = FiniteGraph(n);
  for (const Edge& e : b.edges) {
    const int iu = index[static_cast<std::size_t>(e.u)], iv = index[static_cast<std::size_t>(e.v)];
    if (iu >= 0 && iv >= 0) s.graph.add_edge(iu, iv);
    else if (iu >= 0) s.boundary_inner.push_back(iu);
    else if (iv >= 0) s.boundary_inner.push_back(iv);
  }
  for (const auto& be : b.boundary) {
    const int ii = index[static_cast<std::size_t>(be.inner)];
    if (ii >= 0) s.boundary_inner.push_back(ii);
  }
  return s;
}

std::optional<double> exact_phi(const RootedSet& s, double p) {
  if (!s.graph.is_connected()) return std::nullopt;
  if (s.graph.is_forest()) return phi_tree(s, p).value;
  if (s.graph.edge_count() <= kOracleEdgeCap) return phi_bruteforce(s, p).value;
  return std::nullopt;
}

}  // namespace

std::optional<Witness> witness_search(LocalGraph& g, double p, int r_max, bool greedy) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("witness_search: p must be in [0, 1]");
  for (int r = 0; r <= r_max; ++r) {
    const Ball b = ball(g, g.root(), r);
    const RootedSet s = b.rooted_set();
    double value = 0.0;
    bool is_witness = false;
    if (auto ex = exact_phi(s, p)) {
      value = *ex;
      is_witness = value < 1.0;
    } else {
      const auto mc = phi_monte_carlo(s, p, kWitnessMcReplicas, hash_combine(g.seed(), static_cast<std::uint64_t>(r)));
      value = mc.value;
      is_witness = mc.ci.hi < 1.0;
    }
    if (is_witness) return Witness{r, b.vertices, value, false};
    if (!greedy || !exact_phi(s, p)) continue;
    // Greedy trimming: drop the non-root vertex that lowers phi the most
    // while keeping S connected.
    std::vector<char> keep(b.vertices.size(), 1);
    std::vector<int> index;
    double current = value;
    for (;;) {
      double best = current;
      std::size_t best_v = 0;
      for (std::size_t v = 1; v < keep.size(); ++v) {
        if (!keep[v]) continue;
        keep[v] = 0;
        const auto val = exact_phi(masked_set(b, keep, index), p);
        keep[v] = 1;
        if (val && *val < best) {
          best = *val;
          best_v = v;
        }
      }
      if (best_v == 0) break;
      keep[best_v] = 0;
      current = best;
      if (current < 1.0) {
        Witness w{r, {}, current, true};
        for (std::size_t v = 0; v < keep.size(); ++v)
          if (keep[v]) w.set.push_back(b.vertices[v]);
        return w;
      }
    }
  }
  return std::nullopt;
}

PhiDecay phi_decay_diagnostic(const GraphSource& src, double p, const std::vector<int>& radii,
                              std::size_t replicas, std::uint64_t seed) {
  if (radii.size() < 2) throw ValidationError("phi_decay_diagnostic: need at least two radii");
  PhiDecay out;
  for (auto& row : expected_phi_grid(src, radii, {p}, PhiMethod::kAuto, replicas, seed))
    out.rows.push_back(row.front());
  // Least-squares slope of log E phi on r over the positive estimates.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : out.rows) {
    if (!(r.estimate > 0.0)) continue;
    const double x = r.radius, y = std::log(r.estimate);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && n * sxx - sx * sx > 0) {
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.rate = std::exp(slope);
  }
  out.growth = out.rate > 1.0;
  return out;
}

}  // namespace percolab
