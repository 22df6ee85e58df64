#include "percolab/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "percolab/convergence.hpp"
#include "percolab/error.hpp"
#include "percolab/estimators.hpp"
#include "percolab/generators.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"
#include "percolab/phi.hpp"
#include "percolab/suite.hpp"
#include "percolab/unimodularity.hpp"

namespace percolab {

using nlohmann::json;

namespace {

const std::set<std::string> kCommon{"experiment", "seed", "out", "format", "threads"};

// Field access with type checks; every failure is a ValidationError.
class Fields {
 public:
  Fields(const json& j, const std::string& exp, std::set<std::string> allowed) : j_(j), exp_(exp) {
    allowed.insert(kCommon.begin(), kCommon.end());
    for (const auto& [k, _] : j.items())
      if (!allowed.count(k)) fail("unknown field '" + k + "'");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  [[noreturn]] void fail(const std::string& msg) const { throw ValidationError(exp_ + ": " + msg); }

  const json& raw(const std::string& k) const {
    if (!has(k)) fail("missing field '" + k + "'");
    return j_.at(k);
  }

  double num(const std::string& k) const {
    const auto& v = raw(k);
    if (!v.is_number()) fail("'" + k + "' must be a number");
    return v.get<double>();
  }
  double num(const std::string& k, double def) const { return has(k) ? num(k) : def; }

  double prob(const std::string& k) const {
    const double p = num(k);
    if (!(p >= 0.0 && p <= 1.0)) fail("'" + k + "' must lie in [0, 1]");
    return p;
  }
  double prob(const std::string& k, double def) const { return has(k) ? prob(k) : def; }

  std::int64_t integer(const std::string& k) const {
    const auto& v = raw(k);
    if (!v.is_number_integer()) fail("'" + k + "' must be an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const std::string& k, std::int64_t def) const { return has(k) ? integer(k) : def; }

  std::size_t count(const std::string& k, std::size_t def) const {
    if (!has(k)) return def;
    const auto v = integer(k);
    if (v <= 0) fail("'" + k + "' must be positive");
    return static_cast<std::size_t>(v);
  }

  int radius(const std::string& k) const {
    const auto v = integer(k);
    if (v < 0 || v > 100000) fail("'" + k + "' out of range");
    return static_cast<int>(v);
  }
  int radius(const std::string& k, int def) const { return has(k) ? radius(k) : def; }

  bool flag(const std::string& k, bool def) const {
    if (!has(k)) return def;
    if (!raw(k).is_boolean()) fail("'" + k + "' must be boolean");
    return raw(k).get<bool>();
  }

  std::string str(const std::string& k, const std::string& def) const {
    if (!has(k)) return def;
    if (!raw(k).is_string()) fail("'" + k + "' must be a string");
    return raw(k).get<std::string>();
  }

  std::vector<double> probs(const std::string& k) const {
    const auto& v = raw(k);
    if (!v.is_array() || v.empty()) fail("'" + k + "' must be a nonempty array");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail("'" + k + "' entries must be numbers");
      const double p = x.get<double>();
      if (!(p >= 0.0 && p <= 1.0)) fail("'" + k + "' entries must lie in [0, 1]");
      out.push_back(p);
    }
    return out;
  }

  std::vector<int> radii(const std::string& k, std::vector<int> def) const {
    if (!has(k)) return def;
    const auto& v = raw(k);
    if (!v.is_array() || v.empty()) fail("'" + k + "' must be a nonempty array");
    std::vector<int> out;
    for (const auto& x : v) {
      if (!x.is_number_integer() || x.get<std::int64_t>() < 0 || x.get<std::int64_t>() > 100000)
        fail("'" + k + "' entries must be nonnegative integers");
      out.push_back(x.get<int>());
    }
    return out;
  }

  SourcePtr source(const std::string& k) const {
    try {
      return make_source(raw(k));
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }

 private:
  const json& j_;
  std::string exp_;
};

std::uint64_t config_seed(const json& c) {
  if (!c.contains("seed")) return 1;
  const auto& s = c.at("seed");
  if (s.is_number_unsigned()) return s.get<std::uint64_t>();
  if (s.is_number_integer() && s.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(s.get<std::int64_t>());
  throw ValidationError("'seed' must be a nonnegative integer");
}

EstimateReport interval_row(const std::string& experiment, const json& source, const Interval& iv,
                            std::uint64_t seed, bool conclusive) {
  EstimateReport r;
  r.experiment = experiment;
  r.source = source;
  r.estimate = (iv.lo + iv.hi) / 2.0;
  r.ci_lo = iv.lo;
  r.ci_hi = iv.hi;
  r.seed = seed;
  r.extra["conclusive"] = conclusive;
  return r;
}

ExperimentResult from_critical(const CriticalEstimate& est, const json& source, std::uint64_t seed) {
  ExperimentResult res;
  res.rows = est.evidence;
  res.rows.push_back(interval_row(est.kind + "_interval", source, est.interval, seed, est.conclusive));
  res.document = est.to_json();
  return res;
}

PcSettings pc_settings(const Fields& f, std::uint64_t seed) {
  PcSettings s;
  s.radii = f.radii("radii", s.radii);
  s.theta_min = f.prob("theta_min", s.theta_min);
  s.tol = f.num("tol", s.tol);
  s.replicas = f.count("replicas", s.replicas);
  s.seed = seed;
  if (!(s.tol > 0.0)) f.fail("'tol' must be positive");
  return s;
}

using Plan = std::function<ExperimentResult()>;

Plan plan_for(const json& c) {
  if (!c.is_object()) throw ValidationError("config must be a JSON object");
  if (!c.contains("experiment") || !c.at("experiment").is_string())
    throw ValidationError("config needs a string 'experiment'");
  const std::string exp = c.at("experiment").get<std::string>();
  const std::uint64_t seed = config_seed(c);
  if (c.contains("format")) {
    if (!c.at("format").is_string()) throw ValidationError("'format' must be a string");
    const auto fmt = c.at("format").get<std::string>();
    if (fmt != "csv" && fmt != "json") throw ValidationError("'format' must be csv or json");
  }
  if (c.contains("out") && !c.at("out").is_string()) throw ValidationError("'out' must be a string");
  if (c.contains("threads") && (!c.at("threads").is_number_integer() || c.at("threads").get<int>() < 1))
    throw ValidationError("'threads' must be a positive integer");

  if (exp == "phi") {
    Fields f(c, exp, {"source", "radius", "radii", "p", "ps", "replicas", "method"});
    auto src = f.source("source");
    std::vector<int> radii = f.has("radius") ? std::vector<int>{f.radius("radius")} : f.radii("radii", {});
    std::vector<double> ps = f.has("p") ? std::vector<double>{f.prob("p")} : f.has("ps") ? f.probs("ps") : std::vector<double>{};
    if (radii.empty()) f.fail("needs 'radius' or 'radii'");
    if (ps.empty()) f.fail("needs 'p' or 'ps'");
    const auto replicas = f.count("replicas", 10000);
    PhiMethod method;
    try {
      method = phi_method_from_string(f.str("method", "auto"));
    } catch (const ValidationError& e) {
      f.fail(e.what());
    }
    return [=] {
      ExperimentResult res;
      for (auto& row : expected_phi_grid(*src, radii, ps, method, replicas, seed))
        for (auto& r : row) res.rows.push_back(r);
      res.document = {{"experiment", exp}};
      return res;
    };
  }
  if (exp == "witness") {
    Fields f(c, exp, {"source", "p", "r_max", "greedy", "instance"});
    auto src = f.source("source");
    const double p = f.prob("p");
    const int r_max = f.radius("r_max", 10);
    const bool greedy = f.flag("greedy", false);
    const auto instance = static_cast<std::uint64_t>(f.integer("instance", 0));
    return [=] {
      auto g = src->sample(replica_seed(seed, instance));
      const auto w = witness_search(*g, p, r_max, greedy);
      ExperimentResult res;
      EstimateReport r;
      r.experiment = "witness";
      r.source = src->descriptor();
      r.p = p;
      r.seed = seed;
      r.radius = w ? w->radius : -1;
      r.estimate = w ? w->phi : 0.0;
      r.ci_lo = r.ci_hi = r.estimate;
      r.extra = {{"found", w.has_value()}, {"instance", instance}};
      if (w) {
        r.extra["set_size"] = w->set.size();
        r.extra["trimmed"] = w->trimmed;
      }
      res.rows.push_back(r);
      res.document = {{"experiment", exp}, {"found", w.has_value()}};
      if (w) res.document["witness"] = {{"radius", w->radius}, {"phi", w->phi}, {"set_size", w->set.size()}, {"trimmed", w->trimmed}};
      return res;
    };
  }
  if (exp == "ptilde") {
    Fields f(c, exp, {"source", "r_max", "p_lo", "p_hi", "tol", "replicas", "method", "replica_budget"});
    auto src = f.source("source");
    const int r_max = f.radius("r_max");
    const double lo = f.prob("p_lo"), hi = f.prob("p_hi"), tol = f.num("tol", 0.01);
    const auto replicas = f.count("replicas", 10000);
    const auto budget = f.count("replica_budget", 4 * replicas);
    PhiMethod method;
    try {
      method = phi_method_from_string(f.str("method", "auto"));
    } catch (const ValidationError& e) {
      f.fail(e.what());
    }
    return [=] {
      const auto est = ptilde_a_bisect(*src, r_max, lo, hi, tol, replicas, seed, method, budget);
      ExperimentResult res;
      res.rows = est.evidence;
      res.rows.push_back(est.report());
      res.document = {{"experiment", exp}, {"interval", {est.interval.lo, est.interval.hi}},
                      {"conclusive", est.conclusive}, {"notes", est.notes}, {"empirical", true}};
      return res;
    };
  }
  if (exp == "estimate-pc") {
    Fields f(c, exp, {"source", "p_lo", "p_hi", "radii", "theta_min", "tol", "replicas"});
    auto src = f.source("source");
    const double lo = f.prob("p_lo"), hi = f.prob("p_hi");
    const auto s = pc_settings(f, seed);
    return [=] { return from_critical(pc_bisect(*src, lo, hi, s), src->descriptor(), seed); };
  }
  if (exp == "pt-diag" || exp == "pta-diag") {
    Fields f(c, exp, {"source", "ps", "radii", "instances", "replicas"});
    auto src = f.source("source");
    const auto ps = f.probs("ps");
    DiagSettings s;
    s.radii = f.radii("radii", s.radii);
    s.instances = f.count("instances", s.instances);
    s.replicas = f.count("replicas", exp == "pta-diag" ? 2000 : s.replicas);
    s.seed = seed;
    if (s.radii.size() < 4) f.fail("'radii' needs at least 4 entries");
    return [=] {
      const auto est = exp == "pt-diag" ? pt_diagnostic(*src, ps, s) : pta_diagnostic(*src, ps, s);
      return from_critical(est, src->descriptor(), seed);
    };
  }
  if (exp == "mtp-test") {
    Fields f(c, exp, {"source", "battery", "function", "replicas", "alpha"});
    auto src = f.source("source");
    if (f.has("battery") && f.has("function")) f.fail("give either 'battery' or 'function'");
    if (f.str("battery", "standard") != "standard") f.fail("only the 'standard' battery exists");
    std::vector<TransportFunction> fs;
    try {
      fs = f.has("function") ? std::vector<TransportFunction>{transport_by_name(f.str("function", ""))}
                             : standard_battery(*src);
    } catch (const ValidationError& e) {
      f.fail(e.what());
    }
    const auto replicas = f.count("replicas", 100000);
    const double alpha = f.prob("alpha", 0.01);
    return [=] {
      ExperimentResult res;
      res.document = {{"experiment", exp}, {"reports", json::array()}};
      const double crit = normal_quantile(1.0 - alpha / 2.0);
      for (const auto& rep : mtp_battery(*src, fs, replicas, seed, alpha)) {
        EstimateReport r;
        r.experiment = "mtp:" + rep.function;
        r.source = rep.source;
        r.replicas = replicas;
        r.seed = seed;
        r.estimate = rep.diff_mean;
        r.se = rep.diff_se;
        r.ci_lo = rep.diff_mean - crit * rep.diff_se;
        r.ci_hi = rep.diff_mean + crit * rep.diff_se;
        r.extra = {{"z", rep.z}, {"pass", rep.pass}, {"sent", rep.sent_mean}, {"received", rep.received_mean}};
        res.rows.push_back(r);
        res.document["reports"].push_back(rep.to_json());
      }
      return res;
    };
  }
  if (exp == "root-law") {
    Fields f(c, exp, {"source", "probs", "statistic", "replicas", "alpha"});
    auto src = f.source("source");
    const auto probs = f.probs("probs");
    const auto stat_name = f.str("statistic", "degree");
    if (stat_name != "degree" && stat_name != "level") f.fail("'statistic' must be degree or level");
    const auto replicas = f.count("replicas", 100000);
    const double alpha = f.prob("alpha", 0.01);
    return [=] {
      const auto stat = stat_name == "degree" ? root_degree_statistic() : root_label_statistic();
      const auto rep = root_law_check(*src, probs, stat, replicas, seed, alpha, stat_name);
      EstimateReport r;
      r.experiment = "root_law";
      r.source = src->descriptor();
      r.replicas = replicas;
      r.seed = seed;
      r.estimate = rep.chi.p_value;
      r.ci_lo = r.ci_hi = r.estimate;
      r.extra = {{"chi_square", rep.chi.statistic}, {"dof", rep.chi.dof}, {"pass", rep.pass}};
      ExperimentResult res;
      res.rows.push_back(r);
      res.document = rep.to_json();
      return res;
    };
  }
  if (exp == "ball-dist") {
    Fields f(c, exp, {"source", "radius", "replicas"});
    auto src = f.source("source");
    const int r = f.radius("radius");
    const auto replicas = f.count("replicas", 10000);
    return [=] {
      const auto d = ball_distribution(*src, r, replicas, seed);
      ExperimentResult res;
      for (const auto& [code, fr] : d.freq) {
        EstimateReport row;
        row.experiment = "ball_freq";
        row.source = src->descriptor();
        row.radius = r;
        row.replicas = replicas;
        row.seed = seed;
        row.estimate = fr;
        row.ci_lo = row.ci_hi = fr;
        row.extra = {{"code", code}};
        res.rows.push_back(row);
      }
      res.document = d.to_json();
      return res;
    };
  }
  if (exp == "converge") {
    Fields f(c, exp, {"sources", "target", "radii", "replicas", "pc"});
    const auto& list = f.raw("sources");
    if (!list.is_array() || list.empty()) f.fail("'sources' must be a nonempty array");
    std::vector<LabeledSource> seq;
    for (const auto& e : list) {
      if (!e.is_object() || !e.contains("source")) f.fail("'sources' entries need a 'source'");
      for (const auto& [k, _] : e.items())
        if (k != "label" && k != "source") f.fail("unknown field '" + k + "' in 'sources'");
      LabeledSource ls;
      ls.label = e.value("label", std::to_string(seq.size()));
      try {
        ls.source = make_source(e.at("source"));
      } catch (const ValidationError& err) {
        f.fail(err.what());
      }
      seq.push_back(ls);
    }
    auto target = f.source("target");
    const auto radii = f.radii("radii", {1, 2, 3});
    const auto replicas = f.count("replicas", 10000);
    std::optional<PcPlan> plan;
    if (f.has("pc")) {
      const auto& pj = f.raw("pc");
      if (!pj.is_object()) f.fail("'pc' must be an object");
      Fields pf(pj, exp + ".pc", {"p_lo", "p_hi", "radii", "theta_min", "tol", "replicas"});
      PcPlan pl;
      pl.p_lo = pf.prob("p_lo");
      pl.p_hi = pf.prob("p_hi");
      pl.settings = pc_settings(pf, seed);
      plan = pl;
    }
    return [=] {
      const auto rows = locality_experiment(seq, *target, radii, replicas, seed, plan);
      ExperimentResult res;
      res.document = {{"experiment", exp}, {"table", json::array()}};
      for (const auto& lr : rows) {
        EstimateReport r;
        r.experiment = "tv";
        r.source = lr.source;
        r.radius = lr.radius;
        r.replicas = replicas;
        r.seed = seed;
        r.estimate = lr.tv;
        r.ci_lo = r.ci_hi = lr.tv;
        r.extra = {{"label", lr.label}};
        res.rows.push_back(r);
        if (lr.pc) res.rows.push_back(interval_row("pc_interval", lr.source, lr.pc->interval, seed, lr.pc->conclusive));
        res.document["table"].push_back(lr.to_json());
      }
      return res;
    };
  }
  if (exp == "crossing") {
    Fields f(c, exp, {"n", "ps", "replicas"});
    const auto n = f.integer("n");
    if (n < 1 || n > 2000) f.fail("'n' out of range");
    const auto ps = f.probs("ps");
    const auto replicas = f.count("replicas", 2000);
    return [=] {
      ExperimentResult res;
      for (double p : ps) res.rows.push_back(four_point_crossing(static_cast<int>(n), p, replicas, seed));
      res.document = {{"experiment", exp}};
      return res;
    };
  }
  if (exp == "survival" || exp == "cluster-size") {
    Fields f(c, exp, {"source", "p", "radii", "replicas"});
    auto src = f.source("source");
    const double p = f.prob("p");
    const auto radii = f.radii("radii", {10, 20, 40});
    const auto replicas = f.count("replicas", 2000);
    return [=] {
      ExperimentResult res;
      res.rows = exp == "survival" ? survival_profile(*src, p, radii, replicas, seed)
                                   : expected_cluster_size_probe(*src, p, radii, replicas, seed);
      res.document = {{"experiment", exp}};
      return res;
    };
  }
  if (exp == "phi-decay") {
    Fields f(c, exp, {"source", "p", "radii", "replicas"});
    auto src = f.source("source");
    const double p = f.prob("p");
    const auto radii = f.radii("radii", {0, 1, 2, 3, 4, 5, 6});
    const auto replicas = f.count("replicas", 10000);
    return [=] {
      const auto d = phi_decay_diagnostic(*src, p, radii, replicas, seed);
      ExperimentResult res;
      res.rows = d.rows;
      res.document = {{"experiment", exp}, {"rate", d.rate}, {"growth", d.growth}};
      return res;
    };
  }
  if (exp == "generate") {
    Fields f(c, exp, {"source", "radius", "instance"});
    auto src = f.source("source");
    const int r = f.radius("radius", 3);
    const auto instance = static_cast<std::uint64_t>(f.integer("instance", 0));
    return [=] {
      auto g = src->sample(replica_seed(seed, instance));
      const Ball b = ball(*g, g->root(), r);
      ExperimentResult res;
      EstimateReport row;
      row.experiment = "ball_size";
      row.source = src->descriptor();
      row.radius = r;
      row.replicas = 1;
      row.seed = seed;
      row.estimate = static_cast<double>(b.vertices.size());
      row.ci_lo = row.ci_hi = row.estimate;
      row.extra = {{"edges", b.edges.size()}, {"boundary", b.boundary.size()}, {"instance", instance}};
      res.rows.push_back(row);
      res.document = {{"experiment", exp}, {"source", src->descriptor()}, {"ball", b.to_json()}};
      if (b.vertices.size() <= static_cast<std::size_t>(kCanonicalCap))
        res.document["canonical_code"] = canonical_code(b).hex();
      return res;
    };
  }
  if (exp == "p0") {
    Fields f(c, exp, {});
    return [=] {
      const double p0 = p0_root();
      EstimateReport r;
      r.experiment = "p0_root";
      r.p = p0;
      r.estimate = p0;
      r.ci_lo = r.ci_hi = p0;
      r.seed = seed;
      ExperimentResult res;
      res.rows.push_back(r);
      res.document = {{"experiment", exp}, {"p0", p0}, {"map_at_root", p0_map(p0)}};
      return res;
    };
  }
  if (exp == "suite") {
    Fields f(c, exp, {"scale", "criteria"});
    const double scale = f.num("scale", 1.0);
    if (!(scale > 0.0 && scale <= 1.0)) f.fail("'scale' must lie in (0, 1]");
    std::vector<int> which;
    if (f.has("criteria")) {
      for (const auto& x : f.raw("criteria")) {
        if (!x.is_number_integer() || x.get<int>() < 1 || x.get<int>() > 10) f.fail("'criteria' entries must be 1..10");
        which.push_back(x.get<int>());
      }
    }
    return [=] {
      const auto results = run_suite(scale, which, seed);
      ExperimentResult res;
      res.document = {{"experiment", exp}, {"scale", scale}, {"criteria", json::array()}};
      for (const auto& cr : results) {
        EstimateReport r;
        r.experiment = "criterion_" + std::to_string(cr.id);
        r.estimate = cr.pass ? 1.0 : 0.0;
        r.ci_lo = r.ci_hi = r.estimate;
        r.seed = seed;
        r.extra = {{"name", cr.name}, {"seconds", cr.seconds}};
        res.rows.push_back(r);
        res.document["criteria"].push_back(cr.to_json());
      }
      return res;
    };
  }
  throw ValidationError("unknown experiment '" + exp + "'");
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file " + path);
  f << body;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "phi", "witness", "ptilde", "estimate-pc", "pt-diag", "pta-diag", "mtp-test", "root-law",
      "ball-dist", "converge", "crossing", "survival", "cluster-size", "phi-decay", "generate", "p0", "suite"};
  return names;
}

void validate_config(const json& config) { (void)plan_for(config); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const json& config) {
  // Output routing does not change the results.
  json c = config;
  c.erase("out");
  c.erase("format");
  c.erase("threads");
  return fnv1a_hex(c.dump());
}

ExperimentResult run_experiment(const json& config) {
  auto plan = plan_for(config);
  if (config.contains("threads")) set_threads(config.at("threads").get<int>());
  auto res = plan();
  res.seeds.push_back(config_seed(config));
  for (const auto& r : res.rows)
    if (r.seed != res.seeds.front()) res.seeds.push_back(r.seed);
  return res;
}

std::string render_csv(const std::vector<EstimateReport>& rows, const std::string& hash) {
  std::string s = csv_header() + "\n";
  for (const auto& r : rows) s += csv_row(r, hash) + "\n";
  return s;
}

json RunManifest::to_json() const {
  json outs = json::array();
  for (const auto& [path, digest] : outputs) outs.push_back({{"path", path}, {"fnv1a64", digest}});
  return {{"config_hash", config_hash}, {"version", version}, {"started", started},
          {"wall_seconds", wall_seconds}, {"seeds", seeds}, {"outputs", outs}};
}

RunManifest run(const json& config, const std::string& out, const std::string& format, std::string* echo) {
  if (format != "csv" && format != "json") throw ValidationError("format must be csv or json");
  validate_config(config);
  RunManifest m;
  m.config_hash = config_hash(config);
  m.started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  auto res = run_experiment(config);
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.seeds = res.seeds;
  std::string body;
  if (format == "csv") {
    body = render_csv(res.rows, m.config_hash);
  } else {
    json doc = res.document;
    doc["config_hash"] = m.config_hash;
    doc["rows"] = json::array();
    for (const auto& r : res.rows) doc["rows"].push_back(r.to_json());
    body = doc.dump(2) + "\n";
  }
  if (out.empty()) {
    if (echo) *echo = body;
    return m;
  }
  write_file(out, body);
  m.outputs.emplace_back(out, fnv1a_hex(body));
  write_file(out + ".manifest.json", m.to_json().dump(2) + "\n");
  return m;
}

}  // namespace percolab
