// percolab: experiment runner.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "percolab/error.hpp"
#include "percolab/experiment.hpp"
#include "percolab/parallel.hpp"

using nlohmann::json;

namespace {

enum class Kind { kJson, kNumber, kInteger, kNumbers, kIntegers, kFlag, kString };

struct Opt {
  std::string flag;  // without dashes
  std::string key;   // config field
  Kind kind;
  std::string help;
};

struct Sub {
  std::string name;
  std::string experiment;
  std::string help;
  std::vector<Opt> opts;
};

const Opt kSource{"source", "source", Kind::kJson, "source descriptor (JSON or @file)"};

std::vector<Sub> subcommands() {
  return {
      {"generate", "generate", "sample an instance and print the ball around its root",
       {kSource, {"radius", "radius", Kind::kInteger, "ball radius"}, {"instance", "instance", Kind::kInteger, "instance index"}}},
      {"phi", "phi", "annealed E phi_p(B(o,r))",
       {kSource, {"radius", "radius", Kind::kInteger, "ball radius"}, {"radii", "radii", Kind::kIntegers, "radii, comma separated"},
        {"p", "p", Kind::kNumber, "edge probability"}, {"ps", "ps", Kind::kNumbers, "p values"},
        {"replicas", "replicas", Kind::kInteger, "sampled roots"}, {"method", "method", Kind::kString, "auto|brute|tree|mc|canopy_series"}}},
      {"ptilde", "ptilde", "bisection for the annealed witness threshold",
       {kSource, {"r-max", "r_max", Kind::kInteger, "largest ball radius"}, {"p-lo", "p_lo", Kind::kNumber, "bracket low"},
        {"p-hi", "p_hi", Kind::kNumber, "bracket high"}, {"tol", "tol", Kind::kNumber, "interval width"},
        {"replicas", "replicas", Kind::kInteger, "sampled roots"}, {"method", "method", Kind::kString, "phi method"},
        {"replica-budget", "replica_budget", Kind::kInteger, "replica cap when inconclusive"}}},
      {"witness", "witness", "search for a ball witness phi < 1 on one instance",
       {kSource, {"p", "p", Kind::kNumber, "edge probability"}, {"r-max", "r_max", Kind::kInteger, "largest radius"},
        {"greedy", "greedy", Kind::kFlag, "trim failing balls"}, {"instance", "instance", Kind::kInteger, "instance index"}}},
      {"estimate-pc", "estimate-pc", "pc interval from survival probes",
       {kSource, {"p-lo", "p_lo", Kind::kNumber, "bracket low"}, {"p-hi", "p_hi", Kind::kNumber, "bracket high"},
        {"radii", "radii", Kind::kIntegers, "radius schedule"}, {"theta-min", "theta_min", Kind::kNumber, "survival floor"},
        {"tol", "tol", Kind::kNumber, "interval width"}, {"replicas", "replicas", Kind::kInteger, "replicas per probe"}}},
      {"pt-diag", "pt-diag", "quenched truncated cluster size diagnostic",
       {kSource, {"ps", "ps", Kind::kNumbers, "p values"}, {"radii", "radii", Kind::kIntegers, "truncation radii"},
        {"instances", "instances", Kind::kInteger, "sampled roots"}, {"replicas", "replicas", Kind::kInteger, "percolation replicas per root"}}},
      {"pta-diag", "pta-diag", "annealed truncated cluster size diagnostic",
       {kSource, {"ps", "ps", Kind::kNumbers, "p values"}, {"radii", "radii", Kind::kIntegers, "truncation radii"},
        {"replicas", "replicas", Kind::kInteger, "sampled roots"}}},
      {"mtp-test", "mtp-test", "mass transport test",
       {kSource, {"battery", "battery", Kind::kString, "standard"}, {"function", "function", Kind::kString, "single built-in function"},
        {"replicas", "replicas", Kind::kInteger, "sampled roots"}, {"alpha", "alpha", Kind::kNumber, "test level"}}},
      {"root-law", "root-law", "goodness of fit of a root statistic",
       {kSource, {"probs", "probs", Kind::kNumbers, "declared law"}, {"statistic", "statistic", Kind::kString, "degree|level"},
        {"replicas", "replicas", Kind::kInteger, "sampled roots"}, {"alpha", "alpha", Kind::kNumber, "test level"}}},
      {"ball-dist", "ball-dist", "empirical law of the rooted r-ball",
       {kSource, {"radius", "radius", Kind::kInteger, "ball radius"}, {"replicas", "replicas", Kind::kInteger, "sampled roots"}}},
      {"converge", "converge", "TV distances to a target and pc intervals",
       {{"sources", "sources", Kind::kJson, "[{label, source}, ...]"}, {"target", "target", Kind::kJson, "target descriptor"},
        {"radii", "radii", Kind::kIntegers, "radii"}, {"replicas", "replicas", Kind::kInteger, "sampled roots"},
        {"pc", "pc", Kind::kJson, "pc plan {p_lo, p_hi, ...}"}}},
      {"crossing", "crossing", "four-point crossing in the lattice box",
       {{"n", "n", Kind::kInteger, "half side"}, {"ps", "ps", Kind::kNumbers, "p values"}, {"replicas", "replicas", Kind::kInteger, "replicas"}}},
      {"survival", "survival", "P(o <-> boundary of B(o,R))",
       {kSource, {"p", "p", Kind::kNumber, "edge probability"}, {"radii", "radii", Kind::kIntegers, "radii"},
        {"replicas", "replicas", Kind::kInteger, "replicas"}}},
      {"cluster-size", "cluster-size", "E|C_o cap B(o,R)|",
       {kSource, {"p", "p", Kind::kNumber, "edge probability"}, {"radii", "radii", Kind::kIntegers, "radii"},
        {"replicas", "replicas", Kind::kInteger, "replicas"}}},
      {"phi-decay", "phi-decay", "decay rate of E phi in r",
       {kSource, {"p", "p", Kind::kNumber, "edge probability"}, {"radii", "radii", Kind::kIntegers, "radii"},
        {"replicas", "replicas", Kind::kInteger, "replicas"}}},
      {"p0", "p0", "root of p(1-(1-p)^3)^2 = 1/2", {}},
      {"suite", "suite", "acceptance suite with a summary table",
       {{"scale", "scale", Kind::kNumber, "replica scale in (0, 1]"}, {"criteria", "criteria", Kind::kIntegers, "subset of 1..10"}}},
  };
}

json parse_json_arg(const std::string& s) {
  std::string text = s;
  if (!s.empty() && s[0] == '@') {
    std::ifstream f(s.substr(1));
    if (!f) throw percolab::ValidationError("cannot read " + s.substr(1));
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw percolab::ValidationError(std::string("bad JSON: ") + e.what());
  }
}

json split_numbers(const std::string& s, bool integers) {
  json out = json::array();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      if (integers) {
        const long long v = std::stoll(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        out.push_back(v);
      } else {
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        out.push_back(v);
      }
    } catch (const std::exception&) {
      throw percolab::ValidationError("bad list entry '" + item + "'");
    }
  }
  return out;
}

json to_value(const Opt& o, const std::string& raw) {
  try {
    switch (o.kind) {
      case Kind::kJson: return parse_json_arg(raw);
      case Kind::kNumber: return std::stod(raw);
      case Kind::kInteger: return std::stoll(raw);
      case Kind::kNumbers: return split_numbers(raw, false);
      case Kind::kIntegers: return split_numbers(raw, true);
      case Kind::kString: return raw;
      case Kind::kFlag: return true;
    }
  } catch (const percolab::ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw percolab::ValidationError("--" + o.flag + ": cannot parse '" + raw + "'");
  }
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"percolab: percolation on unimodular random graphs"};
  app.require_subcommand(1);
  // global flags may also follow the subcommand
  app.fallthrough();
  app.set_version_flag("--version", std::string(percolab::kVersion));
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out, format = "csv";
  app.add_option("--seed", seed, "run seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (default: logical cores)");
  app.add_option("--out", out, "output path; a manifest is written next to it");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  const auto subs = subcommands();
  std::vector<std::vector<std::string>> values(subs.size());
  std::vector<std::vector<bool>> flags(subs.size());
  std::vector<CLI::App*> apps;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    auto* sc = app.add_subcommand(subs[i].name, subs[i].help);
    values[i].resize(subs[i].opts.size());
    flags[i].assign(subs[i].opts.size(), false);
    for (std::size_t k = 0; k < subs[i].opts.size(); ++k) {
      const auto& o = subs[i].opts[k];
      if (o.kind == Kind::kFlag) {
        sc->add_flag_callback("--" + o.flag, [&flags, i, k] { flags[i][k] = true; }, o.help);
      } else {
        sc->add_option("--" + o.flag, values[i][k], o.help);
      }
    }
    apps.push_back(sc);
  }
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run a JSON config file");
  run_cmd->add_option("--config", config_path, "config path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version exit 0, everything else is a usage error
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    json config;
    if (run_cmd->parsed()) {
      config = parse_json_arg("@" + config_path);
      if (!config.is_object()) throw percolab::ValidationError("config must be a JSON object");
      if (config.contains("out") && out.empty()) out = config.at("out").get<std::string>();
      if (config.contains("format") && app.get_option("--format")->count() == 0)
        format = config.at("format").get<std::string>();
    } else {
      for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!apps[i]->parsed()) continue;
        config["experiment"] = subs[i].experiment;
        for (std::size_t k = 0; k < subs[i].opts.size(); ++k) {
          const auto& o = subs[i].opts[k];
          if (o.kind == Kind::kFlag) {
            if (flags[i][k]) config[o.key] = true;
          } else if (apps[i]->get_option("--" + o.flag)->count() > 0) {
            config[o.key] = to_value(o, values[i][k]);
          }
        }
      }
    }
    if (app.get_option("--seed")->count() > 0 || !config.contains("seed")) config["seed"] = seed;
    if (threads > 0) percolab::set_threads(threads);
    std::string body;
    const auto manifest = percolab::run(config, out, format, &body);
    if (out.empty()) {
      std::cout << body;
    } else {
      std::cerr << "wrote " << out << " (config " << manifest.config_hash << ", " << manifest.wall_seconds << " s)\n";
    }
    return 0;
  } catch (const percolab::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const percolab::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const percolab::BracketError& e) {
    std::cerr << "bracket error: " << e.what() << "\n";
    return 3;
  }
}
