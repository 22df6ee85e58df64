#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "percolab/error.hpp"
#include "percolab/experiment.hpp"

using namespace percolab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("percolab_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& args) {
  const std::string cmd = std::string(PERCOLAB_BIN) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path write_config(const std::string& name, const json& c) {
  const auto p = scratch() / name;
  std::ofstream(p) << c.dump();
  return p;
}

const json kPhi = {{"experiment", "phi"}, {"source", {{"kind", "canopy"}}}, {"radius", 2},
                   {"p", 0.5}, {"replicas", 100000}, {"seed", 7}};

}  // namespace

TEST_CASE("phi config gives the canopy value") {
  const auto cfg = write_config("phi.json", kPhi);
  const auto out = scratch() / "phi.csv";
  REQUIRE(shell("run --config " + cfg.string() + " --out " + out.string()) == 0);
  std::istringstream body(slurp(out));
  std::string header, line;
  std::getline(body, header);
  std::getline(body, line);
  CHECK(header.find("estimate") != std::string::npos);
  CHECK(header.find("config_hash") != std::string::npos);
  CHECK(line.find(config_hash(kPhi)) != std::string::npos);
  const auto rows = run_experiment(kPhi).rows;
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0].estimate - 0.5) < 0.01);
  CHECK(fs::exists(out.string() + ".manifest.json"));
  const json m = json::parse(slurp(out.string() + ".manifest.json"));
  CHECK(m.at("config_hash") == config_hash(kPhi));
  CHECK(m.at("version") == kVersion);
}

TEST_CASE("validation errors exit 2 without output") {
  json bad = kPhi;
  bad["source"]["kind"] = "canoppy";
  const auto cfg = write_config("bad.json", bad);
  const auto out = scratch() / "bad.csv";
  CHECK(shell("run --config " + cfg.string() + " --out " + out.string()) == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK_FALSE(fs::exists(out.string() + ".manifest.json"));
  json extra = kPhi;
  extra["colour"] = "red";
  CHECK_THROWS_AS(validate_config(extra), ValidationError);
  CHECK(shell("phi --source '{\"kind\":\"canopy\"}' --radius 2 --p 1.5") == 2);
  CHECK(shell("no-such-command") == 2);
}

TEST_CASE("bracket errors exit 3") {
  const json c = {{"experiment", "estimate-pc"}, {"source", {{"kind", "path"}}}, {"p_lo", 0.3},
                  {"p_hi", 0.9}, {"replicas", 200}, {"seed", 1}};
  const auto out = scratch() / "pc.csv";
  CHECK(shell("run --config " + write_config("pc.json", c).string() + " --out " + out.string()) == 3);
}

TEST_CASE("reruns reproduce the csv body") {
  const json c = {{"experiment", "phi"}, {"source", {{"kind", "gkl"}, {"params", {{"k", 3}, {"l", 5}}}}},
                  {"radii", {0, 1, 2}}, {"ps", {0.2, 0.3}}, {"replicas", 2000}, {"seed", 11}};
  const auto cfg = write_config("rerun.json", c);
  const auto a = scratch() / "a.csv", b = scratch() / "b.csv";
  REQUIRE(shell("run --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(shell("run --config " + cfg.string() + " --out " + b.string() + " --threads 3") == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  // Output settings do not change the hash.
  json c2 = c;
  c2["out"] = "elsewhere.csv";
  c2["threads"] = 2;
  CHECK(config_hash(c2) == config_hash(c));
}

TEST_CASE("json output") {
  const auto out = scratch() / "phi.json.out";
  REQUIRE(shell("--format json --out " + out.string() + " --seed 7 phi --source '{\"kind\":\"path\"}' --radius 3 --p 0.5 --replicas 10") == 0);
  const json j = json::parse(slurp(out));
  CHECK(j.at("rows")[0].at("estimate") == doctest::Approx(0.125));
}

TEST_CASE("every experiment is reachable") {
  for (const auto& name : experiment_names()) {
    INFO(name);
    CHECK(shell(name + " --help") == 0);
  }
  CHECK(shell("run --help") == 0);
  CHECK(shell("--version") == 0);
}
