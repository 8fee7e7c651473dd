#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "metastab/config.hpp"
#include "metastab/errors.hpp"
#include "metastab/harness.hpp"

namespace fs = std::filesystem;
using namespace metastab;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig smoke_config(const std::string& out) {
  ExperimentConfig cfg;
  cfg.model.kind = ModelKind::Bond;
  cfg.model.d = 2;
  cfg.model.p = 1.0;
  cfg.lambda = 0.3;  // fast-extinction regime: these tests exercise plumbing
  cfg.n_list = {2};
  cfg.seeds_per_n = 1;
  cfg.trials = 100;
  cfg.time_cap = 1e5;
  cfg.master_seed = 5;
  cfg.out_dir = out;
  return cfg;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("metastab_test_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parse and round trip") {
  const std::string text =
      "lambda = 2.0\n"
      "n_list = 4,6,8\n"
      "seeds_per_n = 5\n"
      "trials = 1000\n"
      "time_cap = 1e6\n"
      "out_dir = results\n"
      "master_seed = 12345\n"
      "resume = false\n"
      "workers = 0\n"
      "model {\n"
      "  model = bond\n"
      "  d = 2\n"
      "  p = 0.7\n"
      "}\n";
  ExperimentConfig cfg = parse_config(text);
  CHECK(cfg.lambda == 2.0);
  CHECK(cfg.n_list == std::vector<long>{4, 6, 8});
  CHECK(cfg.model.kind == ModelKind::Bond);
  CHECK(cfg.model.p == 0.7);
  CHECK(cfg.master_seed == 12345);

  ExperimentConfig back = parse_config(serialize_config(cfg));
  CHECK(back == cfg);
}

TEST_CASE("config round trip covers every model kind") {
  for (ModelKind kind : {ModelKind::Bond, ModelKind::Site, ModelKind::Rgg, ModelKind::Gw,
                         ModelKind::Gff, ModelKind::RiOccupied, ModelKind::RiVacant}) {
    ExperimentConfig cfg;
    cfg.model.kind = kind;
    cfg.model.d = 3;
    cfg.model.p = 0.61;
    cfg.model.R = 1.75;
    cfg.model.u = 0.43;
    cfg.model.h = -0.2;
    cfg.model.pad_factor = 5;
    cfg.model.kill_radius = 12;
    cfg.model.nu = "0:0.5,3:0.5";
    cfg.n_list = {2, 4};
    cfg.time_cap.reset();
    ExperimentConfig back = parse_config(serialize_config(cfg));
    CHECK(back == cfg);
  }
}

TEST_CASE("config errors carry line information") {
  CHECK_THROWS_AS(parse_config("nonsense\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("lambda = x\nmodel {\n model = bond\n}\nn_list = 2\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("n_list = 4,2\nmodel {\n model = bond\n}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_list = 2\n"), ConfigError);  // no model block
  try {
    parse_config("lambda = oops\nmodel {\n model = bond\n}\nn_list = 2\n");
  } catch (const ConfigError& e) {
    CHECK(e.line_no == 1);
  }
}

TEST_CASE("run_experiment smoke") {
  TempDir tmp("smoke");
  ExperimentConfig cfg = smoke_config(tmp.path.string());
  RunStats stats = run_experiment(cfg);
  CHECK(stats.units_total == 1);
  CHECK(stats.units_computed == 1);

  std::string csv = slurp(tmp.path / "results.csv");
  CHECK(csv.find("model,params,n,") == 0);
  CHECK(csv.find("bond") != std::string::npos);
  // exactly one data row
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  std::string summary = slurp(tmp.path / "summary.json");
  CHECK(!summary.empty());
  CHECK(summary.find("rate") != std::string::npos);
}

TEST_CASE("resume skips completed units and keeps outputs byte-identical") {
  TempDir tmp("resume");
  ExperimentConfig cfg = smoke_config(tmp.path.string());
  cfg.n_list = {2, 3};
  cfg.seeds_per_n = 2;
  run_experiment(cfg);
  std::string csv1 = slurp(tmp.path / "results.csv");
  std::string summary1 = slurp(tmp.path / "summary.json");

  cfg.resume = true;
  RunStats again = run_experiment(cfg);
  CHECK(again.units_computed == 0);
  CHECK(again.units_skipped == 4);
  CHECK(slurp(tmp.path / "results.csv") == csv1);
  CHECK(slurp(tmp.path / "summary.json") == summary1);
}

TEST_CASE("resume recomputes new units only") {
  TempDir tmp("extend");
  ExperimentConfig cfg = smoke_config(tmp.path.string());
  cfg.n_list = {2};
  run_experiment(cfg);

  cfg.n_list = {2, 3};  // one new scale
  cfg.resume = true;
  RunStats stats = run_experiment(cfg);
  CHECK(stats.units_skipped == 1);
  CHECK(stats.units_computed == 1);
}

TEST_CASE("worker count does not change the outputs") {
  TempDir tmp1("w1"), tmp8("w8");
  ExperimentConfig cfg = smoke_config(tmp1.path.string());
  cfg.n_list = {2, 3};
  cfg.seeds_per_n = 2;
  cfg.trials = 200;
  cfg.workers = 1;
  run_experiment(cfg);

  cfg.out_dir = tmp8.path.string();
  cfg.workers = 8;
  run_experiment(cfg);
  CHECK(slurp(tmp1.path / "results.csv") == slurp(tmp8.path / "results.csv"));
}

TEST_CASE("unit keys separate scales, seeds and parameters") {
  ExperimentConfig cfg = smoke_config("x");
  CHECK(unit_key(cfg, 2, 0) != unit_key(cfg, 3, 0));
  CHECK(unit_key(cfg, 2, 0) != unit_key(cfg, 2, 1));
  ExperimentConfig other = cfg;
  other.lambda = 1.0;
  CHECK(unit_key(cfg, 2, 0) != unit_key(other, 2, 0));
  // fields that do not affect the result keep the key stable
  other = cfg;
  other.workers = 7;
  other.out_dir = "elsewhere";
  other.resume = true;
  CHECK(unit_key(cfg, 2, 0) == unit_key(other, 2, 0));
}

TEST_CASE("gw experiment writes gw-normalized records") {
  TempDir tmp("gw");
  ExperimentConfig cfg;
  cfg.model.kind = ModelKind::Gw;
  cfg.model.nu = "0:0.25,1:0.25,2:0.5";
  cfg.lambda = 0.5;
  cfg.n_list = {2, 3, 4};
  cfg.seeds_per_n = 2;
  cfg.trials = 200;
  cfg.time_cap = 1e4;
  cfg.master_seed = 11;
  cfg.out_dir = tmp.path.string();
  RunStats stats = run_experiment(cfg);
  CHECK(stats.units_computed == 6);
  std::string summary = slurp(tmp.path / "summary.json");
  CHECK(summary.find("\"family\": \"gw\"") != std::string::npos);
  CHECK(summary.find("\"m\": 1.25") != std::string::npos);
}
