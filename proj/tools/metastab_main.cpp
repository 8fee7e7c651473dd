#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "metastab/config.hpp"
#include "metastab/contact.hpp"
#include "metastab/errors.hpp"
#include "metastab/estimators.hpp"
#include "metastab/generators.hpp"
#include "metastab/harness.hpp"
#include "metastab/parallel.hpp"
#include "metastab/rng.hpp"
#include "metastab/structure.hpp"
#include "metastab/validate.hpp"

namespace fs = std::filesystem;
using namespace metastab;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  bool resume = false;
};

ExperimentConfig resolve_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig cfg = load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (cfg.out_dir.empty()) {
    if (const char* env = std::getenv("METASTAB_OUT")) cfg.out_dir = env;
  }
  if (opts.seed_set) cfg.master_seed = opts.seed;
  if (opts.workers > 0) cfg.workers = opts.workers;
  if (opts.resume) cfg.resume = true;
  return cfg;
}

void warn_regime(const ExperimentConfig& cfg) {
  // lambda_c(Z) ~ 1.65 in the literature; the rate theory assumes lambda above
  // it, but nothing here depends on the numeric value
  if (cfg.lambda < 1.65) {
    std::cerr << "note: lambda = " << cfg.lambda
              << " is likely below the one-dimensional critical value; extinction"
                 " will be fast and the metastable regime is out of reach\n";
  }
}

int cmd_generate(const CommonOpts& opts) {
  ExperimentConfig cfg = resolve_config(opts);
  if (cfg.out_dir.empty()) throw ConfigError("no output directory (out_dir, --out or METASTAB_OUT)");
  fs::create_directories(cfg.out_dir);
  for (long n : cfg.n_list) {
    for (std::size_t s = 0; s < cfg.seeds_per_n; ++s) {
      std::uint64_t seed = derive_seed(cfg.master_seed,
                                       static_cast<std::uint64_t>(n) * 1000003 + s,
                                       StreamRole::GraphGen);
      Graph g = generate_model(cfg.model, n, seed);
      if (!g.provenance.note.empty())
        std::cerr << "warning: " << g.provenance.note << "\n";
      fs::path file = fs::path(cfg.out_dir) /
                      ("graph_" + model_kind_name(cfg.model.kind) + "_n" + std::to_string(n) +
                       "_s" + std::to_string(s) + ".txt");
      std::ofstream out(file, std::ios::trunc);
      out << serialize_graph(g);
      std::cout << file.string() << " |V|=" << g.num_vertices()
                << " |E|=" << g.num_edges() << "\n";
    }
  }
  return 0;
}

int cmd_simulate(const CommonOpts& opts, const std::string& graph_path, long trials_flag,
                 const std::string& dump_path, bool exact, const std::string& dump_system_path) {
  ExperimentConfig cfg = resolve_config(opts);
  warn_regime(cfg);

  std::ifstream in(graph_path);
  if (!in) throw ConfigError("cannot open graph file '" + graph_path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Graph g = parse_graph(ss.str());
  if (!is_connected(g))
    std::cerr << "warning: graph is disconnected; extinction-rate theory assumes"
                 " a connected graph\n";

  if (exact) {
    double e = exact_expected_extinction(g, cfg.lambda);
    std::cout << "exact_mean_extinction " << format_double(e) << "\n";
    if (!dump_system_path.empty()) {
      std::ofstream dump(dump_system_path, std::ios::trunc);
      dump << dump_exact_system(g, cfg.lambda);
      std::cout << "system written to " << dump_system_path << "\n";
    }
    return 0;
  }

  std::size_t trials = trials_flag > 0 ? static_cast<std::size_t>(trials_flag) : cfg.trials;
  ContactConfig ccfg;
  ccfg.lambda = cfg.lambda;
  ccfg.time_cap = cfg.time_cap;

  if (!dump_path.empty()) {
    std::ofstream dump(dump_path, std::ios::trunc);
    dump << "trial_index,tau,censored,events\n";
    std::vector<TrialOutcome> outs(trials);
    parallel_for(trials, cfg.workers, [&](std::size_t i) {
      outs[i] = simulate_extinction(g, ccfg, cfg.master_seed, i);
    });
    for (const auto& o : outs) {
      dump << o.trial_index << "," << format_double(o.tau) << "," << (o.censored ? 1 : 0)
           << "," << o.events << "\n";
    }
  }
  MeanEstimate est = estimate_mean_extinction(g, ccfg, trials, cfg.master_seed, cfg.workers);
  std::cout << "mean " << format_double(est.mean) << " se " << format_double(est.std_error)
            << " censored " << est.censored << "/" << est.trials << "\n";
  return 0;
}

int cmd_estimate(const CommonOpts& opts) {
  ExperimentConfig cfg = resolve_config(opts);
  if (cfg.out_dir.empty()) throw ConfigError("no output directory (out_dir, --out or METASTAB_OUT)");
  warn_regime(cfg);
  RunStats stats = run_experiment(cfg);
  std::cout << "units " << stats.units_total << " computed " << stats.units_computed
            << " skipped " << stats.units_skipped << "\n";
  std::cout << "results: " << (fs::path(cfg.out_dir) / "results.csv").string() << "\n";
  std::cout << "summary: " << (fs::path(cfg.out_dir) / "summary.json").string() << "\n";
  return 0;
}

int cmd_census(const CommonOpts& opts, double epsilon) {
  ExperimentConfig cfg = resolve_config(opts);
  if (cfg.out_dir.empty()) throw ConfigError("no output directory (out_dir, --out or METASTAB_OUT)");
  fs::create_directories(cfg.out_dir);
  std::ofstream csv(fs::path(cfg.out_dir) / "census.csv", std::ios::trunc);
  csv << census_csv_header() << "\n";
  std::vector<std::pair<std::uint64_t, CensusReport>> reports;
  for (long n : cfg.n_list) {
    for (std::size_t s = 0; s < cfg.seeds_per_n; ++s) {
      std::uint64_t seed = derive_seed(cfg.master_seed,
                                       static_cast<std::uint64_t>(n) * 1000003 + s,
                                       StreamRole::GraphGen);
      Graph g = generate_model(cfg.model, n, seed);
      CensusReport rep = component_census(g, n, epsilon);
      csv << census_csv_rows(rep, seed);
      reports.emplace_back(seed, std::move(rep));
    }
  }
  std::ofstream js(fs::path(cfg.out_dir) / "census_verdicts.json", std::ios::trunc);
  js << census_verdict_json(reports) << "\n";
  std::cout << "census rows for " << reports.size() << " samples written to "
            << cfg.out_dir << "\n";
  return 0;
}

int cmd_run(const CommonOpts& opts, double epsilon) {
  int rc = cmd_estimate(opts);
  if (rc != 0) return rc;
  return cmd_census(opts, epsilon);
}

int cmd_validate(const std::string& level, const std::string& report_path, int workers) {
  bool quick = level == "quick";
  auto results = run_acceptance(quick, workers);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name
              << " (" << format_double(r.seconds) << "s)\n";
    if (!r.details.empty()) std::cout << "       " << r.details << "\n";
    all = all && r.pass;
  }
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::trunc);
    out << acceptance_report_json(results) << "\n";
  }
  std::cout << (all ? "acceptance: ALL PASS" : "acceptance: FAILURES") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contact-process extinction-time simulator and estimation harness"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "experiment config file");
    sub->add_option("--out", opts.out_dir, "output directory (overrides config and METASTAB_OUT)");
    sub->add_option("--seed", opts.seed, "master seed override")
        ->each([&](const std::string&) { opts.seed_set = true; });
    sub->add_option("--workers", opts.workers, "worker threads (0 = hardware)");
    sub->add_flag("--resume", opts.resume, "skip units already in the manifest");
  };

  auto* gen = app.add_subcommand("generate", "sample graphs and write them as text");
  add_common(gen);

  auto* sim = app.add_subcommand("simulate", "simulate extinction on a serialized graph");
  add_common(sim);
  std::string graph_path, dump_path, dump_system_path;
  long trials_flag = 0;
  bool exact = false;
  sim->add_option("--graph", graph_path, "graph file")->required();
  sim->add_option("--trials", trials_flag, "trial count override");
  sim->add_option("--dump", dump_path, "write per-trial CSV here");
  sim->add_flag("--exact", exact, "solve the absorption system instead of sampling");
  sim->add_option("--dump-system", dump_system_path, "write the sparse system (with --exact)");

  auto* est = app.add_subcommand("estimate", "run the estimation pipeline over the config grid");
  add_common(est);

  auto* cen = app.add_subcommand("census", "component census over the config grid");
  add_common(cen);
  double epsilon = 0.5;
  cen->add_option("--epsilon", epsilon, "census epsilon in (0,1)");

  auto* run = app.add_subcommand("run", "full pipeline: estimate + census");
  add_common(run);
  double run_epsilon = 0.5;
  run->add_option("--epsilon", run_epsilon, "census epsilon in (0,1)");

  auto* val = app.add_subcommand("validate", "run the acceptance battery");
  std::string level = "full";
  std::string report_path;
  int val_workers = 0;
  val->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));
  val->add_option("--report", report_path, "write a JSON report here");
  val->add_option("--workers", val_workers, "worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(opts);
    if (sim->parsed())
      return cmd_simulate(opts, graph_path, trials_flag, dump_path, exact, dump_system_path);
    if (est->parsed()) return cmd_estimate(opts);
    if (cen->parsed()) return cmd_census(opts, epsilon);
    if (run->parsed()) return cmd_run(opts, run_epsilon);
    if (val->parsed()) return cmd_validate(level, report_path, val_workers);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
