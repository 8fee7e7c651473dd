#include "metastab/harness.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "metastab/contact.hpp"
#include "metastab/errors.hpp"
#include "metastab/estimators.hpp"
#include "metastab/generators.hpp"
#include "metastab/parallel.hpp"
#include "metastab/rng.hpp"
#include <json.hpp>

namespace fs = std::filesystem;

namespace metastab {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t unit_key(const ExperimentConfig& cfg, long n, std::size_t seed_index) {
  // only fields that affect the unit's result take part in the key, so edits
  // to unrelated config fields (workers, out_dir, resume) keep the journal valid
  ExperimentConfig essential;
  essential.model = cfg.model;
  essential.lambda = cfg.lambda;
  essential.trials = cfg.trials;
  essential.time_cap = cfg.time_cap;
  essential.master_seed = cfg.master_seed;
  essential.n_list = {n};
  std::string desc = serialize_config(essential) + "|unit:" + std::to_string(n) + ":" +
                     std::to_string(seed_index);
  return fnv1a(desc);
}

namespace {

struct UnitResult {
  long n = 0;
  std::size_t seed_index = 0;
  bool degenerate = false;  // empty graph at this (n, seed)
  EstimateRecord rec;       // lattice-style row (also carries GW sizes)
  // gw extras
  bool is_gw = false;
  GwEstimateRecord gw_rec;
  double box_size = 0.0;
};

nlohmann::json unit_to_json(std::uint64_t key, const UnitResult& u) {
  nlohmann::json j;
  j["key"] = key;
  j["n"] = u.n;
  j["seed_index"] = u.seed_index;
  j["degenerate"] = u.degenerate;
  j["is_gw"] = u.is_gw;
  j["box_size"] = u.box_size;
  if (!u.degenerate) {
    nlohmann::json r;
    r["model"] = u.rec.model;
    r["params"] = u.rec.params;
    r["graph_size"] = u.rec.graph_size;
    r["mean_tau"] = u.rec.mean_tau;
    r["se_mean"] = u.rec.se_mean;
    r["log_mean"] = u.rec.log_mean;
    r["X"] = u.rec.X;
    r["X_box"] = u.rec.X_box;
    r["ci_lo"] = u.rec.ci_lo;
    r["ci_hi"] = u.rec.ci_hi;
    r["censored_frac"] = u.rec.censored_frac;
    r["seed"] = u.rec.seed;
    j["record"] = r;
    if (u.is_gw) {
      nlohmann::json gw;
      gw["z_n"] = u.gw_rec.z_n;
      gw["v_n"] = u.gw_rec.v_n;
      gw["w_proxy"] = u.gw_rec.w_proxy;
      gw["Y"] = u.gw_rec.Y;
      gw["conditioning"] = u.gw_rec.conditioning;
      j["gw"] = gw;
    }
  }
  return j;
}

UnitResult unit_from_json(const nlohmann::json& j) {
  UnitResult u;
  u.n = j.at("n").get<long>();
  u.seed_index = j.at("seed_index").get<std::size_t>();
  u.degenerate = j.at("degenerate").get<bool>();
  u.is_gw = j.at("is_gw").get<bool>();
  u.box_size = j.at("box_size").get<double>();
  if (!u.degenerate) {
    const auto& r = j.at("record");
    u.rec.model = r.at("model").get<std::string>();
    u.rec.params = r.at("params").get<std::string>();
    u.rec.n = u.n;
    u.rec.graph_size = r.at("graph_size").get<std::size_t>();
    u.rec.box_size = u.box_size;
    u.rec.mean_tau = r.at("mean_tau").get<double>();
    u.rec.se_mean = r.at("se_mean").get<double>();
    u.rec.log_mean = r.at("log_mean").get<double>();
    u.rec.X = r.at("X").get<double>();
    u.rec.X_box = r.at("X_box").get<double>();
    u.rec.ci_lo = r.at("ci_lo").get<double>();
    u.rec.ci_hi = r.at("ci_hi").get<double>();
    u.rec.censored_frac = r.at("censored_frac").get<double>();
    u.rec.seed = r.at("seed").get<std::uint64_t>();
    if (u.is_gw) {
      const auto& gw = j.at("gw");
      u.gw_rec.z_n = gw.at("z_n").get<long>();
      u.gw_rec.v_n = gw.at("v_n").get<double>();
      u.gw_rec.w_proxy = gw.at("w_proxy").get<double>();
      u.gw_rec.Y = gw.at("Y").get<double>();
      u.gw_rec.conditioning = gw.at("conditioning").get<std::string>();
      u.gw_rec.n = static_cast<int>(u.n);
      u.gw_rec.graph_size = u.rec.graph_size;
      u.gw_rec.log_mean = u.rec.log_mean;
      u.gw_rec.X = u.rec.X;
      u.gw_rec.censored_frac = u.rec.censored_frac;
    }
  }
  return u;
}

UnitResult compute_unit(const ExperimentConfig& cfg, long n, std::size_t seed_index) {
  UnitResult u;
  u.n = n;
  u.seed_index = seed_index;
  u.is_gw = cfg.model.kind == ModelKind::Gw;

  const std::uint64_t gen_seed =
      derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n) * 1000003 + seed_index,
                  StreamRole::GraphGen);
  GeneratedSample sample = generate_sample(cfg.model, n, gen_seed);

  if (u.is_gw) {
    u.box_size = sample.gw->v_n;
  } else if (cfg.model.kind == ModelKind::Rgg) {
    u.box_size = BoxSpec{n, cfg.model.d, BoxKind::Continuum}.volume();
  } else {
    u.box_size = static_cast<double>(BoxSpec{n, cfg.model.d, BoxKind::Lattice}.site_count());
  }

  if (sample.graph.empty()) {
    u.degenerate = true;
    return u;
  }
  Component comp = maximal_component(sample.graph);
  Graph gn = u.is_gw ? std::move(sample.graph)
                     : induced_subgraph(sample.graph, comp.vertices);

  ContactConfig ccfg;
  ccfg.lambda = cfg.lambda;
  ccfg.time_cap = cfg.time_cap;
  const std::uint64_t sim_seed =
      derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n) * 1000003 + seed_index,
                  StreamRole::Trial);
  MeanEstimate est = estimate_mean_extinction(gn, ccfg, cfg.trials, sim_seed, 1);

  u.rec = compute_record(gn, n, u.box_size, est, sim_seed);
  if (u.is_gw) {
    u.gw_rec = compute_gw_record(*sample.gw, est, sim_seed);
    u.rec.X_box = u.gw_rec.Y;  // the per-m^n normalization is the GW analogue
  }
  return u;
}

void write_outputs(const ExperimentConfig& cfg,
                   const std::map<std::pair<long, std::size_t>, UnitResult>& units) {
  fs::path out(cfg.out_dir);
  std::ofstream csv(out / "results.csv", std::ios::trunc);
  csv << results_csv_header() << "\n";
  for (const auto& [k, u] : units) {
    if (u.degenerate) {
      csv << model_kind_name(cfg.model.kind) << ",," << u.n << ",0,"
          << format_double(u.box_size) << ",nan,nan,nan,nan,nan,0,0\n";
    } else {
      csv << results_csv_row(u.rec) << "\n";
    }
  }
  csv.close();

  nlohmann::json summary;
  // execution-only fields are zeroed so reruns and resumes agree byte-for-byte
  ExperimentConfig echoed = cfg;
  echoed.resume = false;
  echoed.workers = 0;
  summary["config"] = serialize_config(echoed);
  summary["units"] = units.size();

  std::vector<TrendPoint> points;
  std::vector<std::tuple<long, double, double>> density;
  for (const auto& [k, u] : units) {
    if (u.degenerate) continue;
    TrendPoint p;
    p.n = u.n;
    p.value = u.is_gw ? u.gw_rec.Y : u.rec.X_box;
    p.censored_frac = u.rec.censored_frac;
    points.push_back(p);
    density.emplace_back(u.n, static_cast<double>(u.rec.graph_size), u.box_size);
  }
  try {
    if (cfg.model.kind == ModelKind::Gw) {
      double m = OffspringLaw::parse(cfg.model.nu).mean();
      summary["rate"] = nlohmann::json::parse(
          rate_estimate_json(gamma_trend(points, RateFamily::Gw, m)));
    } else {
      ThetaEstimate theta = estimate_theta(density);
      auto rate = gamma_trend(points, RateFamily::Lattice, theta.theta_hat);
      summary["rate"] = nlohmann::json::parse(rate_estimate_json(rate));
      summary["theta_se"] = theta.se;
    }
  } catch (const SimError& e) {
    summary["rate"] = nullptr;
    summary["rate_unavailable"] = e.what();
  }
  std::ofstream js(out / "summary.json", std::ios::trunc);
  js << summary.dump(2) << "\n";
}

}  // namespace

RunStats run_experiment(const ExperimentConfig& cfg) {
  if (cfg.out_dir.empty()) throw ConfigError("out_dir is not set");
  fs::path out(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out_dir + "'");

  // load the journal of completed units
  std::map<std::uint64_t, UnitResult> journal;
  const fs::path manifest_path = out / "manifest.jsonl";
  if (!cfg.resume && fs::exists(manifest_path)) {
    fs::remove(manifest_path);  // fresh run starts a fresh journal
  }
  if (cfg.resume && fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) continue;  // torn write from an interrupt
      journal[j.at("key").get<std::uint64_t>()] = unit_from_json(j);
    }
  }

  struct Pending {
    long n;
    std::size_t seed_index;
    std::uint64_t key;
  };
  std::vector<Pending> todo;
  std::map<std::pair<long, std::size_t>, UnitResult> done;
  RunStats stats;
  for (long n : cfg.n_list) {
    for (std::size_t s = 0; s < cfg.seeds_per_n; ++s) {
      ++stats.units_total;
      std::uint64_t key = unit_key(cfg, n, s);
      auto it = journal.find(key);
      if (it != journal.end()) {
        ++stats.units_skipped;
        done[{n, s}] = it->second;
      } else {
        todo.push_back({n, s, key});
      }
    }
  }

  std::vector<UnitResult> fresh(todo.size());
  parallel_for(todo.size(), cfg.workers, [&](std::size_t i) {
    fresh[i] = compute_unit(cfg, todo[i].n, todo[i].seed_index);
  });
  stats.units_computed = todo.size();

  // single writer appends the journal in deterministic unit order
  std::ofstream manifest(manifest_path, std::ios::app);
  for (std::size_t i = 0; i < todo.size(); ++i) {
    manifest << unit_to_json(todo[i].key, fresh[i]).dump() << "\n";
    done[{todo[i].n, todo[i].seed_index}] = fresh[i];
  }
  manifest.close();

  write_outputs(cfg, done);
  return stats;
}

}  // namespace metastab
