#include "metastab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "metastab/errors.hpp"
#include "metastab/rng.hpp"
#include <json.hpp>

namespace metastab {

namespace {

// 95% CI on log(mean). Delta method is fine while se/mean is small; beyond
// that the log transform is too curved and we bootstrap instead.
std::pair<double, double> log_ci(double mean, double se,
                                 const std::vector<double>& taus,
                                 std::uint64_t seed) {
  const double log_mean = std::log(mean);
  const double rel = se / mean;
  if (rel < 0.3 || taus.size() < 2) {
    return {log_mean - 1.96 * rel, log_mean + 1.96 * rel};
  }
  const int nres = 1000;
  std::vector<double> boot(nres);
  Rng rng(derive_seed(seed, 0, StreamRole::Bootstrap));
  for (int b = 0; b < nres; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      sum += taus[rng.uniform_below(taus.size())];
    }
    boot[b] = std::log(sum / static_cast<double>(taus.size()));
  }
  std::sort(boot.begin(), boot.end());
  return {boot[24], boot[974]};
}

}  // namespace

EstimateRecord compute_record(const Graph& graph, long n, double box_size,
                              const MeanEstimate& est, std::uint64_t seed) {
  if (est.mean <= 0.0) throw NonpositiveMeanError();
  EstimateRecord r;
  r.model = graph.provenance.model;
  r.params = graph.provenance.params;
  r.n = n;
  r.graph_size = graph.num_vertices();
  r.box_size = box_size;
  r.mean_tau = est.mean;
  r.se_mean = est.std_error;
  r.log_mean = std::log(est.mean);
  r.X = r.log_mean / static_cast<double>(r.graph_size);
  r.X_box = r.log_mean / std::pow(static_cast<double>(n), graph.dim);
  std::tie(r.ci_lo, r.ci_hi) = log_ci(est.mean, est.std_error, est.taus, seed);
  r.censored_frac = est.trials == 0
                        ? 0.0
                        : static_cast<double>(est.censored) / static_cast<double>(est.trials);
  r.seed = seed;
  return r;
}

GwEstimateRecord compute_gw_record(const GwRecord& gw, const MeanEstimate& est,
                                   std::uint64_t seed) {
  if (est.mean <= 0.0) throw NonpositiveMeanError();
  GwEstimateRecord r;
  r.params = gw.tree.provenance.params;
  r.n = static_cast<int>(gw.generation_sizes.size()) - 1;
  r.z_n = gw.generation_sizes.back();
  r.v_n = gw.v_n;
  r.w_proxy = gw.w_proxy();
  r.graph_size = gw.tree.num_vertices();
  r.mean_tau = est.mean;
  r.se_mean = est.std_error;
  r.log_mean = std::log(est.mean);
  r.Y = r.log_mean / std::pow(gw.m, r.n);
  r.X = r.log_mean / static_cast<double>(r.graph_size);
  std::tie(r.ci_lo, r.ci_hi) = log_ci(est.mean, est.std_error, est.taus, seed);
  r.censored_frac = est.trials == 0
                        ? 0.0
                        : static_cast<double>(est.censored) / static_cast<double>(est.trials);
  r.conditioning = gw.conditioning == GwConditioning::SurvivalToN ? "survival-to-n" : "none";
  r.seed = seed;
  return r;
}

ThetaEstimate estimate_theta(const std::vector<std::tuple<long, double, double>>& samples) {
  if (samples.empty()) throw InsufficientSamplesError("no density samples");
  std::map<long, std::vector<double>> by_n;
  for (const auto& [n, gsize, bsize] : samples) {
    by_n[n].push_back(gsize / bsize);
  }
  ThetaEstimate out;
  for (const auto& [n, ratios] : by_n) {
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    out.per_n.emplace_back(n, mean, ratios.size());
  }
  const auto& [n_max, ratios] = *by_n.rbegin();
  if (ratios.size() < 2)
    throw InsufficientSamplesError("need >= 2 samples at the largest n");
  out.n_used = n_max;
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double ss = 0.0;
  for (double r : ratios) ss += (r - mean) * (r - mean);
  out.theta_hat = mean;
  out.se = std::sqrt(ss / (static_cast<double>(ratios.size()) - 1.0) /
                     static_cast<double>(ratios.size()));
  return out;
}

RateEstimate gamma_trend(const std::vector<TrendPoint>& points, RateFamily family,
                         double theta_or_m) {
  std::map<long, std::vector<double>> by_n;
  std::map<long, std::vector<double>> censored_by_n;
  for (const auto& p : points) {
    by_n[p.n].push_back(p.value);
    censored_by_n[p.n].push_back(p.censored_frac);
  }
  if (by_n.size() < 3) throw TooFewScalesError();
  for (const auto& [n, cf] : censored_by_n) {
    double mean = 0.0;
    for (double c : cf) mean += c;
    mean /= static_cast<double>(cf.size());
    if (mean >= 0.5) throw CensoringTooHighError(n);
  }

  RateEstimate out;
  out.family = family;
  for (const auto& [n, vals] : by_n) {
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    out.per_n_mean.emplace_back(n, mean);
  }
  for (std::size_t i = 1; i < out.per_n_mean.size(); ++i) {
    double prev = out.per_n_mean[i - 1].second;
    double cur = out.per_n_mean[i].second;
    out.relative_increments.push_back(prev != 0.0 ? std::fabs(cur - prev) / std::fabs(prev)
                                                  : std::fabs(cur));
  }
  const auto& [n_max, vals] = *by_n.rbegin();
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(vals.size());
  out.gamma_tilde = mean;
  if (vals.size() > 1) {
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    out.gamma_tilde_se = std::sqrt(ss / (static_cast<double>(vals.size()) - 1.0) /
                                   static_cast<double>(vals.size()));
  }
  if (family == RateFamily::Lattice) {
    out.theta = theta_or_m;
    out.gamma = theta_or_m > 0.0 ? out.gamma_tilde / theta_or_m
                                 : std::numeric_limits<double>::quiet_NaN();
  } else {
    out.m = theta_or_m;
    out.gamma = (theta_or_m - 1.0) / theta_or_m * out.gamma_tilde;
  }
  out.asymptote_not_reached = true;
  return out;
}

std::string rate_estimate_json(const RateEstimate& r) {
  nlohmann::json j;
  j["gamma_tilde"] = r.gamma_tilde;
  j["gamma_tilde_se"] = r.gamma_tilde_se;
  if (r.theta) j["theta"] = *r.theta; else j["theta"] = nullptr;
  if (r.m) j["m"] = *r.m; else j["m"] = nullptr;
  j["gamma"] = r.gamma;
  j["per_n_mean"] = nlohmann::json::array();
  for (auto [n, v] : r.per_n_mean) j["per_n_mean"].push_back({n, v});
  j["relative_increments"] = r.relative_increments;
  j["asymptote_not_reached"] = r.asymptote_not_reached;
  j["family"] = r.family == RateFamily::Lattice ? "lattice" : "gw";
  return j.dump(2);
}

namespace {

void check_subgraphs(const Graph& g, const std::vector<std::vector<Vertex>>& subs) {
  std::set<Vertex> seen;
  for (const auto& vs : subs) {
    if (vs.empty()) throw NotSubgraphError();
    for (Vertex v : vs) {
      if (v >= g.num_vertices()) throw NotSubgraphError();
      if (!seen.insert(v).second) throw NotDisjointError();
    }
    Graph sub = induced_subgraph(g, vs);
    if (!is_connected(sub)) throw NotConnectedError();
  }
}

}  // namespace

SupermultReport supermult_check(const Graph& g,
                                const std::vector<std::vector<Vertex>>& subgraphs,
                                double lambda, std::size_t trials,
                                std::uint64_t master_seed) {
  if (g.empty()) throw EmptyGraphError();
  check_subgraphs(g, subgraphs);

  SupermultReport rep;
  rep.trials = trials;
  rep.used_exact = g.num_vertices() <= 20;

  if (rep.used_exact) {
    rep.log_tau_g = std::log(exact_expected_extinction(g, lambda));
    for (const auto& vs : subgraphs) {
      Graph sub = induced_subgraph(g, vs);
      rep.log_tau_sub.push_back(std::log(exact_expected_extinction(sub, lambda)));
    }
  } else {
    ContactConfig cfg;
    cfg.lambda = lambda;
    rep.log_tau_g = std::log(estimate_mean_extinction(g, cfg, trials, master_seed).mean);
    std::uint64_t k = 1;
    for (const auto& vs : subgraphs) {
      Graph sub = induced_subgraph(g, vs);
      rep.log_tau_sub.push_back(std::log(
          estimate_mean_extinction(sub, cfg, trials,
                                   derive_seed(master_seed, k++, StreamRole::Trial))
              .mean));
    }
  }
  double sum_sub = 0.0;
  for (double ls : rep.log_tau_sub) sum_sub += ls;
  rep.defect = rep.log_tau_g - sum_sub;
  const double nuke = static_cast<double>(subgraphs.size()) + 1.0;
  rep.correction = nuke * std::log(2.0 * std::pow(static_cast<double>(g.num_vertices()), 3));
  rep.lower_bound_value = rep.defect + rep.correction;

  // constant-free consequence, exact on every realization via the shared
  // graphical representation
  rep.max_dominance_exact = true;
  for (std::size_t t = 0; t < trials; ++t) {
    auto outs = coupled_subgraph_simulate(g, subgraphs, lambda,
                                          derive_seed(master_seed, t, StreamRole::Trial),
                                          std::nullopt);
    const TrialOutcome& full = outs.back();
    for (std::size_t i = 0; i + 1 < outs.size(); ++i) {
      if (outs[i].tau > full.tau) rep.max_dominance_exact = false;
    }
  }
  return rep;
}

TailBoundReport tail_bound_check(const Graph& g, double lambda, std::size_t trials,
                                 const std::vector<double>& t_grid,
                                 std::uint64_t master_seed) {
  TailBoundReport rep;
  rep.trials = trials;
  rep.exact_mean = exact_expected_extinction(g, lambda);
  rep.t_grid = t_grid;

  std::vector<double> taus(trials);
  ContactConfig cfg;
  cfg.lambda = lambda;
  for (std::size_t i = 0; i < trials; ++i) {
    taus[i] = simulate_extinction(g, cfg, master_seed, i).tau;
  }
  std::sort(taus.begin(), taus.end());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    double t = t_grid[k];
    std::size_t cnt = static_cast<std::size_t>(
        std::upper_bound(taus.begin(), taus.end(), t) - taus.begin());
    double f = static_cast<double>(cnt) / static_cast<double>(trials);
    double se = std::sqrt(f * (1.0 - f) / static_cast<double>(trials));
    rep.ecdf.push_back(f);
    rep.bound.push_back(t / rep.exact_mean + 3.0 * se);
    if (f > rep.bound.back()) rep.violations.push_back(k);
  }
  return rep;
}

std::string results_csv_header() {
  return "model,params,n,graph_size,box_size,mean_tau,se,log_mean,X,X_box,censored_frac,seed";
}

std::string results_csv_row(const EstimateRecord& r) {
  std::string out;
  out += r.model + "," + r.params + "," + std::to_string(r.n) + "," +
         std::to_string(r.graph_size) + "," + format_double(r.box_size) + "," +
         format_double(r.mean_tau) + "," + format_double(r.se_mean) + "," +
         format_double(r.log_mean) + "," + format_double(r.X) + "," +
         format_double(r.X_box) + "," + format_double(r.censored_frac) + "," +
         std::to_string(r.seed);
  return out;
}

}  // namespace metastab
