#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metastab/contact.hpp"
#include "metastab/generators.hpp"
#include "metastab/graph.hpp"

namespace metastab {

// Per-scale summary of one extinction-time estimate on a lattice-type model.
struct EstimateRecord {
  std::string model;
  std::string params;
  long n = 0;                // box scale
  std::size_t graph_size = 0;
  double box_size = 0.0;     // |B_n| sites (lattice) or (2n)^d volume (rgg)
  double mean_tau = 0.0;
  double se_mean = 0.0;
  double log_mean = 0.0;
  double X = 0.0;            // log_mean / |G_n|
  double X_box = 0.0;        // log_mean / n^d
  double ci_lo = 0.0, ci_hi = 0.0;  // 95% CI on log_mean
  double censored_frac = 0.0;
  std::uint64_t seed = 0;
};

struct GwEstimateRecord {
  std::string params;
  int n = 0;                 // generations
  long z_n = 0;
  double v_n = 0.0;
  double w_proxy = 0.0;      // |G_n| / v_n
  std::size_t graph_size = 0;
  double mean_tau = 0.0;
  double se_mean = 0.0;
  double log_mean = 0.0;
  double Y = 0.0;            // log_mean / m^n
  double X = 0.0;            // log_mean / |G_n|
  double ci_lo = 0.0, ci_hi = 0.0;
  double censored_frac = 0.0;
  std::string conditioning;
  std::uint64_t seed = 0;
};

// CI on the log-mean by the delta method when se/mean < 0.3, else by a seeded
// 1000-resample bootstrap over the raw trial values (when provided).
EstimateRecord compute_record(const Graph& graph, long n, double box_size,
                              const MeanEstimate& est, std::uint64_t seed);
GwEstimateRecord compute_gw_record(const GwRecord& gw, const MeanEstimate& est,
                                   std::uint64_t seed);

struct ThetaEstimate {
  double theta_hat = 0.0;
  double se = 0.0;
  long n_used = 0;
  // per-n (n, mean ratio, sample count) for trend inspection
  std::vector<std::tuple<long, double, std::size_t>> per_n;
};

// samples: (n, |G_n|, |B_n|); uses the largest available n.
ThetaEstimate estimate_theta(const std::vector<std::tuple<long, double, double>>& samples);

enum class RateFamily { Lattice, Gw };

struct RateEstimate {
  double gamma_tilde = 0.0;
  double gamma_tilde_se = 0.0;
  std::optional<double> theta;  // lattice rule input
  std::optional<double> m;      // gw rule input
  double gamma = 0.0;           // gamma_tilde/theta or (m-1)/m * gamma_tilde
  std::vector<std::pair<long, double>> per_n_mean;  // normalized-statistic trend
  std::vector<double> relative_increments;
  bool asymptote_not_reached = true;  // desk scale cannot certify the limit
  RateFamily family = RateFamily::Lattice;
};

// One point per record: (n, normalized statistic, censored fraction). The
// statistic is X_box for lattice families and Y for GW.
struct TrendPoint {
  long n = 0;
  double value = 0.0;
  double censored_frac = 0.0;
};

RateEstimate gamma_trend(const std::vector<TrendPoint>& points, RateFamily family,
                         double theta_or_m);

std::string rate_estimate_json(const RateEstimate& r);

struct SupermultReport {
  double log_tau_g = 0.0;
  std::vector<double> log_tau_sub;
  double defect = 0.0;       // log E[tau_G] - sum_i log E[tau_{G_i}]
  double correction = 0.0;   // (N+1) log(2 |G|^3)
  double lower_bound_value = 0.0;  // defect + correction
  bool max_dominance_exact = false;  // held on every coupled realization
  std::size_t trials = 0;
  bool used_exact = false;
};

// subgraphs are given as vertex subsets of g; they must be pairwise disjoint
// and each connected in g.
SupermultReport supermult_check(const Graph& g,
                                const std::vector<std::vector<Vertex>>& subgraphs,
                                double lambda, std::size_t trials,
                                std::uint64_t master_seed);

struct TailBoundReport {
  double exact_mean = 0.0;
  std::vector<double> t_grid;
  std::vector<double> ecdf;
  std::vector<double> bound;  // t/E[tau] + 3 * binomial SE
  std::vector<std::size_t> violations;  // indices where ecdf > bound
  std::size_t trials = 0;
};

TailBoundReport tail_bound_check(const Graph& g, double lambda, std::size_t trials,
                                 const std::vector<double>& t_grid,
                                 std::uint64_t master_seed);

std::string results_csv_header();
std::string results_csv_row(const EstimateRecord& r);

}  // namespace metastab
