#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metastab/graph.hpp"

namespace metastab {

struct ContactConfig {
  // The regime the rate theory needs is lambda > lambda_c(Z); that critical
  // value is literature input and is never enforced here.
  double lambda = 2.0;
  std::optional<std::vector<Vertex>> initial;  // nullopt = full occupancy
  std::optional<double> time_cap;              // censoring horizon
};

struct TrialOutcome {
  double tau = 0.0;       // extinction time, or the cap when censored
  bool censored = false;
  std::uint64_t events = 0;  // clock rings processed (including voided ones)
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

// One exact-in-distribution sample of the extinction time started from cfg's
// initial set, via next-event simulation over the currently infected set.
TrialOutcome simulate_extinction(const Graph& g, const ContactConfig& cfg,
                                 std::uint64_t master_seed,
                                 std::uint64_t trial_index = 0);

// One graphical representation drives every rate: transmissions are generated
// at the largest rate and each smaller rate keeps a thinned subset, so the
// returned extinction times are nondecreasing in lambda on every realization.
std::vector<TrialOutcome> coupled_simulate(const Graph& g,
                                           const std::vector<double>& lambdas,
                                           std::uint64_t seed,
                                           std::optional<double> time_cap);

// Same realization run on g and restricted to the induced subgraph on
// sub_vertices; the restriction sees only clocks of its own vertices/edges,
// so tau_sub <= tau_full pointwise. Returns one outcome per subset plus the
// full-graph outcome at the back.
std::vector<TrialOutcome> coupled_subgraph_simulate(
    const Graph& g, const std::vector<std::vector<Vertex>>& subsets,
    double lambda, std::uint64_t seed, std::optional<double> time_cap);

// Exact E[tau] from full occupancy by solving the absorption system of the
// 2^|V|-state chain (empty state absorbing). |V| <= 20.
double exact_expected_extinction(const Graph& g, double lambda);

// Sparse absorption system in coordinate text form, for external checking.
std::string dump_exact_system(const Graph& g, double lambda);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t censored = 0;
  std::size_t trials = 0;
  std::vector<double> taus;  // uncensored extinction times, trial order
};

// Independent trials with derived seeds (master_seed, trial_index); the
// aggregation order is fixed by trial index, so results do not depend on the
// worker count.
MeanEstimate estimate_mean_extinction(const Graph& g, const ContactConfig& cfg,
                                      std::size_t trials, std::uint64_t master_seed,
                                      int workers = 0);

}  // namespace metastab
