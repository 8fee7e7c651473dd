#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "metastab/contact.hpp"
#include "metastab/errors.hpp"
#include "metastab/graph.hpp"
#include "metastab/rng.hpp"

using namespace metastab;

namespace {

double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
  return h;
}

}  // namespace

TEST_CASE("exact solver hand values") {
  CHECK(exact_expected_extinction(path_graph(1), 2.0) == doctest::Approx(1.0).epsilon(1e-10));
  // two-vertex complete graph: a = 1 + (1+lambda)/2
  CHECK(exact_expected_extinction(complete_graph(2), 2.0) ==
        doctest::Approx(2.5).epsilon(1e-10));
  CHECK(exact_expected_extinction(path_graph(3), 0.0) ==
        doctest::Approx(11.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("exact solver at lambda 0 is the harmonic number") {
  for (auto g : {path_graph(4), cycle_graph(4), star_graph(4)}) {
    CHECK(exact_expected_extinction(g, 0.0) ==
          doctest::Approx(harmonic(g.num_vertices())).epsilon(1e-9));
  }
}

TEST_CASE("exact solver guards") {
  CHECK_THROWS_AS(exact_expected_extinction(path_graph(21), 1.0), TooManyVerticesError);
  Graph g;
  CHECK_THROWS_AS(exact_expected_extinction(g, 1.0), EmptyGraphError);
}

TEST_CASE("system dump is well formed") {
  std::string dump = dump_exact_system(complete_graph(2), 2.0);
  CHECK(dump.find("3 3") != std::string::npos);  // 2^2-1 states
  CHECK(dump.find('%') != std::string::npos);
}

TEST_CASE("monte carlo agrees with the exact solver") {
  const std::size_t trials = 100000;
  SUBCASE("single vertex is Exponential(1)") {
    MeanEstimate est = estimate_mean_extinction(path_graph(1), {.lambda = 2.0}, trials, 11);
    CHECK(std::fabs(est.mean - 1.0) <= 3.0 * est.std_error);
  }
  SUBCASE("two-vertex complete graph at lambda 2") {
    MeanEstimate est = estimate_mean_extinction(complete_graph(2), {.lambda = 2.0}, trials, 12);
    CHECK(std::fabs(est.mean - 2.5) <= 3.0 * est.std_error);
  }
  SUBCASE("path of three at lambda 0") {
    MeanEstimate est = estimate_mean_extinction(path_graph(3), {.lambda = 0.0}, trials, 13);
    CHECK(std::fabs(est.mean - 11.0 / 6.0) <= 3.0 * est.std_error);
  }
}

TEST_CASE("kolmogorov-smirnov: single-vertex extinction is Exponential(1)") {
  const std::size_t n = 10000;
  std::vector<double> taus(n);
  for (std::size_t i = 0; i < n; ++i) {
    taus[i] = simulate_extinction(path_graph(1), {.lambda = 1.0}, 21, i).tau;
  }
  std::sort(taus.begin(), taus.end());
  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = 1.0 - std::exp(-taus[i]);
    double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
    dmax = std::max({dmax, std::fabs(f - lo), std::fabs(f - hi)});
  }
  // 1% critical value ~ 1.63 / sqrt(n)
  CHECK(dmax < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("censoring") {
  ContactConfig cfg;
  cfg.lambda = 2.0;
  cfg.time_cap = 1e-9;
  TrialOutcome out = simulate_extinction(path_graph(5), cfg, 3);
  CHECK(out.censored);
  CHECK(out.tau == 1e-9);
  CHECK_THROWS_AS(estimate_mean_extinction(path_graph(5), cfg, 50, 3), AllCensoredError);
}

TEST_CASE("monotone coupling in lambda") {
  SUBCASE("degenerate list matches simulate_extinction in law") {
    const std::size_t trials = 20000;
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      sum += coupled_simulate(complete_graph(2), {2.0}, derive_seed(5, t, StreamRole::Trial),
                              std::nullopt)[0].tau;
    }
    double mean = sum / trials;
    CHECK(std::fabs(mean - 2.5) < 0.1);
  }
  SUBCASE("tau is nondecreasing in lambda on every realization") {
    for (auto g : {path_graph(4), cycle_graph(4), star_graph(4)}) {
      for (std::size_t t = 0; t < 10000; ++t) {
        auto outs = coupled_simulate(g, {0.5, 2.0}, derive_seed(6, t, StreamRole::Trial),
                                     std::nullopt);
        REQUIRE(outs[0].tau <= outs[1].tau);
      }
    }
  }
  SUBCASE("rejects ill-formed lambda lists") {
    CHECK_THROWS_AS(coupled_simulate(path_graph(2), {2.0, 0.5}, 0, std::nullopt),
                    BadParameterError);
    CHECK_THROWS_AS(coupled_simulate(path_graph(2), {}, 0, std::nullopt), BadParameterError);
  }
}

TEST_CASE("subgraph coupling is pointwise dominated") {
  Graph g = path_graph(5);
  std::vector<Vertex> sub{0, 1, 2};
  for (std::size_t t = 0; t < 10000; ++t) {
    auto outs = coupled_subgraph_simulate(g, {sub}, 2.0, derive_seed(7, t, StreamRole::Trial),
                                          std::nullopt);
    REQUIRE(outs[0].tau <= outs[1].tau);
  }
}

TEST_CASE("estimate_mean_extinction bookkeeping") {
  MeanEstimate est = estimate_mean_extinction(path_graph(3), {.lambda = 1.0}, 500, 8);
  CHECK(est.trials == 500);
  CHECK(est.censored == 0);
  CHECK(est.taus.size() == 500);
  CHECK(est.mean > 0.0);
  SUBCASE("deterministic across worker counts") {
    MeanEstimate a = estimate_mean_extinction(path_graph(3), {.lambda = 1.0}, 400, 9, 1);
    MeanEstimate b = estimate_mean_extinction(path_graph(3), {.lambda = 1.0}, 400, 9, 8);
    CHECK(a.mean == b.mean);
    CHECK(a.taus == b.taus);
  }
}

TEST_CASE("explicit initial sets") {
  ContactConfig cfg;
  cfg.lambda = 1.0;
  cfg.initial = std::vector<Vertex>{0};
  TrialOutcome out = simulate_extinction(path_graph(3), cfg, 10);
  CHECK(out.tau > 0.0);
  cfg.initial = std::vector<Vertex>{};
  CHECK_THROWS_AS(simulate_extinction(path_graph(3), cfg, 10), BadParameterError);
  cfg.initial = std::vector<Vertex>{9};
  CHECK_THROWS_AS(simulate_extinction(path_graph(3), cfg, 10), UnknownVertexError);
}
