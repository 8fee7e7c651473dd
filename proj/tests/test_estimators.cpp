#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "metastab/contact.hpp"
#include "metastab/errors.hpp"
#include "metastab/estimators.hpp"
#include "metastab/generators.hpp"

using namespace metastab;

namespace {

MeanEstimate fake_estimate(double mean, double se, std::size_t trials = 100) {
  MeanEstimate est;
  est.mean = mean;
  est.std_error = se;
  est.trials = trials;
  est.taus.assign(trials, mean);
  return est;
}

double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
  return h;
}

}  // namespace

TEST_CASE("compute_record arithmetic") {
  Graph g = gen_bond_percolation({2, 2, BoxKind::Lattice}, 1.0, 0);  // 16 vertices
  SUBCASE("mean 1 gives zero log and zero X") {
    EstimateRecord r = compute_record(g, 2, 16.0, fake_estimate(1.0, 0.01), 7);
    CHECK(r.log_mean == 0.0);
    CHECK(r.X == 0.0);
    CHECK(r.X_box == 0.0);
  }
  SUBCASE("|G|=16, mean e^16 gives X=1") {
    EstimateRecord r = compute_record(g, 2, 16.0, fake_estimate(std::exp(16.0), 1.0), 7);
    CHECK(r.X == doctest::Approx(1.0));
    CHECK(r.X_box == doctest::Approx(4.0));  // n^d = 4
  }
  SUBCASE("nonpositive mean throws") {
    CHECK_THROWS_AS(compute_record(g, 2, 16.0, fake_estimate(0.0, 0.0), 7),
                    NonpositiveMeanError);
  }
  SUBCASE("pure function: identical inputs give identical records") {
    EstimateRecord a = compute_record(g, 2, 16.0, fake_estimate(3.0, 0.2), 7);
    EstimateRecord b = compute_record(g, 2, 16.0, fake_estimate(3.0, 0.2), 7);
    CHECK(a.log_mean == b.log_mean);
    CHECK(a.ci_lo == b.ci_lo);
    CHECK(a.ci_hi == b.ci_hi);
  }
}

TEST_CASE("gw record consistency identity") {
  GwRecord rec = gen_gw_tree(OffspringLaw::parse("2:1"), 3, GwConditioning::None, 0);
  REQUIRE(rec.tree.num_vertices() == 15);
  GwEstimateRecord r = compute_gw_record(rec, fake_estimate(std::exp(8.0), 1.0), 7);
  CHECK(r.Y == doctest::Approx(1.0));          // log mean / m^n = 8/8
  CHECK(r.X == doctest::Approx(8.0 / 15.0));   // log mean / |G_3|
  CHECK(r.Y * std::pow(2.0, 3) == doctest::Approx(r.X * 15.0).epsilon(1e-12));
}

TEST_CASE("estimate_theta") {
  SUBCASE("all-open box has density one with zero error") {
    std::vector<std::tuple<long, double, double>> samples;
    for (int s = 0; s < 5; ++s) samples.emplace_back(4, 64.0, 64.0);
    ThetaEstimate est = estimate_theta(samples);
    CHECK(est.theta_hat == 1.0);
    CHECK(est.se == 0.0);
    CHECK(est.n_used == 4);
  }
  SUBCASE("uses the largest n") {
    std::vector<std::tuple<long, double, double>> samples{
        {2, 8.0, 16.0}, {2, 8.0, 16.0}, {4, 32.0, 64.0}, {4, 48.0, 64.0}};
    ThetaEstimate est = estimate_theta(samples);
    CHECK(est.n_used == 4);
    CHECK(est.theta_hat == doctest::Approx(0.625));
    CHECK(est.per_n.size() == 2);
  }
  SUBCASE("needs two samples at the top scale") {
    std::vector<std::tuple<long, double, double>> samples{{2, 8.0, 16.0}, {4, 32.0, 64.0}};
    CHECK_THROWS_AS(estimate_theta(samples), InsufficientSamplesError);
    CHECK_THROWS_AS(estimate_theta({}), InsufficientSamplesError);
  }
}

TEST_CASE("gamma_trend") {
  auto mk = [](long n, double v, double c = 0.0) {
    TrendPoint p;
    p.n = n;
    p.value = v;
    p.censored_frac = c;
    return p;
  };
  SUBCASE("constant series has zero increments and gamma_tilde = c") {
    std::vector<TrendPoint> pts{mk(2, 0.4), mk(4, 0.4), mk(8, 0.4)};
    RateEstimate r = gamma_trend(pts, RateFamily::Lattice, 1.0);
    CHECK(r.gamma_tilde == doctest::Approx(0.4));
    for (double inc : r.relative_increments) CHECK(inc == 0.0);
    CHECK(r.gamma == doctest::Approx(0.4));  // theta = 1 lattice rule
    CHECK(r.asymptote_not_reached);
  }
  SUBCASE("lattice rule is the arithmetic identity gamma = gamma_tilde/theta") {
    std::vector<TrendPoint> pts{mk(2, 0.5), mk(4, 0.45), mk(8, 0.44)};
    RateEstimate r = gamma_trend(pts, RateFamily::Lattice, 0.8);
    CHECK(r.gamma == doctest::Approx(r.gamma_tilde / 0.8));
    CHECK(*r.theta == 0.8);
  }
  SUBCASE("gw rule is gamma = (m-1)/m * gamma_tilde") {
    std::vector<TrendPoint> pts{mk(2, 0.5), mk(4, 0.45), mk(8, 0.44)};
    RateEstimate r = gamma_trend(pts, RateFamily::Gw, 1.25);
    CHECK(r.gamma == doctest::Approx(0.44 * 0.25 / 1.25));
  }
  SUBCASE("too few scales") {
    std::vector<TrendPoint> pts{mk(2, 0.5), mk(4, 0.45)};
    CHECK_THROWS_AS(gamma_trend(pts, RateFamily::Lattice, 1.0), TooFewScalesError);
  }
  SUBCASE("heavy censoring is rejected") {
    std::vector<TrendPoint> pts{mk(2, 0.5), mk(4, 0.45, 0.7), mk(8, 0.44)};
    CHECK_THROWS_AS(gamma_trend(pts, RateFamily::Lattice, 1.0), CensoringTooHighError);
  }
  SUBCASE("path increments via the exact oracle decrease monotonically") {
    std::vector<TrendPoint> pts;
    for (long n : {4L, 6L, 8L, 10L, 12L}) {
      double e = exact_expected_extinction(path_graph(static_cast<std::size_t>(n)), 2.0);
      TrendPoint p;
      p.n = n;
      p.value = std::log(e) / static_cast<double>(n);
      pts.push_back(p);
    }
    RateEstimate r = gamma_trend(pts, RateFamily::Lattice, 1.0);
    REQUIRE(r.relative_increments.size() == 4);
    for (std::size_t i = 1; i < r.relative_increments.size(); ++i) {
      CHECK(r.relative_increments[i] < r.relative_increments[i - 1]);
    }
  }
}

TEST_CASE("lambda-zero harmonic identity for X") {
  for (auto g : {path_graph(2), path_graph(4), cycle_graph(4), star_graph(4)}) {
    double exact = exact_expected_extinction(g, 0.0);
    MeanEstimate est = fake_estimate(exact, 1e-6);
    EstimateRecord r = compute_record(g, 1, static_cast<double>(g.num_vertices()), est, 0);
    CHECK(r.X == doctest::Approx(std::log(harmonic(g.num_vertices())) /
                                 static_cast<double>(g.num_vertices())));
  }
}

TEST_CASE("expectation upper bound holds exactly on solver instances") {
  for (auto g : {path_graph(2), path_graph(3), path_graph(4), path_graph(5),
                 cycle_graph(4), star_graph(4)}) {
    for (double lambda : {0.0, 0.5, 1.0, 2.0}) {
      double loge = std::log(exact_expected_extinction(g, lambda));
      CHECK(loge <= static_cast<double>(g.num_vertices()) +
                        2.0 * lambda * static_cast<double>(g.num_edges()) + 1e-12);
    }
  }
}

TEST_CASE("supermult_check") {
  SUBCASE("the whole graph as the single subgraph has zero defect") {
    Graph g = path_graph(4);
    std::vector<Vertex> all{0, 1, 2, 3};
    SupermultReport rep = supermult_check(g, {all}, 2.0, 200, 1);
    CHECK(rep.used_exact);
    CHECK(rep.defect == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(rep.max_dominance_exact);
  }
  SUBCASE("P4 against two disjoint edges, exact values") {
    Graph g = path_graph(4);
    SupermultReport rep = supermult_check(g, {{0, 1}, {2, 3}}, 2.0, 500, 2);
    double t2 = exact_expected_extinction(path_graph(2), 2.0);
    double t4 = exact_expected_extinction(g, 2.0);
    CHECK(rep.defect == doctest::Approx(std::log(t4) - 2.0 * std::log(t2)).epsilon(1e-9));
    CHECK(rep.correction == doctest::Approx(3.0 * std::log(2.0 * 64.0)));
    CHECK(rep.max_dominance_exact);
  }
  SUBCASE("singleton subgraphs leave the defect at log E[tau_G] >= 0") {
    Graph g = path_graph(3);
    SupermultReport rep = supermult_check(g, {{0}, {1}, {2}}, 1.0, 200, 3);
    for (double ls : rep.log_tau_sub) CHECK(ls == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(rep.defect >= 0.0);
  }
  SUBCASE("validation errors") {
    Graph g = path_graph(4);
    CHECK_THROWS_AS(supermult_check(g, {{0, 1}, {1, 2}}, 1.0, 10, 0), NotDisjointError);
    CHECK_THROWS_AS(supermult_check(g, {{0, 9}}, 1.0, 10, 0), NotSubgraphError);
    CHECK_THROWS_AS(supermult_check(g, {{0, 2}}, 1.0, 10, 0), NotConnectedError);
  }
}

TEST_CASE("tail_bound_check") {
  SUBCASE("single vertex near t = 0.1") {
    // P(tau <= 0.1) = 1 - e^-0.1 ~ 0.0952 <= 0.1
    TailBoundReport rep = tail_bound_check(path_graph(1), 1.0, 20000, {0.1}, 5);
    CHECK(rep.violations.empty());
    CHECK(rep.ecdf[0] == doctest::Approx(1.0 - std::exp(-0.1)).epsilon(0.05));
  }
  SUBCASE("bound is >= 1 when t is past the mean, trivially satisfied") {
    double e = exact_expected_extinction(path_graph(3), 2.0);
    TailBoundReport rep = tail_bound_check(path_graph(3), 2.0, 2000, {10.0 * e}, 6);
    CHECK(rep.bound[0] >= 1.0);
    CHECK(rep.violations.empty());
  }
  SUBCASE("P3 at lambda 2 over the standard grid") {
    double e = exact_expected_extinction(path_graph(3), 2.0);
    std::vector<double> grid;
    for (int k = 0; k < 10; ++k) grid.push_back(e * (0.1 + 1.9 * k / 9.0));
    TailBoundReport rep = tail_bound_check(path_graph(3), 2.0, 100000, grid, 7);
    CHECK(rep.violations.empty());
  }
  SUBCASE("rejects graphs beyond the solver range") {
    CHECK_THROWS_AS(tail_bound_check(path_graph(21), 1.0, 10, {1.0}, 0),
                    TooManyVerticesError);
  }
}

TEST_CASE("results csv schema") {
  Graph g = gen_bond_percolation({2, 2, BoxKind::Lattice}, 1.0, 3);
  EstimateRecord r = compute_record(g, 2, 16.0, fake_estimate(2.0, 0.1), 3);
  std::string header = results_csv_header();
  CHECK(header == "model,params,n,graph_size,box_size,mean_tau,se,log_mean,X,X_box,censored_frac,seed");
  std::string row = results_csv_row(r);
  // one field per header column
  CHECK(std::count(row.begin(), row.end(), ',') >=
        std::count(header.begin(), header.end(), ','));
}
