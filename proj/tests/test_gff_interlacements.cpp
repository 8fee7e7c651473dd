#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "metastab/errors.hpp"
#include "metastab/generators.hpp"
#include "metastab/gff.hpp"
#include "metastab/interlacements.hpp"
#include "metastab/rng.hpp"

using namespace metastab;

TEST_CASE("gff guards") {
  CHECK_THROWS_AS(GffSampler({3, 2, BoxKind::Lattice}, 4), BadDimensionError);
  CHECK_THROWS_AS(GffSampler({3, 3, BoxKind::Lattice}, 1), BadParameterError);
  // (2*8*3)^3 sites blow the dense-solve guard
  CHECK_THROWS_AS(GffSampler({3, 3, BoxKind::Lattice}, 8), TooLargeError);
}

TEST_CASE("gff excursion extremes") {
  BoxSpec box{2, 3, BoxKind::Lattice};
  GffSampler sampler(box, 4);
  SUBCASE("level far below the field opens everything") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      GffSample smp = sampler.sample(-1e6, s);
      CHECK(smp.graph.num_vertices() == box.site_count());
      CHECK(smp.graph.num_edges() == lattice_box_edge_count(box));
    }
  }
  SUBCASE("level far above the field opens nothing") {
    GffSample smp = sampler.sample(1e6, 0);
    CHECK(smp.graph.num_vertices() == 0);
  }
}

TEST_CASE("gff covariance against the independent solve") {
  BoxSpec box{3, 3, BoxKind::Lattice};
  GffSampler sampler(box, 4);
  double oracle = GffSampler::green_origin_oracle(3, 12);
  CHECK(sampler.green_at_origin() == doctest::Approx(oracle).epsilon(1e-8));

  // sampled variance of phi_0 within 5% at 2000 samples
  LatticeBox inner(box);
  std::vector<long> origin{0, 0, 0};
  std::size_t o = inner.index(origin);
  const int nsamples = 2000;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < nsamples; ++s) {
    double phi0 = sampler.sample(1e9, derive_seed(1, s, StreamRole::Field)).phi[o];
    sum += phi0;
    sum2 += phi0 * phi0;
  }
  double mean = sum / nsamples;
  double var = (sum2 - nsamples * mean * mean) / (nsamples - 1);
  CHECK(std::fabs(var - oracle) <= 0.05 * oracle);
}

TEST_CASE("gff neighbor covariance within 5% at 2000 samples") {
  BoxSpec box{3, 3, BoxKind::Lattice};
  GffSampler sampler(box, 4);
  LatticeBox inner(box);
  std::size_t a = inner.index(std::vector<long>{0, 0, 0});
  std::size_t b = inner.index(std::vector<long>{0, 0, 1});
  double target = sampler.covariance(a, b);
  const int nsamples = 2000;
  double sa = 0.0, sb = 0.0, sab = 0.0;
  for (int s = 0; s < nsamples; ++s) {
    GffSample smp = sampler.sample(1e9, derive_seed(2, s, StreamRole::Field));
    sa += smp.phi[a];
    sb += smp.phi[b];
    sab += smp.phi[a] * smp.phi[b];
  }
  double cov = (sab - sa * sb / nsamples) / (nsamples - 1);
  CHECK(std::fabs(cov - target) <= 0.05 * std::fabs(target));
}

TEST_CASE("gff truncation bias shrinks with the pad factor") {
  // guard limits the padded box, so the comparison runs at n=1
  BoxSpec box{1, 3, BoxKind::Lattice};
  GffSampler pad4(box, 4);
  GffSampler pad8(box, 8);
  double g4 = pad4.green_at_origin();
  double g8 = pad8.green_at_origin();
  CHECK(g4 < g8);         // killed-walk green function grows with the domain
  CHECK(g8 - g4 < 0.05);  // and the difference is already small
}

TEST_CASE("interlacement guards") {
  CHECK_THROWS_AS(InterlacementSampler({4, 2, BoxKind::Lattice}, 16, 0), BadDimensionError);
  CHECK_THROWS_AS(InterlacementSampler({4, 3, BoxKind::Lattice}, 15, 0),
                  KillRadiusTooSmallError);
}

TEST_CASE("interlacement intensity zero is empty") {
  InterlacementSampler sampler({2, 3, BoxKind::Lattice}, 8, 3, 128);
  InterlacementSample occ = sampler.sample(0.0, 5, true);
  CHECK(occ.n_trajectories == 0);
  CHECK(occ.graph.num_vertices() == 0);
  InterlacementSample vac = sampler.sample(0.0, 5, false);
  BoxSpec box{2, 3, BoxKind::Lattice};
  CHECK(vac.graph.num_vertices() == box.site_count());
  CHECK(vac.graph.num_edges() == lattice_box_edge_count(box));
}

TEST_CASE("interlacement occupied set is monotone in u under coupling") {
  InterlacementSampler sampler({3, 3, BoxKind::Lattice}, 12, 9, 256);
  for (std::uint64_t s = 0; s < 30; ++s) {
    InterlacementSample lo = sampler.sample(0.4, s, true);
    InterlacementSample hi = sampler.sample(1.1, s, true);
    CHECK(lo.n_trajectories <= hi.n_trajectories);
    for (std::size_t i = 0; i < lo.occupied.size(); ++i) {
      if (lo.occupied[i]) REQUIRE(hi.occupied[i]);
    }
  }
}

TEST_CASE("interlacement hits the origin at the capacity rate") {
  BoxSpec box{4, 3, BoxKind::Lattice};
  const long M = 16;
  InterlacementSampler sampler(box, M, 7, 1024);
  double g00 = GffSampler::green_origin_oracle(3, M);
  double target = 1.0 - std::exp(-1.0 / g00);

  LatticeBox lb(box);
  std::size_t o = lb.index(std::vector<long>{0, 0, 0});
  const int nsamples = 2000;
  int hits = 0;
  for (int s = 0; s < nsamples; ++s) {
    if (sampler.sample(1.0, derive_seed(3, s, StreamRole::Trajectory), true).occupied[o]) {
      ++hits;
    }
  }
  double p = static_cast<double>(hits) / nsamples;
  double se = std::sqrt(p * (1.0 - p) / nsamples);
  CHECK(std::fabs(p - target) <= 3.0 * se);
}

TEST_CASE("vacant graph is the complement of the occupied set") {
  InterlacementSampler sampler({2, 3, BoxKind::Lattice}, 8, 17, 128);
  InterlacementSample occ = sampler.sample(0.8, 4, true);
  InterlacementSample vac = sampler.sample(0.8, 4, false);
  BoxSpec box{2, 3, BoxKind::Lattice};
  CHECK(occ.graph.num_vertices() + vac.graph.num_vertices() == box.site_count());
}
