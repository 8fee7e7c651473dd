#pragma once

#include <cstdint>
#include <vector>

#include "metastab/graph.hpp"

namespace metastab {

struct InterlacementSample {
  double u = 0.0;
  double cap_estimate = 0.0;
  std::size_t n_trajectories = 0;
  std::vector<std::uint8_t> occupied;  // mask over B_n sites, lex order
  Graph graph;                         // induced on occupied (or vacant) set
};

// Samples the trace of random interlacements inside B_n. The equilibrium
// measure of B_n is estimated once by Monte Carlo escape probabilities of
// walks killed at the boundary of B_M; trajectories start from it and run
// until leaving B_M. Trajectory arrivals form a Poisson process in u, so
// samples with a shared seed are coupled: occupied(u1) is a subset of
// occupied(u2) whenever u1 <= u2.
class InterlacementSampler {
 public:
  InterlacementSampler(const BoxSpec& box, long kill_radius, std::uint64_t seed,
                       int walks_per_site = 1024);

  InterlacementSample sample(double u, std::uint64_t seed, bool occupied) const;

  double cap_estimate() const { return cap_; }
  long kill_radius() const { return kill_radius_; }

 private:
  BoxSpec box_;
  long kill_radius_;
  std::vector<std::vector<long>> boundary_;  // inner boundary sites of B_n
  std::vector<double> eq_cumulative_;        // cumulative normalized measure
  double cap_ = 0.0;
};

Graph gen_interlacements(const BoxSpec& box, double u, long kill_radius,
                         std::uint64_t seed, bool occupied);

}  // namespace metastab
