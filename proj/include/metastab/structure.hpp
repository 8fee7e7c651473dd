#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metastab/config.hpp"
#include "metastab/graph.hpp"

namespace metastab {

struct CensusRow {
  std::size_t size = 0;
  double diameter = 0.0;
  bool in_boundary_shell = false;  // contained in B_n \ B_{n - ceil(n^eps)}
};

struct CensusReport {
  long n = 0;
  double epsilon = 0.0;
  int d = 0;
  double giant_threshold = 0.0;  // n^(d-eps)
  double small_threshold = 0.0;  // n^eps
  long shell_thickness = 0;      // ceil(n^eps)
  std::vector<CensusRow> rows;   // size-descending
  bool verdict_unique_giant = false;
  bool verdict_others = false;
};

// Census of the components of a box restriction at scale n, with the two
// verdicts recomputable from the rows.
CensusReport component_census(const Graph& g, long n, double epsilon);

struct AnnulusSpec {
  std::vector<long> center;
  long ell = 4;  // >= 4
};

// Components of g whose vertex set meets both center + B_{floor(ell/4)} and
// the complement of center + B_ell.
int annulus_crossing_components(const Graph& g, const AnnulusSpec& spec);

// Generate on B_{2n}; true iff every pair of components of G cap B_n with
// metric diameter > n/10 lies in one component of G cap B_{2n}.
bool uniqueness_event(const ModelSpec& model, long n, std::uint64_t seed);

struct DensityPoint {
  long n = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::size_t count = 0;
};

// per-n (mean, variance) of |G_n| / |B_n| over seeds
std::vector<DensityPoint> density_series(const ModelSpec& model,
                                         const std::vector<long>& n_list,
                                         std::size_t seeds_per_n,
                                         std::uint64_t master_seed, int workers = 0);

struct MstResult {
  int max_degree = 0;
  double total_length = 0.0;
  std::vector<std::pair<Vertex, Vertex>> edges;
};

// Minimum-total-length spanning tree of a connected embedded graph, edge
// weights = Euclidean lengths, ties broken by endpoint ids. Returns the tree
// and its maximum degree.
MstResult mst_degree_check(const Graph& g);

std::string census_csv_header();
std::string census_csv_rows(const CensusReport& rep, std::uint64_t seed);
std::string census_verdict_json(const std::vector<std::pair<std::uint64_t, CensusReport>>& reports);

}  // namespace metastab
