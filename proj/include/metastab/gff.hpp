#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "metastab/graph.hpp"

namespace metastab {

struct GffSample {
  double h = 0.0;
  std::vector<double> phi;         // field on B_n sites, lex order
  std::vector<double> green_diag;  // g(x,x) per site
  Graph graph;                     // induced subgraph on {phi >= h}
};

// Samples the discrete Gaussian free field on B_n with covariance equal to
// the Green function of simple random walk killed on exiting the padded box
// B_{pad_factor*n}. The truncation bias decays with pad_factor; the Green
// solve and Cholesky factor are done once at construction and shared by all
// samples.
class GffSampler {
 public:
  GffSampler(const BoxSpec& box, int pad_factor);
  ~GffSampler();
  GffSampler(GffSampler&&) noexcept;
  GffSampler& operator=(GffSampler&&) noexcept;

  GffSample sample(double h, std::uint64_t seed) const;

  std::size_t n_sites() const;
  double covariance(std::size_t i, std::size_t j) const;  // sites in lex order
  double green_at_origin() const;

  // independent single-source solve on the padded box (Gauss-Seidel), used as
  // the oracle against the factorization path
  static double green_origin_oracle(int d, long padded_n, double tol = 1e-12);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Graph gen_gff_excursion(const BoxSpec& box, double h, int pad_factor, std::uint64_t seed);

}  // namespace metastab
