#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metastab/config.hpp"
#include "metastab/graph.hpp"

namespace metastab {

// Offspring distribution of a Galton-Watson tree.
struct OffspringLaw {
  std::vector<std::pair<int, double>> pmf;  // (k, nu(k)), k ascending

  double mean() const;
  double second_moment() const;
  double prob_zero() const;
  static OffspringLaw parse(const std::string& text);  // "k:prob,..."
  std::string to_string() const;
};

enum class GwConditioning { None, SurvivalToN };

struct GwRecord {
  OffspringLaw nu;
  double m = 0.0;       // mean offspring
  double sigma2 = 0.0;  // second moment of nu
  std::vector<long> generation_sizes;  // Z_0..Z_n
  double v_n = 0.0;                    // 1 + m + ... + m^n
  Graph tree;                          // rooted at vertex 0, ids in BFS order
  GwConditioning conditioning = GwConditioning::None;

  long z(int k) const { return generation_sizes.at(static_cast<std::size_t>(k)); }
  double w_proxy() const {
    return static_cast<double>(tree.num_vertices()) / v_n;
  }
};

// All vertices of the box are kept; each in-box nearest-neighbor edge is open
// independently with probability p.
Graph gen_bond_percolation(const BoxSpec& box, double p, std::uint64_t seed);

// Vertex set = open sites; edges between adjacent open sites. d=2 is allowed
// but flagged in provenance.note (outside the regime the theory covers).
Graph gen_site_percolation(const BoxSpec& box, double p, std::uint64_t seed);

// Poisson(volume) points, uniform in the continuum box; edge iff Euclidean
// distance < R. Neighbor search by spatial hashing with cell width R.
Graph gen_rgg(const BoxSpec& box, double R, std::uint64_t seed);

Graph gen_rgg_brute_force(const BoxSpec& box, double R, std::uint64_t seed);  // test oracle

GwRecord gen_gw_tree(const OffspringLaw& nu, int generations, GwConditioning cond,
                     std::uint64_t seed);

// Per-edge/site open-or-closed state drawn in a fixed scan order, so a shared
// seed couples samples across p. Lattice helpers shared by generators.
struct LatticeBox {
  explicit LatticeBox(const BoxSpec& box);
  const BoxSpec& spec() const { return box_; }
  std::size_t size() const { return n_sites_; }
  std::size_t index(std::span<const long> c) const;  // lex rank
  std::vector<long> site(std::size_t idx) const;
  bool contains(std::span<const long> c) const;
  // +e_k neighbor of flat index, or npos if outside the box
  std::size_t neighbor_up(std::size_t idx, int axis) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  BoxSpec box_;
  std::size_t n_sites_;
  std::vector<std::size_t> stride_;
};

// number of nearest-neighbor edges inside the lattice box (exact)
std::size_t lattice_box_edge_count(const BoxSpec& box);

// induced lattice graph on the open sites of a mask over box sites (lex order)
Graph lattice_graph_from_mask(const LatticeBox& box, const std::vector<std::uint8_t>& open);

// Dispatch on a config model block. For GW models, n is the generation count.
struct GeneratedSample {
  Graph graph;
  std::optional<GwRecord> gw;
};
GeneratedSample generate_sample(const ModelSpec& model, long n, std::uint64_t seed);
Graph generate_model(const ModelSpec& model, long n, std::uint64_t seed);

}  // namespace metastab
