#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metastab/errors.hpp"

namespace metastab {

using Vertex = std::uint32_t;

enum class EmbeddingKind { None, Lattice, Continuum };

enum class BoxKind { Lattice, Continuum };

// B_n: the lattice box {-n,...,n-1}^d or the continuum box [-n,n]^d.
struct BoxSpec {
  long n = 1;
  int d = 2;
  BoxKind kind = BoxKind::Lattice;

  // number of lattice sites (2n)^d
  std::size_t site_count() const;
  // volume (2n)^d, also the mean point count of a unit-intensity process
  double volume() const;
  bool contains(std::span<const double> x) const;
  long side() const { return 2 * n; }
};

struct Provenance {
  std::string model = "manual";
  std::string params;
  std::uint64_t seed = 0;
  long scale = 0;      // the n of the generating box (0 if not applicable)
  std::string note;    // regime warnings, not serialized
};

// Finite undirected graph with dense vertex ids and an optional embedding.
// Adjacency lists are sorted, loop-free and duplicate-free; instances are
// immutable after construction and safe to share across threads.
struct Graph {
  std::vector<std::vector<Vertex>> adj;
  std::size_t n_edges = 0;
  EmbeddingKind embedding = EmbeddingKind::None;
  int dim = 0;
  std::vector<double> coords;  // dim values per vertex when embedded
  Provenance provenance;

  std::size_t num_vertices() const { return adj.size(); }
  std::size_t num_edges() const { return n_edges; }
  bool empty() const { return adj.empty(); }
  std::size_t degree(Vertex v) const { return adj[v].size(); }
  std::span<const Vertex> neighbors(Vertex v) const { return adj[v]; }
  std::span<const double> coord(Vertex v) const {
    return {coords.data() + static_cast<std::size_t>(dim) * v,
            static_cast<std::size_t>(dim)};
  }
  std::size_t max_degree() const;
};

// Validating constructor: sorts and dedups adjacency, rejects loops.
Graph make_graph(std::size_t n_vertices,
                 std::span<const std::pair<Vertex, Vertex>> edges);

struct Component {
  const Graph* parent = nullptr;
  std::vector<Vertex> vertices;  // sorted ascending
  std::size_t size() const { return vertices.size(); }
};

std::vector<Component> connected_components(const Graph& g);

// Largest component; ties broken by smallest minimum vertex id so repeated
// calls agree. Throws EmptyGraphError on an empty graph.
Component maximal_component(const Graph& g);

bool is_connected(const Graph& g);

// Induced subgraph on vs (need not be sorted; duplicates ignored). Vertices
// are relabeled densely in increasing original-id order, embedding restricted.
Graph induced_subgraph(const Graph& g, std::span<const Vertex> vs);

// Induced subgraph on the vertices whose coordinates lie in the box.
Graph box_restrict(const Graph& g, const BoxSpec& box);

// l_inf diameter of the embedded vertex set. Equals the maximum per-axis
// coordinate spread, so it is exact in O(k d) for any embedding.
double metric_diameter(const Graph& g, std::span<const Vertex> vs);

// Line-oriented text serialization:
//   d <dim> n <scale> model <name> seed <u64>
//   v <id> <coords...>
//   e <id> <id>
// Round-trips exactly: parse(serialize(g)) serializes to identical bytes.
std::string serialize_graph(const Graph& g);
Graph parse_graph(const std::string& text);

// %.17g with a guaranteed '.'/exponent so continuum coordinates survive the
// lattice-vs-continuum classification on reparse
std::string format_double(double x);

// small named graphs used by oracles and validation batteries
Graph path_graph(std::size_t k);
Graph cycle_graph(std::size_t k);
Graph star_graph(std::size_t leaves);  // center is vertex 0
Graph complete_graph(std::size_t k);

}  // namespace metastab
