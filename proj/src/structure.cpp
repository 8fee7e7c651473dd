#include "metastab/structure.hpp"

#include <algorithm>
#include <cmath>

#include "metastab/errors.hpp"
#include "metastab/generators.hpp"
#include "metastab/parallel.hpp"
#include "metastab/rng.hpp"
#include "metastab/union_find.hpp"
#include <json.hpp>

namespace metastab {

namespace {

bool vertex_in_box(const Graph& g, Vertex v, long r, BoxKind kind) {
  for (double c : g.coord(v)) {
    if (kind == BoxKind::Lattice) {
      if (c < static_cast<double>(-r) || c > static_cast<double>(r - 1)) return false;
    } else {
      if (c < static_cast<double>(-r) || c > static_cast<double>(r)) return false;
    }
  }
  return true;
}

BoxKind graph_box_kind(const Graph& g) {
  return g.embedding == EmbeddingKind::Continuum ? BoxKind::Continuum : BoxKind::Lattice;
}

}  // namespace

CensusReport component_census(const Graph& g, long n, double epsilon) {
  if (epsilon <= 0.0 || epsilon >= 1.0) throw BadEpsilonError();
  if (g.embedding == EmbeddingKind::None) throw NoEmbeddingError();

  CensusReport rep;
  rep.n = n;
  rep.epsilon = epsilon;
  rep.d = g.dim;
  rep.giant_threshold = std::pow(static_cast<double>(n), g.dim - epsilon);
  rep.small_threshold = std::pow(static_cast<double>(n), epsilon);
  rep.shell_thickness = static_cast<long>(std::ceil(rep.small_threshold));
  const long inner = n - rep.shell_thickness;
  const BoxKind kind = graph_box_kind(g);

  auto comps = connected_components(g);
  for (const auto& comp : comps) {
    CensusRow row;
    row.size = comp.size();
    row.diameter = metric_diameter(g, comp.vertices);
    row.in_boundary_shell = true;
    if (inner > 0) {
      for (Vertex v : comp.vertices) {
        if (vertex_in_box(g, v, inner, kind)) {
          row.in_boundary_shell = false;
          break;
        }
      }
    } else {
      row.in_boundary_shell = false;  // degenerate shell covering everything
    }
    rep.rows.push_back(row);
  }
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const CensusRow& a, const CensusRow& b) { return a.size > b.size; });

  std::size_t giants = 0;
  for (const auto& row : rep.rows) {
    if (static_cast<double>(row.size) > rep.giant_threshold) ++giants;
  }
  rep.verdict_unique_giant = giants == 1;
  rep.verdict_others = true;
  for (const auto& row : rep.rows) {
    if (static_cast<double>(row.size) > rep.giant_threshold) continue;
    if (!(static_cast<double>(row.size) < rep.small_threshold || row.in_boundary_shell)) {
      rep.verdict_others = false;
    }
  }
  return rep;
}

int annulus_crossing_components(const Graph& g, const AnnulusSpec& spec) {
  if (g.embedding == EmbeddingKind::None) throw NoEmbeddingError();
  if (spec.ell < 4) throw BadParameterError("annulus scale must be >= 4");
  if (static_cast<int>(spec.center.size()) != g.dim)
    throw BadDimensionError("annulus center dimension mismatch");
  const long inner_r = spec.ell / 4;
  const BoxKind kind = graph_box_kind(g);

  auto in_shifted_box = [&](Vertex v, long r) {
    auto c = g.coord(v);
    for (int k = 0; k < g.dim; ++k) {
      double x = c[k] - static_cast<double>(spec.center[static_cast<std::size_t>(k)]);
      if (kind == BoxKind::Lattice) {
        if (x < static_cast<double>(-r) || x > static_cast<double>(r - 1)) return false;
      } else {
        if (x < static_cast<double>(-r) || x > static_cast<double>(r)) return false;
      }
    }
    return true;
  };

  int crossing = 0;
  for (const auto& comp : connected_components(g)) {
    bool hits_inner = false, hits_outer = false;
    for (Vertex v : comp.vertices) {
      if (!hits_inner && in_shifted_box(v, inner_r)) hits_inner = true;
      if (!hits_outer && !in_shifted_box(v, spec.ell)) hits_outer = true;
      if (hits_inner && hits_outer) break;
    }
    if (hits_inner && hits_outer) ++crossing;
  }
  return crossing;
}

bool uniqueness_event(const ModelSpec& model, long n, std::uint64_t seed) {
  if (!model.is_lattice())
    throw NoEmbeddingError("uniqueness_event needs a lattice model");
  Graph g2 = generate_model(model, 2 * n, seed);
  BoxSpec inner{n, model.d, BoxKind::Lattice};
  Graph gn = box_restrict(g2, inner);

  // big components of G cap B_n, tracked by a representative vertex of g2
  auto comps_n = connected_components(gn);
  const double threshold = static_cast<double>(n) / 10.0;

  // map gn vertices back to g2 ids: box_restrict relabels in increasing order
  std::vector<Vertex> back;
  back.reserve(gn.num_vertices());
  for (Vertex v = 0; v < g2.num_vertices(); ++v) {
    if (vertex_in_box(g2, v, n, BoxKind::Lattice)) back.push_back(v);
  }

  std::vector<Vertex> reps;
  for (const auto& comp : comps_n) {
    if (metric_diameter(gn, comp.vertices) > threshold) {
      reps.push_back(back[comp.vertices.front()]);
    }
  }
  if (reps.size() <= 1) return true;

  UnionFind uf(g2.num_vertices());
  for (Vertex v = 0; v < g2.num_vertices(); ++v) {
    for (Vertex w : g2.adj[v]) {
      if (w > v) uf.unite(v, w);
    }
  }
  Vertex root = uf.find(reps.front());
  for (Vertex r : reps) {
    if (uf.find(r) != root) return false;
  }
  return true;
}

std::vector<DensityPoint> density_series(const ModelSpec& model,
                                         const std::vector<long>& n_list,
                                         std::size_t seeds_per_n,
                                         std::uint64_t master_seed, int workers) {
  if (seeds_per_n < 2) throw InsufficientSamplesError("density_series needs >= 2 seeds per n");
  std::vector<DensityPoint> out(n_list.size());
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const long n = n_list[ni];
    std::vector<double> ratios(seeds_per_n);
    parallel_for(seeds_per_n, workers, [&](std::size_t s) {
      std::uint64_t seed = derive_seed(master_seed, ni * 1000003 + s, StreamRole::GraphGen);
      Graph g = generate_model(model, n, seed);
      double bsize = model.kind == ModelKind::Rgg
                         ? BoxSpec{n, model.d, BoxKind::Continuum}.volume()
                         : static_cast<double>(BoxSpec{n, model.d, BoxKind::Lattice}.site_count());
      double gsize = 0.0;
      if (!g.empty()) gsize = static_cast<double>(maximal_component(g).size());
      ratios[s] = gsize / bsize;
    });
    DensityPoint pt;
    pt.n = n;
    pt.count = seeds_per_n;
    for (double r : ratios) pt.mean += r;
    pt.mean /= static_cast<double>(seeds_per_n);
    for (double r : ratios) pt.variance += (r - pt.mean) * (r - pt.mean);
    pt.variance /= static_cast<double>(seeds_per_n - 1);
    out[ni] = pt;
  }
  return out;
}

MstResult mst_degree_check(const Graph& g) {
  if (g.embedding == EmbeddingKind::None) throw NoEmbeddingError();
  if (g.empty()) throw EmptyGraphError();
  if (!is_connected(g)) throw NotConnectedError();

  struct WeightedEdge {
    double len2;
    Vertex u, v;
  };
  std::vector<WeightedEdge> edges;
  edges.reserve(g.num_edges());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Vertex w : g.adj[v]) {
      if (w > v) {
        double s = 0.0;
        auto a = g.coord(v), b = g.coord(w);
        for (int k = 0; k < g.dim; ++k) {
          double t = a[k] - b[k];
          s += t * t;
        }
        edges.push_back({s, v, w});
      }
    }
  }
  // ties (coincident lengths) broken by endpoint ids for determinism
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.len2 != b.len2) return a.len2 < b.len2;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  MstResult res;
  UnionFind uf(g.num_vertices());
  std::vector<int> degree(g.num_vertices(), 0);
  for (const auto& e : edges) {
    if (uf.unite(e.u, e.v)) {
      res.edges.emplace_back(e.u, e.v);
      res.total_length += std::sqrt(e.len2);
      ++degree[e.u];
      ++degree[e.v];
      if (res.edges.size() + 1 == g.num_vertices()) break;
    }
  }
  res.max_degree = *std::max_element(degree.begin(), degree.end());
  return res;
}

std::string census_csv_header() {
  return "seed,n,component_rank,size,diameter,in_boundary_shell";
}

std::string census_csv_rows(const CensusReport& rep, std::uint64_t seed) {
  std::string out;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    out += std::to_string(seed) + "," + std::to_string(rep.n) + "," +
           std::to_string(i) + "," + std::to_string(row.size) + "," +
           format_double(row.diameter) + "," + (row.in_boundary_shell ? "1" : "0") + "\n";
  }
  return out;
}

std::string census_verdict_json(
    const std::vector<std::pair<std::uint64_t, CensusReport>>& reports) {
  nlohmann::json j;
  j["reports"] = nlohmann::json::array();
  std::size_t both = 0;
  for (const auto& [seed, rep] : reports) {
    nlohmann::json r;
    r["seed"] = seed;
    r["n"] = rep.n;
    r["epsilon"] = rep.epsilon;
    r["components"] = rep.rows.size();
    r["verdict_unique_giant"] = rep.verdict_unique_giant;
    r["verdict_others"] = rep.verdict_others;
    if (rep.verdict_unique_giant && rep.verdict_others) ++both;
    j["reports"].push_back(r);
  }
  j["seeds"] = reports.size();
  j["both_verdicts_frequency"] =
      reports.empty() ? 0.0 : static_cast<double>(both) / static_cast<double>(reports.size());
  return j.dump(2);
}

}  // namespace metastab
