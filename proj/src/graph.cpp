#include "metastab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "metastab/union_find.hpp"

namespace metastab {

std::size_t BoxSpec::site_count() const {
  std::size_t r = 1;
  for (int k = 0; k < d; ++k) {
    r *= static_cast<std::size_t>(2 * n);
  }
  return r;
}

double BoxSpec::volume() const { return std::pow(2.0 * static_cast<double>(n), d); }

bool BoxSpec::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d) return false;
  for (int k = 0; k < d; ++k) {
    if (kind == BoxKind::Lattice) {
      if (x[k] < static_cast<double>(-n) || x[k] > static_cast<double>(n - 1)) return false;
    } else {
      if (x[k] < static_cast<double>(-n) || x[k] > static_cast<double>(n)) return false;
    }
  }
  return true;
}

std::size_t Graph::max_degree() const {
  std::size_t m = 0;
  for (const auto& nb : adj) m = std::max(m, nb.size());
  return m;
}

Graph make_graph(std::size_t n_vertices,
                 std::span<const std::pair<Vertex, Vertex>> edges) {
  Graph g;
  g.adj.assign(n_vertices, {});
  for (auto [u, v] : edges) {
    if (u >= n_vertices) throw UnknownVertexError(u);
    if (v >= n_vertices) throw UnknownVertexError(v);
    if (u == v) throw BadParameterError("loops are not allowed");
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& nb : g.adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  std::size_t deg_sum = 0;
  for (const auto& nb : g.adj) deg_sum += nb.size();
  g.n_edges = deg_sum / 2;
  return g;
}

std::vector<Component> connected_components(const Graph& g) {
  const std::size_t nv = g.num_vertices();
  std::vector<Component> out;
  if (nv == 0) return out;
  UnionFind uf(nv);
  for (Vertex v = 0; v < nv; ++v) {
    for (Vertex w : g.adj[v]) {
      if (w > v) uf.unite(v, w);
    }
  }
  // group by root; components ordered by their minimum vertex id
  std::vector<std::int64_t> slot(nv, -1);
  for (Vertex v = 0; v < nv; ++v) {
    Vertex root = uf.find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::int64_t>(out.size());
      out.push_back(Component{&g, {}});
    }
    out[static_cast<std::size_t>(slot[root])].vertices.push_back(v);
  }
  return out;
}

Component maximal_component(const Graph& g) {
  if (g.empty()) throw EmptyGraphError();
  auto comps = connected_components(g);
  std::size_t best = 0;
  for (std::size_t i = 1; i < comps.size(); ++i) {
    // vertices are ascending, so front() is the minimum id
    if (comps[i].size() > comps[best].size()) best = i;
    // equal sizes: components are already ordered by minimum id, keep first
  }
  return comps[best];
}

bool is_connected(const Graph& g) {
  if (g.empty()) return true;
  UnionFind uf(g.num_vertices());
  std::size_t merges = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Vertex w : g.adj[v]) {
      if (w > v && uf.unite(v, w)) ++merges;
    }
  }
  return merges + 1 == g.num_vertices();
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> vs) {
  const std::size_t nv = g.num_vertices();
  std::vector<Vertex> keep(vs.begin(), vs.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (Vertex v : keep) {
    if (v >= nv) throw UnknownVertexError(v);
  }
  std::vector<std::int64_t> newid(nv, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) newid[keep[i]] = static_cast<std::int64_t>(i);

  Graph out;
  out.adj.assign(keep.size(), {});
  std::size_t deg_sum = 0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (Vertex w : g.adj[keep[i]]) {
      if (newid[w] >= 0) out.adj[i].push_back(static_cast<Vertex>(newid[w]));
    }
    deg_sum += out.adj[i].size();
  }
  out.n_edges = deg_sum / 2;
  out.embedding = g.embedding;
  out.dim = g.dim;
  if (g.embedding != EmbeddingKind::None) {
    out.coords.reserve(keep.size() * static_cast<std::size_t>(g.dim));
    for (Vertex v : keep) {
      auto c = g.coord(v);
      out.coords.insert(out.coords.end(), c.begin(), c.end());
    }
  }
  out.provenance = g.provenance;
  return out;
}

Graph box_restrict(const Graph& g, const BoxSpec& box) {
  if (g.embedding == EmbeddingKind::None) throw NoEmbeddingError();
  if (g.dim != box.d)
    throw BadDimensionError("graph dimension " + std::to_string(g.dim) +
                            " does not match box dimension " + std::to_string(box.d));
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (box.contains(g.coord(v))) keep.push_back(v);
  }
  return induced_subgraph(g, keep);
}

double metric_diameter(const Graph& g, std::span<const Vertex> vs) {
  if (g.embedding == EmbeddingKind::None) throw NoEmbeddingError();
  if (vs.empty()) return 0.0;
  double diam = 0.0;
  for (int k = 0; k < g.dim; ++k) {
    double lo = g.coord(vs[0])[k], hi = lo;
    for (Vertex v : vs) {
      double x = g.coord(v)[k];
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    diam = std::max(diam, hi - lo);
  }
  return diam;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos &&
      s.find_first_of("ni") == std::string::npos) {  // skip nan/inf
    s += ".0";
  }
  return s;
}

std::string serialize_graph(const Graph& g) {
  std::string out;
  out += "d " + std::to_string(g.embedding == EmbeddingKind::None ? 0 : g.dim);
  out += " n " + std::to_string(g.provenance.scale);
  out += " model " + (g.provenance.model.empty() ? std::string("manual") : g.provenance.model);
  out += " seed " + std::to_string(g.provenance.seed);
  out += "\n";
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    out += "v " + std::to_string(v);
    if (g.embedding == EmbeddingKind::Lattice) {
      for (double c : g.coord(v)) out += " " + std::to_string(static_cast<long long>(c));
    } else if (g.embedding == EmbeddingKind::Continuum) {
      for (double c : g.coord(v)) out += " " + format_double(c);
    }
    out += "\n";
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Vertex w : g.adj[v]) {
      if (w > v) out += "e " + std::to_string(v) + " " + std::to_string(w) + "\n";
    }
  }
  return out;
}

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw BadParameterError("empty graph file");
  int dim = 0;
  long scale = 0;
  std::string model;
  std::uint64_t seed = 0;
  {
    std::istringstream h(line);
    std::string kd, kn, km, ks;
    if (!(h >> kd >> dim >> kn >> scale >> km >> model >> ks >> seed) ||
        kd != "d" || kn != "n" || km != "model" || ks != "seed") {
      throw BadParameterError("malformed graph header: " + line);
    }
  }
  std::vector<std::vector<std::string>> vert_tokens;
  std::vector<std::pair<Vertex, Vertex>> edges;
  bool continuum = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream t(line);
    std::string tag;
    t >> tag;
    if (tag == "v") {
      std::size_t id;
      t >> id;
      if (id != vert_tokens.size())
        throw BadParameterError("vertex ids must be dense and ordered");
      std::vector<std::string> cs;
      std::string tok;
      while (t >> tok) {
        if (tok.find_first_of(".eE") != std::string::npos) continuum = true;
        cs.push_back(tok);
      }
      if (dim > 0 && static_cast<int>(cs.size()) != dim)
        throw BadParameterError("vertex " + std::to_string(id) + " has wrong coordinate count");
      vert_tokens.push_back(std::move(cs));
    } else if (tag == "e") {
      Vertex a, b;
      if (!(t >> a >> b)) throw BadParameterError("malformed edge line: " + line);
      edges.emplace_back(a, b);
    } else {
      throw BadParameterError("unexpected line: " + line);
    }
  }
  Graph g = make_graph(vert_tokens.size(), edges);
  if (dim > 0) {
    g.embedding = continuum ? EmbeddingKind::Continuum : EmbeddingKind::Lattice;
    g.dim = dim;
    g.coords.reserve(vert_tokens.size() * static_cast<std::size_t>(dim));
    for (const auto& cs : vert_tokens) {
      for (const auto& s : cs) g.coords.push_back(std::stod(s));
    }
  }
  g.provenance.model = model;
  g.provenance.seed = seed;
  g.provenance.scale = scale;
  return g;
}

namespace {

Graph named(Graph g, const std::string& model) {
  g.provenance.model = model;
  return g;
}

}  // namespace

Graph path_graph(std::size_t k) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i + 1 < k; ++i)
    edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
  return named(make_graph(k, edges), "path" + std::to_string(k));
}

Graph cycle_graph(std::size_t k) {
  if (k < 3) throw BadParameterError("cycle needs >= 3 vertices");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i + 1 < k; ++i)
    edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
  edges.emplace_back(static_cast<Vertex>(k - 1), 0);
  return named(make_graph(k, edges), "cycle" + std::to_string(k));
}

Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, static_cast<Vertex>(i));
  return named(make_graph(leaves + 1, edges), "star" + std::to_string(leaves));
}

Graph complete_graph(std::size_t k) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j)
      edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
  }
  return named(make_graph(k, edges), "complete" + std::to_string(k));
}

}  // namespace metastab
