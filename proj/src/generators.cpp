#include "metastab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "metastab/errors.hpp"
#include "metastab/gff.hpp"
#include "metastab/interlacements.hpp"
#include "metastab/rng.hpp"

namespace metastab {

// ---------------------------------------------------------------- lattice box

LatticeBox::LatticeBox(const BoxSpec& box) : box_(box) {
  if (box.kind != BoxKind::Lattice)
    throw BadParameterError("lattice generator needs a lattice box");
  if (box.n < 1) throw BadParameterError("box scale must be >= 1");
  if (box.d < 1) throw BadDimensionError("box dimension must be >= 1");
  const std::size_t side = static_cast<std::size_t>(box.side());
  stride_.assign(static_cast<std::size_t>(box.d), 1);
  n_sites_ = 1;
  for (int k = box.d - 1; k >= 0; --k) {
    stride_[static_cast<std::size_t>(k)] = n_sites_;
    if (n_sites_ > (static_cast<std::size_t>(1) << 40) / side)
      throw TooLargeError("lattice box exceeds the supported site count");
    n_sites_ *= side;
  }
}

std::size_t LatticeBox::index(std::span<const long> c) const {
  std::size_t idx = 0;
  for (int k = 0; k < box_.d; ++k) {
    idx += static_cast<std::size_t>(c[static_cast<std::size_t>(k)] + box_.n) *
           stride_[static_cast<std::size_t>(k)];
  }
  return idx;
}

std::vector<long> LatticeBox::site(std::size_t idx) const {
  std::vector<long> c(static_cast<std::size_t>(box_.d));
  for (int k = 0; k < box_.d; ++k) {
    c[static_cast<std::size_t>(k)] =
        static_cast<long>(idx / stride_[static_cast<std::size_t>(k)]) % box_.side() - box_.n;
  }
  return c;
}

bool LatticeBox::contains(std::span<const long> c) const {
  for (int k = 0; k < box_.d; ++k) {
    long x = c[static_cast<std::size_t>(k)];
    if (x < -box_.n || x > box_.n - 1) return false;
  }
  return true;
}

std::size_t LatticeBox::neighbor_up(std::size_t idx, int axis) const {
  const std::size_t s = stride_[static_cast<std::size_t>(axis)];
  long coord = static_cast<long>(idx / s) % box_.side() - box_.n;
  if (coord + 1 > box_.n - 1) return npos;
  return idx + s;
}

std::size_t lattice_box_edge_count(const BoxSpec& box) {
  // per axis: (side-1) * side^(d-1)
  std::size_t side = static_cast<std::size_t>(box.side());
  std::size_t per_axis = side - 1;
  for (int k = 1; k < box.d; ++k) per_axis *= side;
  return per_axis * static_cast<std::size_t>(box.d);
}

namespace {

void attach_lattice_embedding(Graph& g, const LatticeBox& box,
                              const std::vector<std::size_t>& kept_sites) {
  g.embedding = EmbeddingKind::Lattice;
  g.dim = box.spec().d;
  g.coords.reserve(kept_sites.size() * static_cast<std::size_t>(box.spec().d));
  for (std::size_t idx : kept_sites) {
    for (long c : box.site(idx)) g.coords.push_back(static_cast<double>(c));
  }
}

}  // namespace

// build the induced lattice graph on the open sites of a mask (lex order ids)
Graph lattice_graph_from_mask(const LatticeBox& box, const std::vector<std::uint8_t>& open) {
  const BoxSpec& spec = box.spec();
  std::vector<std::size_t> kept;
  std::vector<std::int64_t> newid(box.size(), -1);
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (open[i]) {
      newid[i] = static_cast<std::int64_t>(kept.size());
      kept.push_back(i);
    }
  }
  Graph g;
  g.adj.assign(kept.size(), {});
  std::size_t deg_sum = 0;
  for (std::size_t vi = 0; vi < kept.size(); ++vi) {
    std::size_t idx = kept[vi];
    for (int k = 0; k < spec.d; ++k) {
      std::size_t up = box.neighbor_up(idx, k);
      if (up != LatticeBox::npos && open[up]) {
        Vertex a = static_cast<Vertex>(vi);
        Vertex b = static_cast<Vertex>(newid[up]);
        g.adj[a].push_back(b);
        g.adj[b].push_back(a);
        deg_sum += 2;
      }
    }
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  g.n_edges = deg_sum / 2;
  attach_lattice_embedding(g, box, kept);
  return g;
}

// ---------------------------------------------------------------- percolation

Graph gen_bond_percolation(const BoxSpec& box, double p, std::uint64_t seed) {
  if (box.d < 2) throw BadDimensionError("bond percolation needs d >= 2");
  if (p < 0.0 || p > 1.0) throw BadParameterError("p must lie in [0,1]");
  LatticeBox lb(box);
  Rng rng(derive_seed(seed, 0, StreamRole::GraphGen));

  Graph g;
  g.adj.assign(lb.size(), {});
  std::size_t deg_sum = 0;
  for (std::size_t idx = 0; idx < lb.size(); ++idx) {
    for (int k = 0; k < box.d; ++k) {
      std::size_t up = lb.neighbor_up(idx, k);
      if (up == LatticeBox::npos) continue;
      if (rng.bernoulli(p)) {
        g.adj[idx].push_back(static_cast<Vertex>(up));
        g.adj[up].push_back(static_cast<Vertex>(idx));
        deg_sum += 2;
      }
    }
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  g.n_edges = deg_sum / 2;
  std::vector<std::size_t> all(lb.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  attach_lattice_embedding(g, lb, all);
  g.provenance = {"bond", "p=" + format_double(p) + ",d=" + std::to_string(box.d),
                  seed, box.n, ""};
  return g;
}

Graph gen_site_percolation(const BoxSpec& box, double p, std::uint64_t seed) {
  if (box.d < 2) throw BadDimensionError("site percolation needs d >= 2");
  if (p < 0.0 || p > 1.0) throw BadParameterError("p must lie in [0,1]");
  LatticeBox lb(box);
  Rng rng(derive_seed(seed, 0, StreamRole::GraphGen));
  std::vector<std::uint8_t> open(lb.size());
  for (std::size_t i = 0; i < lb.size(); ++i) open[i] = rng.bernoulli(p) ? 1 : 0;
  Graph g = lattice_graph_from_mask(lb, open);
  g.provenance = {"site", "p=" + format_double(p) + ",d=" + std::to_string(box.d),
                  seed, box.n, ""};
  if (box.d == 2) g.provenance.note = "site percolation in d=2 is outside the covered regime";
  return g;
}

// ------------------------------------------------------------------------ RGG

namespace {

struct CellKey {
  std::vector<long> c;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (long x : k.c) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
  }
};

std::vector<double> sample_rgg_points(const BoxSpec& box, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0, StreamRole::GraphGen));
  const std::size_t npts = rng.poisson(box.volume());
  std::vector<double> pts(npts * static_cast<std::size_t>(box.d));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = (2.0 * rng.u01() - 1.0) * static_cast<double>(box.n);
  }
  return pts;
}

double sq_dist(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

Graph rgg_from_points(const BoxSpec& box, double R, std::uint64_t seed,
                      const std::vector<double>& pts, bool brute_force) {
  const int d = box.d;
  const std::size_t npts = pts.size() / static_cast<std::size_t>(d);
  Graph g;
  g.adj.assign(npts, {});
  std::size_t deg_sum = 0;
  const double r2 = R * R;

  if (brute_force) {
    for (std::size_t i = 0; i < npts; ++i) {
      for (std::size_t j = i + 1; j < npts; ++j) {
        if (sq_dist(&pts[i * d], &pts[j * d], d) < r2) {
          g.adj[i].push_back(static_cast<Vertex>(j));
          g.adj[j].push_back(static_cast<Vertex>(i));
          deg_sum += 2;
        }
      }
    }
  } else {
    std::unordered_map<CellKey, std::vector<std::uint32_t>, CellKeyHash> cells;
    auto cell_of = [&](std::size_t i) {
      CellKey key;
      key.c.resize(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k)
        key.c[static_cast<std::size_t>(k)] =
            static_cast<long>(std::floor(pts[i * static_cast<std::size_t>(d) +
                                              static_cast<std::size_t>(k)] / R));
      return key;
    };
    for (std::size_t i = 0; i < npts; ++i) cells[cell_of(i)].push_back(static_cast<std::uint32_t>(i));

    std::vector<long> offset(static_cast<std::size_t>(d), -1);
    for (std::size_t i = 0; i < npts; ++i) {
      CellKey base = cell_of(i);
      // scan the 3^d neighborhood
      std::fill(offset.begin(), offset.end(), -1L);
      for (;;) {
        CellKey probe = base;
        for (int k = 0; k < d; ++k) probe.c[static_cast<std::size_t>(k)] += offset[static_cast<std::size_t>(k)];
        auto it = cells.find(probe);
        if (it != cells.end()) {
          for (std::uint32_t j : it->second) {
            if (j <= i) continue;
            if (sq_dist(&pts[i * d], &pts[j * d], d) < r2) {
              g.adj[i].push_back(static_cast<Vertex>(j));
              g.adj[j].push_back(static_cast<Vertex>(i));
              deg_sum += 2;
            }
          }
        }
        int k = 0;
        while (k < d && offset[static_cast<std::size_t>(k)] == 1) {
          offset[static_cast<std::size_t>(k)] = -1;
          ++k;
        }
        if (k == d) break;
        ++offset[static_cast<std::size_t>(k)];
      }
    }
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  g.n_edges = deg_sum / 2;
  g.embedding = EmbeddingKind::Continuum;
  g.dim = d;
  g.coords = pts;
  g.provenance = {"rgg", "R=" + format_double(R) + ",d=" + std::to_string(d),
                  seed, box.n, ""};
  return g;
}

}  // namespace

Graph gen_rgg(const BoxSpec& box, double R, std::uint64_t seed) {
  if (box.d < 2) throw BadDimensionError("rgg needs d >= 2");
  if (R <= 0.0) throw BadParameterError("rgg radius must be > 0");
  if (box.kind != BoxKind::Continuum)
    throw BadParameterError("rgg needs a continuum box");
  return rgg_from_points(box, R, seed, sample_rgg_points(box, seed), false);
}

Graph gen_rgg_brute_force(const BoxSpec& box, double R, std::uint64_t seed) {
  if (box.d < 2) throw BadDimensionError("rgg needs d >= 2");
  if (R <= 0.0) throw BadParameterError("rgg radius must be > 0");
  return rgg_from_points(box, R, seed, sample_rgg_points(box, seed), true);
}

// ------------------------------------------------------------- Galton-Watson

double OffspringLaw::mean() const {
  double m = 0.0;
  for (auto [k, q] : pmf) m += k * q;
  return m;
}

double OffspringLaw::second_moment() const {
  double s = 0.0;
  for (auto [k, q] : pmf) s += static_cast<double>(k) * k * q;
  return s;
}

double OffspringLaw::prob_zero() const {
  for (auto [k, q] : pmf) {
    if (k == 0) return q;
  }
  return 0.0;
}

OffspringLaw OffspringLaw::parse(const std::string& text) {
  OffspringLaw law;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw BadParameterError("offspring law entry '" + item + "' is not k:prob");
    int k = std::stoi(item.substr(0, colon));
    double q = std::stod(item.substr(colon + 1));
    if (k < 0 || q < 0.0) throw BadParameterError("offspring law entries must be nonnegative");
    law.pmf.emplace_back(k, q);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (law.pmf.empty()) throw BadParameterError("empty offspring law");
  std::sort(law.pmf.begin(), law.pmf.end());
  double total = 0.0;
  for (auto [k, q] : law.pmf) total += q;
  if (std::fabs(total - 1.0) > 1e-9)
    throw BadParameterError("offspring law probabilities sum to " + format_double(total));
  return law;
}

std::string OffspringLaw::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(pmf[i].first) + ":" + format_double(pmf[i].second);
  }
  return out;
}

namespace {

int sample_offspring(const OffspringLaw& nu, Rng& rng) {
  double u = rng.u01();
  double acc = 0.0;
  for (auto [k, q] : nu.pmf) {
    acc += q;
    if (u < acc) return k;
  }
  return nu.pmf.back().first;
}

GwRecord grow_gw_tree(const OffspringLaw& nu, int generations, Rng& rng) {
  GwRecord rec;
  rec.nu = nu;
  rec.m = nu.mean();
  rec.sigma2 = nu.second_moment();
  rec.generation_sizes.assign(static_cast<std::size_t>(generations) + 1, 0);
  rec.generation_sizes[0] = 1;

  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<Vertex> frontier{0};
  Vertex next_id = 1;
  for (int gen = 1; gen <= generations; ++gen) {
    std::vector<Vertex> next;
    for (Vertex parent : frontier) {
      int k = sample_offspring(nu, rng);
      for (int c = 0; c < k; ++c) {
        edges.emplace_back(parent, next_id);
        next.push_back(next_id);
        ++next_id;
      }
    }
    rec.generation_sizes[static_cast<std::size_t>(gen)] = static_cast<long>(next.size());
    frontier = std::move(next);
    if (frontier.empty()) break;  // extinct; remaining Z_k stay 0
  }
  rec.tree = make_graph(next_id, edges);
  double vn = 0.0, pw = 1.0;
  for (int k = 0; k <= generations; ++k) {
    vn += pw;
    pw *= rec.m;
  }
  rec.v_n = vn;
  return rec;
}

}  // namespace

GwRecord gen_gw_tree(const OffspringLaw& nu, int generations, GwConditioning cond,
                     std::uint64_t seed) {
  if (generations < 0) throw BadParameterError("generation count must be >= 0");
  if (cond == GwConditioning::SurvivalToN && nu.prob_zero() >= 1.0 - 1e-15)
    throw ImpossibleConditioningError();

  std::string note;
  if (nu.mean() <= 1.0) note = "offspring mean <= 1: subcritical/critical law";

  const std::uint64_t max_attempts = 1000000;
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, attempt, StreamRole::Attempt));
    GwRecord rec = grow_gw_tree(nu, generations, rng);
    rec.conditioning = cond;
    if (cond == GwConditioning::SurvivalToN &&
        rec.generation_sizes[static_cast<std::size_t>(generations)] == 0) {
      continue;
    }
    rec.tree.provenance = {"gw", "nu=" + nu.to_string() +
                               (cond == GwConditioning::SurvivalToN ? ",cond=survival" : ""),
                           seed, generations, note};
    return rec;
  }
  throw RejectionCapExceededError();
}

// ------------------------------------------------------------------ dispatch

GeneratedSample generate_sample(const ModelSpec& model, long n, std::uint64_t seed) {
  switch (model.kind) {
    case ModelKind::Bond:
      return {gen_bond_percolation({n, model.d, BoxKind::Lattice}, model.p, seed), {}};
    case ModelKind::Site:
      return {gen_site_percolation({n, model.d, BoxKind::Lattice}, model.p, seed), {}};
    case ModelKind::Rgg:
      return {gen_rgg({n, model.d, BoxKind::Continuum}, model.R, seed), {}};
    case ModelKind::Gff:
      return {gen_gff_excursion({n, model.d, BoxKind::Lattice}, model.h,
                                model.pad_factor, seed), {}};
    case ModelKind::RiOccupied:
    case ModelKind::RiVacant: {
      long m = model.kill_radius > 0 ? model.kill_radius : 4 * n;
      return {gen_interlacements({n, model.d, BoxKind::Lattice}, model.u, m, seed,
                                 model.kind == ModelKind::RiOccupied), {}};
    }
    case ModelKind::Gw: {
      GwRecord rec = gen_gw_tree(OffspringLaw::parse(model.nu), static_cast<int>(n),
                                 GwConditioning::SurvivalToN, seed);
      Graph tree = rec.tree;
      return {std::move(tree), std::move(rec)};
    }
  }
  throw BadParameterError("unhandled model kind");
}

Graph generate_model(const ModelSpec& model, long n, std::uint64_t seed) {
  return generate_sample(model, n, seed).graph;
}

}  // namespace metastab
