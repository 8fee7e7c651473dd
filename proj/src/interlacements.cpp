#include "metastab/interlacements.hpp"

#include <algorithm>
#include <cmath>

#include "metastab/errors.hpp"
#include "metastab/generators.hpp"
#include "metastab/rng.hpp"

namespace metastab {

namespace {

bool inside(const std::vector<long>& x, long r) {
  for (long c : x) {
    if (c < -r || c > r - 1) return false;
  }
  return true;
}

void step(std::vector<long>& x, Rng& rng, int d) {
  std::uint64_t m = rng.uniform_below(2 * static_cast<std::uint64_t>(d));
  long dir = (m & 1) ? 1 : -1;
  x[static_cast<std::size_t>(m >> 1)] += dir;
}

}  // namespace

InterlacementSampler::InterlacementSampler(const BoxSpec& box, long kill_radius,
                                           std::uint64_t seed, int walks_per_site)
    : box_(box), kill_radius_(kill_radius) {
  if (box.d < 3) throw BadDimensionError("interlacements need d >= 3");
  if (box.kind != BoxKind::Lattice)
    throw BadParameterError("interlacements need a lattice box");
  if (kill_radius < 4 * box.n) throw KillRadiusTooSmallError(kill_radius, box.n);
  if (walks_per_site < 1) throw BadParameterError("walks_per_site must be >= 1");

  LatticeBox lb(box);
  const int d = box.d;
  // inner boundary: sites of B_n with a neighbor outside B_n
  for (std::size_t i = 0; i < lb.size(); ++i) {
    std::vector<long> c = lb.site(i);
    bool bdry = false;
    for (long x : c) {
      if (x == -box.n || x == box.n - 1) { bdry = true; break; }
    }
    if (bdry) boundary_.push_back(std::move(c));
  }

  // escape probability per boundary site: walk leaves B_M before re-entering B_n
  std::vector<double> escape(boundary_.size(), 0.0);
  for (std::size_t b = 0; b < boundary_.size(); ++b) {
    Rng rng(derive_seed(seed, b, StreamRole::EqMeasure));
    int escapes = 0;
    for (int w = 0; w < walks_per_site; ++w) {
      std::vector<long> x = boundary_[b];
      for (;;) {
        step(x, rng, d);
        if (inside(x, box.n)) break;           // returned: no escape
        if (!inside(x, kill_radius_)) { ++escapes; break; }
      }
    }
    escape[b] = static_cast<double>(escapes) / walks_per_site;
  }
  eq_cumulative_.resize(boundary_.size());
  double acc = 0.0;
  for (std::size_t b = 0; b < boundary_.size(); ++b) {
    acc += escape[b];
    eq_cumulative_[b] = acc;
  }
  cap_ = acc;
  if (cap_ <= 0.0)
    throw NumericalError("capacity estimate is zero; increase walks_per_site");
}

InterlacementSample InterlacementSampler::sample(double u, std::uint64_t seed,
                                                 bool occupied) const {
  if (u < 0.0) throw BadParameterError("interlacement intensity must be >= 0");
  LatticeBox lb(box_);
  const int d = box_.d;

  InterlacementSample out;
  out.u = u;
  out.cap_estimate = cap_;
  out.occupied.assign(lb.size(), 0);

  // Trajectory arrivals are a rate-cap Poisson process on the intensity axis;
  // trajectory i exists for every intensity >= t_i. A shared seed therefore
  // couples samples monotonically across u.
  Rng arrivals(derive_seed(seed, 0, StreamRole::Trajectory));
  double t = arrivals.exponential(cap_);
  std::size_t traj = 0;
  while (t <= u) {
    Rng walk(derive_seed(seed, 1 + traj, StreamRole::Trajectory));
    // start from the normalized equilibrium measure
    double pick = walk.u01() * cap_;
    std::size_t lo = static_cast<std::size_t>(
        std::lower_bound(eq_cumulative_.begin(), eq_cumulative_.end(), pick) -
        eq_cumulative_.begin());
    if (lo >= boundary_.size()) lo = boundary_.size() - 1;
    std::vector<long> x = boundary_[lo];
    for (;;) {
      if (inside(x, box_.n)) out.occupied[lb.index(x)] = 1;
      if (!inside(x, kill_radius_)) break;
      step(x, walk, d);
    }
    ++traj;
    t += arrivals.exponential(cap_);
  }
  out.n_trajectories = traj;

  std::vector<std::uint8_t> keep = out.occupied;
  if (!occupied) {
    for (auto& v : keep) v = v ? 0 : 1;
  }
  out.graph = lattice_graph_from_mask(lb, keep);
  out.graph.provenance = {occupied ? "ri-occupied" : "ri-vacant",
                          "u=" + format_double(u) + ",kill_radius=" +
                              std::to_string(kill_radius_) + ",d=" + std::to_string(d),
                          seed, box_.n, ""};
  return out;
}

Graph gen_interlacements(const BoxSpec& box, double u, long kill_radius,
                         std::uint64_t seed, bool occupied) {
  InterlacementSampler sampler(box, kill_radius, seed);
  return sampler.sample(u, seed, occupied).graph;
}

}  // namespace metastab
