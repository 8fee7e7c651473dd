#include "metastab/contact.hpp"

#include <algorithm>
#include <cmath>

#include "metastab/errors.hpp"
#include "metastab/parallel.hpp"
#include "metastab/rng.hpp"

namespace metastab {

namespace {

// infected set with O(1) insert/erase/uniform-pick
struct ActiveSet {
  std::vector<Vertex> members;
  std::vector<std::uint32_t> pos;  // npos when healthy
  static constexpr std::uint32_t npos = static_cast<std::uint32_t>(-1);
  std::size_t degree_sum = 0;

  explicit ActiveSet(std::size_t nv) : pos(nv, npos) {}

  bool contains(Vertex v) const { return pos[v] != npos; }

  void insert(Vertex v, std::size_t deg) {
    pos[v] = static_cast<std::uint32_t>(members.size());
    members.push_back(v);
    degree_sum += deg;
  }

  void erase(Vertex v, std::size_t deg) {
    std::uint32_t i = pos[v];
    Vertex last = members.back();
    members[i] = last;
    pos[last] = i;
    members.pop_back();
    pos[v] = npos;
    degree_sum -= deg;
  }

  std::size_t size() const { return members.size(); }
};

std::vector<Vertex> initial_set(const Graph& g, const ContactConfig& cfg) {
  if (!cfg.initial) {
    std::vector<Vertex> all(g.num_vertices());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = static_cast<Vertex>(v);
    return all;
  }
  std::vector<Vertex> init = *cfg.initial;
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  if (init.empty()) throw BadParameterError("initial infected set must be nonempty");
  for (Vertex v : init) {
    if (v >= g.num_vertices()) throw UnknownVertexError(v);
  }
  return init;
}

}  // namespace

TrialOutcome simulate_extinction(const Graph& g, const ContactConfig& cfg,
                                 std::uint64_t master_seed,
                                 std::uint64_t trial_index) {
  if (g.empty()) throw EmptyGraphError();
  if (cfg.lambda < 0.0) throw BadParameterError("lambda must be >= 0");
  const double lambda = cfg.lambda;

  Rng rng(derive_seed(master_seed, trial_index, StreamRole::Trial));
  ActiveSet active(g.num_vertices());
  for (Vertex v : initial_set(g, cfg)) active.insert(v, g.degree(v));

  TrialOutcome out;
  out.master_seed = master_seed;
  out.trial_index = trial_index;

  const std::size_t maxdeg = g.max_degree();
  double t = 0.0;
  while (active.size() > 0) {
    const double rate = static_cast<double>(active.size()) +
                        lambda * static_cast<double>(active.degree_sum);
    t += rng.exponential(rate);
    if (cfg.time_cap && t > *cfg.time_cap) {
      out.tau = *cfg.time_cap;
      out.censored = true;
      return out;
    }
    ++out.events;
    if (rng.u01() * rate < static_cast<double>(active.size())) {
      // recovery of a uniform infected vertex
      Vertex v = active.members[rng.uniform_below(active.size())];
      active.erase(v, g.degree(v));
    } else {
      // transmission along a uniform directed edge out of the infected set:
      // pick an infected vertex proportionally to its degree by rejection
      Vertex v;
      for (;;) {
        v = active.members[rng.uniform_below(active.size())];
        if (rng.uniform_below(maxdeg) < g.degree(v)) break;
      }
      Vertex w = g.adj[v][rng.uniform_below(g.degree(v))];
      if (!active.contains(w)) active.insert(w, g.degree(w));
      // transmission to an already-infected vertex changes nothing
    }
  }
  out.tau = t;
  return out;
}

namespace {

// flat list of directed edges for the graphical representation sweep
std::vector<std::pair<Vertex, Vertex>> directed_edges(const Graph& g) {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(2 * g.num_edges());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Vertex w : g.adj[v]) out.emplace_back(v, w);
  }
  return out;
}

struct SweepProcess {
  // membership restricted to a vertex subset (or everything)
  std::vector<std::uint8_t> in_scope;
  std::vector<std::uint8_t> infected;
  std::size_t n_infected = 0;
  double tau = -1.0;
  std::uint64_t events = 0;
  double keep_fraction = 1.0;  // lambda_i / lambda_max thinning level

  SweepProcess(std::size_t nv, const std::vector<std::uint8_t>& scope, double keep)
      : in_scope(scope), infected(nv, 0), keep_fraction(keep) {
    for (std::size_t v = 0; v < nv; ++v) {
      if (in_scope[v]) {
        infected[v] = 1;
        ++n_infected;
      }
    }
  }
};

}  // namespace

std::vector<TrialOutcome> coupled_simulate(const Graph& g,
                                           const std::vector<double>& lambdas,
                                           std::uint64_t seed,
                                           std::optional<double> time_cap) {
  if (g.empty()) throw EmptyGraphError();
  if (lambdas.empty()) throw BadParameterError("need at least one lambda");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] <= 0.0) throw BadParameterError("coupled lambdas must be > 0");
    if (i > 0 && lambdas[i] <= lambdas[i - 1])
      throw BadParameterError("lambdas must be strictly ascending");
  }
  const double lambda_max = lambdas.back();
  const std::size_t nv = g.num_vertices();
  const auto dedges = directed_edges(g);

  std::vector<std::uint8_t> everything(nv, 1);
  std::vector<SweepProcess> procs;
  procs.reserve(lambdas.size());
  for (double lam : lambdas) procs.emplace_back(nv, everything, lam / lambda_max);

  Rng rng(derive_seed(seed, 0, StreamRole::Trial));
  const double total_rate = static_cast<double>(nv) +
                            lambda_max * static_cast<double>(dedges.size());
  double t = 0.0;
  std::size_t alive = procs.size();
  while (alive > 0) {
    t += rng.exponential(total_rate);
    const bool capped = time_cap && t > *time_cap;
    if (!capped) {
      if (rng.u01() * total_rate < static_cast<double>(nv)) {
        Vertex v = static_cast<Vertex>(rng.uniform_below(nv));
        for (auto& pr : procs) {
          if (pr.tau < 0.0) {
            ++pr.events;
            if (pr.infected[v]) {
              pr.infected[v] = 0;
              if (--pr.n_infected == 0) {
                pr.tau = t;
                --alive;
              }
            }
          }
        }
      } else {
        auto [v, w] = dedges[rng.uniform_below(dedges.size())];
        const double mark = rng.u01();  // one mark shared by every rate
        for (auto& pr : procs) {
          if (pr.tau < 0.0) {
            ++pr.events;
            if (mark < pr.keep_fraction && pr.infected[v] && !pr.infected[w]) {
              pr.infected[w] = 1;
              ++pr.n_infected;
            }
          }
        }
      }
      continue;
    }
    for (auto& pr : procs) {
      if (pr.tau < 0.0) {
        pr.tau = *time_cap;
        --alive;
      }
    }
    std::vector<TrialOutcome> out;
    for (const auto& pr : procs) {
      TrialOutcome o;
      o.tau = pr.tau;
      o.censored = pr.n_infected > 0;
      o.events = pr.events;
      o.master_seed = seed;
      out.push_back(o);
    }
    return out;
  }
  std::vector<TrialOutcome> out;
  for (const auto& pr : procs) {
    TrialOutcome o;
    o.tau = pr.tau;
    o.events = pr.events;
    o.master_seed = seed;
    out.push_back(o);
  }
  return out;
}

std::vector<TrialOutcome> coupled_subgraph_simulate(
    const Graph& g, const std::vector<std::vector<Vertex>>& subsets,
    double lambda, std::uint64_t seed, std::optional<double> time_cap) {
  if (g.empty()) throw EmptyGraphError();
  if (lambda < 0.0) throw BadParameterError("lambda must be >= 0");
  const std::size_t nv = g.num_vertices();
  const auto dedges = directed_edges(g);

  std::vector<SweepProcess> procs;
  for (const auto& vs : subsets) {
    std::vector<std::uint8_t> scope(nv, 0);
    for (Vertex v : vs) {
      if (v >= nv) throw UnknownVertexError(v);
      scope[v] = 1;
    }
    if (vs.empty()) throw BadParameterError("subgraph vertex set must be nonempty");
    procs.emplace_back(nv, scope, 1.0);
  }
  std::vector<std::uint8_t> everything(nv, 1);
  procs.emplace_back(nv, everything, 1.0);  // the full graph, last

  Rng rng(derive_seed(seed, 0, StreamRole::Trial));
  const double total_rate = static_cast<double>(nv) +
                            lambda * static_cast<double>(dedges.size());
  double t = 0.0;
  std::size_t alive = procs.size();
  while (alive > 0) {
    t += rng.exponential(total_rate);
    if (time_cap && t > *time_cap) {
      for (auto& pr : procs) {
        if (pr.tau < 0.0) pr.tau = *time_cap;
      }
      break;
    }
    if (rng.u01() * total_rate < static_cast<double>(nv)) {
      Vertex v = static_cast<Vertex>(rng.uniform_below(nv));
      for (auto& pr : procs) {
        if (pr.tau < 0.0) {
          ++pr.events;
          if (pr.infected[v]) {
            pr.infected[v] = 0;
            if (--pr.n_infected == 0) {
              pr.tau = t;
              --alive;
            }
          }
        }
      }
    } else {
      auto [v, w] = dedges[rng.uniform_below(dedges.size())];
      for (auto& pr : procs) {
        if (pr.tau < 0.0) {
          ++pr.events;
          // the restriction only sees edges with both ends in scope
          if (pr.in_scope[v] && pr.in_scope[w] && pr.infected[v] && !pr.infected[w]) {
            pr.infected[w] = 1;
            ++pr.n_infected;
          }
        }
      }
    }
  }
  std::vector<TrialOutcome> out;
  for (const auto& pr : procs) {
    TrialOutcome o;
    o.tau = pr.tau;
    o.censored = pr.n_infected > 0;
    o.events = pr.events;
    o.master_seed = seed;
    out.push_back(o);
  }
  return out;
}

MeanEstimate estimate_mean_extinction(const Graph& g, const ContactConfig& cfg,
                                      std::size_t trials, std::uint64_t master_seed,
                                      int workers) {
  if (trials < 1) throw BadParameterError("trials must be >= 1");
  if (g.empty()) throw EmptyGraphError();

  std::vector<TrialOutcome> outcomes(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    outcomes[i] = simulate_extinction(g, cfg, master_seed, i);
  });

  MeanEstimate est;
  est.trials = trials;
  for (const auto& o : outcomes) {
    if (o.censored) {
      ++est.censored;
    } else {
      est.taus.push_back(o.tau);
    }
  }
  if (est.taus.empty()) throw AllCensoredError();
  double sum = 0.0;
  for (double tau : est.taus) sum += tau;
  est.mean = sum / static_cast<double>(est.taus.size());
  double ss = 0.0;
  for (double tau : est.taus) {
    double dlt = tau - est.mean;
    ss += dlt * dlt;
  }
  if (est.taus.size() > 1) {
    est.std_error = std::sqrt(ss / (static_cast<double>(est.taus.size()) - 1.0) /
                              static_cast<double>(est.taus.size()));
  }
  return est;
}

}  // namespace metastab
