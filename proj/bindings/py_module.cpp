#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "metastab/config.hpp"
#include "metastab/contact.hpp"
#include "metastab/errors.hpp"
#include "metastab/estimators.hpp"
#include "metastab/generators.hpp"
#include "metastab/gff.hpp"
#include "metastab/graph.hpp"
#include "metastab/harness.hpp"
#include "metastab/interlacements.hpp"
#include "metastab/structure.hpp"
#include "metastab/validate.hpp"

namespace py = pybind11;
using namespace metastab;

namespace {

BoxSpec make_box(long n, int d, const std::string& kind) {
  BoxSpec box{n, d, kind == "continuum" ? BoxKind::Continuum : BoxKind::Lattice};
  return box;
}

GwConditioning conditioning_from(const std::string& s) {
  if (s == "none") return GwConditioning::None;
  if (s == "survival-to-n") return GwConditioning::SurvivalToN;
  throw BadParameterError("conditioning must be 'none' or 'survival-to-n'");
}

ContactConfig contact_config(double lambda, std::optional<double> time_cap,
                             std::optional<std::vector<Vertex>> initial) {
  ContactConfig cfg;
  cfg.lambda = lambda;
  cfg.time_cap = time_cap;
  cfg.initial = std::move(initial);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "contact-process extinction-time simulator on random graphs";

  py::register_exception<SimError>(m, "SimError", PyExc_RuntimeError);

  py::class_<Provenance>(m, "Provenance")
      .def_readonly("model", &Provenance::model)
      .def_readonly("params", &Provenance::params)
      .def_readonly("seed", &Provenance::seed)
      .def_readonly("scale", &Provenance::scale)
      .def_readonly("note", &Provenance::note);

  py::class_<Graph>(m, "Graph")
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def("degree", &Graph::degree, py::arg("v"))
      .def("neighbors",
           [](const Graph& g, Vertex v) {
             auto nb = g.neighbors(v);
             return std::vector<Vertex>(nb.begin(), nb.end());
           },
           py::arg("v"))
      .def("coord",
           [](const Graph& g, Vertex v) {
             if (g.embedding == EmbeddingKind::None)
               throw NoEmbeddingError();
             auto c = g.coord(v);
             return std::vector<double>(c.begin(), c.end());
           },
           py::arg("v"))
      .def_property_readonly("dim", [](const Graph& g) { return g.dim; })
      .def_property_readonly("embedding",
                             [](const Graph& g) {
                               switch (g.embedding) {
                                 case EmbeddingKind::Lattice: return "lattice";
                                 case EmbeddingKind::Continuum: return "continuum";
                                 default: return "none";
                               }
                             })
      .def_readonly("provenance", &Graph::provenance)
      .def("__repr__", [](const Graph& g) {
        return "<Graph |V|=" + std::to_string(g.num_vertices()) + " |E|=" +
               std::to_string(g.num_edges()) + " model=" + g.provenance.model + ">";
      });

  m.def("make_graph",
        [](std::size_t nv, const std::vector<std::pair<Vertex, Vertex>>& edges) {
          return make_graph(nv, edges);
        },
        py::arg("n_vertices"), py::arg("edges"));
  m.def("path_graph", &path_graph, py::arg("k"));
  m.def("cycle_graph", &cycle_graph, py::arg("k"));
  m.def("star_graph", &star_graph, py::arg("leaves"));
  m.def("complete_graph", &complete_graph, py::arg("k"));

  m.def("serialize_graph", &serialize_graph, py::arg("g"));
  m.def("parse_graph", &parse_graph, py::arg("text"));

  m.def("connected_components",
        [](const Graph& g) {
          std::vector<std::vector<Vertex>> out;
          for (auto& comp : connected_components(g)) out.push_back(std::move(comp.vertices));
          return out;
        },
        py::arg("g"));
  m.def("maximal_component",
        [](const Graph& g) { return maximal_component(g).vertices; }, py::arg("g"));
  m.def("induced_subgraph",
        [](const Graph& g, const std::vector<Vertex>& vs) { return induced_subgraph(g, vs); },
        py::arg("g"), py::arg("vertices"));
  m.def("box_restrict",
        [](const Graph& g, long n, int d, const std::string& kind) {
          return box_restrict(g, make_box(n, d, kind));
        },
        py::arg("g"), py::arg("n"), py::arg("d"), py::arg("kind") = "lattice");
  m.def("metric_diameter",
        [](const Graph& g, const std::vector<Vertex>& vs) { return metric_diameter(g, vs); },
        py::arg("g"), py::arg("vertices"));
  m.def("is_connected", &is_connected, py::arg("g"));

  // generators
  m.def("gen_bond_percolation",
        [](long n, int d, double p, std::uint64_t seed) {
          return gen_bond_percolation(make_box(n, d, "lattice"), p, seed);
        },
        py::arg("n"), py::arg("d"), py::arg("p"), py::arg("seed"));
  m.def("gen_site_percolation",
        [](long n, int d, double p, std::uint64_t seed) {
          return gen_site_percolation(make_box(n, d, "lattice"), p, seed);
        },
        py::arg("n"), py::arg("d"), py::arg("p"), py::arg("seed"));
  m.def("gen_rgg",
        [](long n, int d, double R, std::uint64_t seed) {
          return gen_rgg(make_box(n, d, "continuum"), R, seed);
        },
        py::arg("n"), py::arg("d"), py::arg("R"), py::arg("seed"));

  py::class_<GwRecord>(m, "GwRecord")
      .def_readonly("m", &GwRecord::m)
      .def_readonly("sigma2", &GwRecord::sigma2)
      .def_readonly("generation_sizes", &GwRecord::generation_sizes)
      .def_readonly("v_n", &GwRecord::v_n)
      .def_readonly("tree", &GwRecord::tree)
      .def_property_readonly("w_proxy", &GwRecord::w_proxy);
  m.def("gen_gw_tree",
        [](const std::string& nu, int generations, const std::string& conditioning,
           std::uint64_t seed) {
          return gen_gw_tree(OffspringLaw::parse(nu), generations,
                             conditioning_from(conditioning), seed);
        },
        py::arg("nu"), py::arg("generations"), py::arg("conditioning") = "none",
        py::arg("seed") = 0);

  py::class_<GffSample>(m, "GffSample")
      .def_readonly("h", &GffSample::h)
      .def_readonly("phi", &GffSample::phi)
      .def_readonly("green_diag", &GffSample::green_diag)
      .def_readonly("graph", &GffSample::graph);
  py::class_<GffSampler>(m, "GffSampler")
      .def(py::init([](long n, int d, int pad_factor) {
             return GffSampler(make_box(n, d, "lattice"), pad_factor);
           }),
           py::arg("n"), py::arg("d") = 3, py::arg("pad_factor") = 4)
      .def("sample", &GffSampler::sample, py::arg("h"), py::arg("seed"))
      .def("covariance", &GffSampler::covariance, py::arg("i"), py::arg("j"))
      .def_property_readonly("n_sites", &GffSampler::n_sites)
      .def_property_readonly("green_at_origin", &GffSampler::green_at_origin);
  m.def("gen_gff_excursion",
        [](long n, int d, double h, int pad_factor, std::uint64_t seed) {
          return gen_gff_excursion(make_box(n, d, "lattice"), h, pad_factor, seed);
        },
        py::arg("n"), py::arg("d"), py::arg("h"), py::arg("pad_factor"), py::arg("seed"));
  m.def("green_origin_oracle", &GffSampler::green_origin_oracle, py::arg("d"),
        py::arg("padded_n"), py::arg("tol") = 1e-12);

  py::class_<InterlacementSample>(m, "InterlacementSample")
      .def_readonly("u", &InterlacementSample::u)
      .def_readonly("cap_estimate", &InterlacementSample::cap_estimate)
      .def_readonly("n_trajectories", &InterlacementSample::n_trajectories)
      .def_readonly("occupied", &InterlacementSample::occupied)
      .def_readonly("graph", &InterlacementSample::graph);
  py::class_<InterlacementSampler>(m, "InterlacementSampler")
      .def(py::init([](long n, int d, long kill_radius, std::uint64_t seed, int walks) {
             return InterlacementSampler(make_box(n, d, "lattice"), kill_radius, seed, walks);
           }),
           py::arg("n"), py::arg("d"), py::arg("kill_radius"), py::arg("seed"),
           py::arg("walks_per_site") = 1024)
      .def("sample", &InterlacementSampler::sample, py::arg("u"), py::arg("seed"),
           py::arg("occupied") = true)
      .def_property_readonly("cap_estimate", &InterlacementSampler::cap_estimate);
  m.def("gen_interlacements",
        [](long n, int d, double u, long kill_radius, std::uint64_t seed, bool occupied) {
          return gen_interlacements(make_box(n, d, "lattice"), u, kill_radius, seed, occupied);
        },
        py::arg("n"), py::arg("d"), py::arg("u"), py::arg("kill_radius"), py::arg("seed"),
        py::arg("occupied") = true);

  // contact process
  py::class_<TrialOutcome>(m, "TrialOutcome")
      .def_readonly("tau", &TrialOutcome::tau)
      .def_readonly("censored", &TrialOutcome::censored)
      .def_readonly("events", &TrialOutcome::events)
      .def_readonly("trial_index", &TrialOutcome::trial_index);
  m.def("simulate_extinction",
        [](const Graph& g, double lambda, std::uint64_t seed, std::uint64_t trial_index,
           std::optional<double> time_cap, std::optional<std::vector<Vertex>> initial) {
          return simulate_extinction(g, contact_config(lambda, time_cap, std::move(initial)),
                                     seed, trial_index);
        },
        py::arg("g"), py::arg("lambda_"), py::arg("seed"), py::arg("trial_index") = 0,
        py::arg("time_cap") = std::nullopt, py::arg("initial") = std::nullopt);
  m.def("coupled_simulate",
        [](const Graph& g, const std::vector<double>& lambdas, std::uint64_t seed,
           std::optional<double> time_cap) {
          return coupled_simulate(g, lambdas, seed, time_cap);
        },
        py::arg("g"), py::arg("lambdas"), py::arg("seed"),
        py::arg("time_cap") = std::nullopt);
  m.def("coupled_subgraph_simulate",
        [](const Graph& g, const std::vector<std::vector<Vertex>>& subsets, double lambda,
           std::uint64_t seed, std::optional<double> time_cap) {
          return coupled_subgraph_simulate(g, subsets, lambda, seed, time_cap);
        },
        py::arg("g"), py::arg("subsets"), py::arg("lambda_"), py::arg("seed"),
        py::arg("time_cap") = std::nullopt);
  m.def("exact_expected_extinction", &exact_expected_extinction, py::arg("g"),
        py::arg("lambda_"));

  py::class_<MeanEstimate>(m, "MeanEstimate")
      .def_readonly("mean", &MeanEstimate::mean)
      .def_readonly("std_error", &MeanEstimate::std_error)
      .def_readonly("censored", &MeanEstimate::censored)
      .def_readonly("trials", &MeanEstimate::trials)
      .def_readonly("taus", &MeanEstimate::taus);
  m.def("estimate_mean_extinction",
        [](const Graph& g, double lambda, std::size_t trials, std::uint64_t seed,
           std::optional<double> time_cap, int workers) {
          return estimate_mean_extinction(g, contact_config(lambda, time_cap, std::nullopt),
                                          trials, seed, workers);
        },
        py::arg("g"), py::arg("lambda_"), py::arg("trials"), py::arg("seed"),
        py::arg("time_cap") = std::nullopt, py::arg("workers") = 0);

  // estimators and structure
  py::class_<ThetaEstimate>(m, "ThetaEstimate")
      .def_readonly("theta_hat", &ThetaEstimate::theta_hat)
      .def_readonly("se", &ThetaEstimate::se)
      .def_readonly("n_used", &ThetaEstimate::n_used)
      .def_readonly("per_n", &ThetaEstimate::per_n);
  m.def("estimate_theta", &estimate_theta, py::arg("samples"));

  py::class_<SupermultReport>(m, "SupermultReport")
      .def_readonly("defect", &SupermultReport::defect)
      .def_readonly("correction", &SupermultReport::correction)
      .def_readonly("lower_bound_value", &SupermultReport::lower_bound_value)
      .def_readonly("max_dominance_exact", &SupermultReport::max_dominance_exact)
      .def_readonly("used_exact", &SupermultReport::used_exact);
  m.def("supermult_check", &supermult_check, py::arg("g"), py::arg("subgraphs"),
        py::arg("lambda_"), py::arg("trials"), py::arg("seed"));

  py::class_<TailBoundReport>(m, "TailBoundReport")
      .def_readonly("exact_mean", &TailBoundReport::exact_mean)
      .def_readonly("t_grid", &TailBoundReport::t_grid)
      .def_readonly("ecdf", &TailBoundReport::ecdf)
      .def_readonly("bound", &TailBoundReport::bound)
      .def_readonly("violations", &TailBoundReport::violations);
  m.def("tail_bound_check", &tail_bound_check, py::arg("g"), py::arg("lambda_"),
        py::arg("trials"), py::arg("t_grid"), py::arg("seed"));

  py::class_<CensusRow>(m, "CensusRow")
      .def_readonly("size", &CensusRow::size)
      .def_readonly("diameter", &CensusRow::diameter)
      .def_readonly("in_boundary_shell", &CensusRow::in_boundary_shell);
  py::class_<CensusReport>(m, "CensusReport")
      .def_readonly("n", &CensusReport::n)
      .def_readonly("epsilon", &CensusReport::epsilon)
      .def_readonly("rows", &CensusReport::rows)
      .def_readonly("giant_threshold", &CensusReport::giant_threshold)
      .def_readonly("small_threshold", &CensusReport::small_threshold)
      .def_readonly("verdict_unique_giant", &CensusReport::verdict_unique_giant)
      .def_readonly("verdict_others", &CensusReport::verdict_others);
  m.def("component_census", &component_census, py::arg("g"), py::arg("n"),
        py::arg("epsilon"));
  m.def("annulus_crossing_components",
        [](const Graph& g, const std::vector<long>& center, long ell) {
          return annulus_crossing_components(g, AnnulusSpec{center, ell});
        },
        py::arg("g"), py::arg("center"), py::arg("ell"));

  py::class_<MstResult>(m, "MstResult")
      .def_readonly("max_degree", &MstResult::max_degree)
      .def_readonly("total_length", &MstResult::total_length)
      .def_readonly("edges", &MstResult::edges);
  m.def("mst_degree_check", &mst_degree_check, py::arg("g"));

  // harness
  m.def("run_experiment_file",
        [](const std::string& config_path) {
          ExperimentConfig cfg = load_config(config_path);
          RunStats stats = run_experiment(cfg);
          py::dict d;
          d["units_total"] = stats.units_total;
          d["units_computed"] = stats.units_computed;
          d["units_skipped"] = stats.units_skipped;
          return d;
        },
        py::arg("config_path"));
}
