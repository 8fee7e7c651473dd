#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>
#include <vector>

#include "metastab/contact.hpp"
#include "metastab/errors.hpp"

namespace metastab {

namespace {

constexpr std::size_t kMaxExactVertices = 20;

// Absorption system of the 2^|V|-state chain, empty state removed:
// R(A) x_A - sum_v x_{A \ v} - lambda sum_w k_A(w) x_{A+w} = 1.
// State A is the bitmask of infected vertices, row index A-1.
std::vector<Eigen::Triplet<double>> absorption_triplets(const Graph& g, double lambda) {
  const std::size_t nv = g.num_vertices();
  const std::uint32_t nstates = (1u << nv) - 1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nstates) * (nv + 1));
  for (std::uint32_t state = 1; state <= nstates; ++state) {
    const int row = static_cast<int>(state - 1);
    double diag = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      if (state >> v & 1u) {
        diag += 1.0;
        std::uint32_t healed = state & ~(1u << v);
        if (healed) trip.emplace_back(row, static_cast<int>(healed - 1), -1.0);
      } else if (lambda > 0.0) {
        int k = 0;
        for (Vertex nb : g.adj[static_cast<Vertex>(v)]) {
          if (state >> nb & 1u) ++k;
        }
        if (k > 0) {
          diag += lambda * k;
          trip.emplace_back(row, static_cast<int>((state | (1u << v)) - 1), -lambda * k);
        }
      }
    }
    trip.emplace_back(row, row, diag);
  }
  return trip;
}

}  // namespace

double exact_expected_extinction(const Graph& g, double lambda) {
  if (g.empty()) throw EmptyGraphError();
  if (lambda < 0.0) throw BadParameterError("lambda must be >= 0");
  const std::size_t nv = g.num_vertices();
  if (nv > kMaxExactVertices) throw TooManyVerticesError(nv);

  const int n = static_cast<int>((1u << nv) - 1);
  auto trip = absorption_triplets(g, lambda);
  Eigen::SparseMatrix<double> M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd b = Eigen::VectorXd::Ones(n);

  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
  solver.setTolerance(1e-12);
  solver.setMaxIterations(4 * n);
  solver.compute(M);
  Eigen::VectorXd x = solver.solve(b);
  if (solver.info() != Eigen::Success ||
      (M * x - b).norm() > 1e-10 * b.norm()) {
    // rescue with a direct factorization
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success)
      throw NumericalError("absorption system solve failed");
    x = lu.solve(b);
  }
  return x(n - 1);  // full-occupancy state
}

std::string dump_exact_system(const Graph& g, double lambda) {
  if (g.empty()) throw EmptyGraphError();
  const std::size_t nv = g.num_vertices();
  if (nv > kMaxExactVertices) throw TooManyVerticesError(nv);
  auto trip = absorption_triplets(g, lambda);
  std::ostringstream out;
  const std::uint32_t n = (1u << nv) - 1;
  out << "% absorption system M x = 1, state bitmask = row+1, full state = row " << n << "\n";
  out << n << " " << n << " " << trip.size() << "\n";
  for (const auto& t : trip) {
    out << (t.row() + 1) << " " << (t.col() + 1) << " " << format_double(t.value()) << "\n";
  }
  return out.str();
}

}  // namespace metastab
