#include "metastab/gff.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>

#include "metastab/errors.hpp"
#include "metastab/generators.hpp"
#include "metastab/rng.hpp"

namespace metastab {

namespace {

constexpr std::size_t kMaxPaddedSites = 20000;

// sparse (I - P) on the padded box, P = (1/2d) * adjacency, walk killed on
// stepping outside
Eigen::SparseMatrix<double> killed_walk_operator(const LatticeBox& box) {
  const int d = box.spec().d;
  const double hop = 1.0 / (2.0 * d);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(box.size() * (1 + 2 * static_cast<std::size_t>(d)));
  for (std::size_t i = 0; i < box.size(); ++i) {
    trip.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
    for (int k = 0; k < d; ++k) {
      std::size_t up = box.neighbor_up(i, k);
      if (up != LatticeBox::npos) {
        trip.emplace_back(static_cast<int>(i), static_cast<int>(up), -hop);
        trip.emplace_back(static_cast<int>(up), static_cast<int>(i), -hop);
      }
    }
  }
  Eigen::SparseMatrix<double> op(static_cast<int>(box.size()), static_cast<int>(box.size()));
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

}  // namespace

struct GffSampler::Impl {
  BoxSpec box;
  int pad_factor;
  LatticeBox inner;
  Eigen::MatrixXd cov;   // Green function restricted to B_n x B_n
  Eigen::MatrixXd chol;  // lower Cholesky factor of cov

  Impl(const BoxSpec& b, int pad)
      : box(b), pad_factor(pad), inner(b) {
    BoxSpec padded{b.n * pad, b.d, BoxKind::Lattice};
    LatticeBox pbox(padded);

    Eigen::SparseMatrix<double> op = killed_walk_operator(pbox);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(op);
    if (solver.info() != Eigen::Success)
      throw NumericalError("killed-walk operator factorization failed");

    const std::size_t nin = inner.size();
    // columns of the Green function at the inner sites
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pbox.size()),
                                                static_cast<Eigen::Index>(nin));
    std::vector<std::size_t> padded_index(nin);
    for (std::size_t i = 0; i < nin; ++i) {
      padded_index[i] = pbox.index(inner.site(i));
      rhs(static_cast<Eigen::Index>(padded_index[i]), static_cast<Eigen::Index>(i)) = 1.0;
    }
    Eigen::MatrixXd full = solver.solve(rhs);
    cov.resize(static_cast<Eigen::Index>(nin), static_cast<Eigen::Index>(nin));
    for (std::size_t i = 0; i < nin; ++i) {
      for (std::size_t j = 0; j < nin; ++j) {
        cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            full(static_cast<Eigen::Index>(padded_index[i]), static_cast<Eigen::Index>(j));
      }
    }
    cov = 0.5 * (cov + cov.transpose()).eval();  // symmetrize roundoff
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
      throw NumericalError("covariance Cholesky failed");
    chol = llt.matrixL();
  }
};

GffSampler::GffSampler(const BoxSpec& box, int pad_factor) {
  if (box.d < 3) throw BadDimensionError("gff needs d >= 3");
  if (box.kind != BoxKind::Lattice) throw BadParameterError("gff needs a lattice box");
  if (pad_factor < 2) throw BadParameterError("pad_factor must be >= 2");
  BoxSpec padded{box.n * pad_factor, box.d, BoxKind::Lattice};
  if (padded.site_count() > kMaxPaddedSites)
    throw TooLargeError("padded box has " + std::to_string(padded.site_count()) +
                        " sites, guard is " + std::to_string(kMaxPaddedSites));
  impl_ = std::make_unique<Impl>(box, pad_factor);
}

GffSampler::~GffSampler() = default;
GffSampler::GffSampler(GffSampler&&) noexcept = default;
GffSampler& GffSampler::operator=(GffSampler&&) noexcept = default;

std::size_t GffSampler::n_sites() const { return impl_->inner.size(); }

double GffSampler::covariance(std::size_t i, std::size_t j) const {
  return impl_->cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double GffSampler::green_at_origin() const {
  std::vector<long> origin(static_cast<std::size_t>(impl_->box.d), 0);
  std::size_t i = impl_->inner.index(origin);
  return covariance(i, i);
}

GffSample GffSampler::sample(double h, std::uint64_t seed) const {
  const std::size_t n = n_sites();
  Rng rng(derive_seed(seed, 0, StreamRole::Field));
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = rng.normal();
  Eigen::VectorXd phi = impl_->chol * z;

  GffSample out;
  out.h = h;
  out.phi.assign(phi.data(), phi.data() + phi.size());
  out.green_diag.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.green_diag[i] = impl_->cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));

  std::vector<std::uint8_t> open(n);
  for (std::size_t i = 0; i < n; ++i) open[i] = out.phi[i] >= h ? 1 : 0;
  out.graph = lattice_graph_from_mask(impl_->inner, open);
  out.graph.provenance = {"gff",
                          "h=" + format_double(h) + ",pad_factor=" +
                              std::to_string(impl_->pad_factor) + ",d=" +
                              std::to_string(impl_->box.d),
                          seed, impl_->box.n, ""};
  return out;
}

double GffSampler::green_origin_oracle(int d, long padded_n, double tol) {
  LatticeBox box({padded_n, d, BoxKind::Lattice});
  std::vector<long> origin(static_cast<std::size_t>(d), 0);
  const std::size_t o = box.index(origin);
  const std::size_t n = box.size();
  const double hop = 1.0 / (2.0 * d);

  std::vector<std::vector<std::uint32_t>> nbr(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      std::size_t up = box.neighbor_up(i, k);
      if (up != LatticeBox::npos) {
        nbr[i].push_back(static_cast<std::uint32_t>(up));
        nbr[up].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i];
      for (std::uint32_t j : nbr[i]) s -= hop * x[j];
      y[i] = s;
    }
  };
  // matrix-free conjugate gradient on the SPD operator I - P
  std::vector<double> g(n, 0.0), r(n, 0.0), p(n, 0.0), ap(n, 0.0);
  r[o] = 1.0;
  p = r;
  double rr = 1.0;
  for (std::size_t it = 0; it < 8 * n; ++it) {
    apply(p, ap);
    double pap = 0.0;
    for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    double alpha = rr / pap;
    double rr_next = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rr_next += r[i] * r[i];
    }
    if (rr_next < tol * tol) break;
    double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  return g[o];
}

Graph gen_gff_excursion(const BoxSpec& box, double h, int pad_factor, std::uint64_t seed) {
  GffSampler sampler(box, pad_factor);
  return sampler.sample(h, seed).graph;
}

}  // namespace metastab
