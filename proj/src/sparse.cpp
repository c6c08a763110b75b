#include "ecsym/sparse.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "ecsym/error.hpp"

namespace ecsym::sparse {

CsrMatrix::CsrMatrix(const Eigen::SparseMatrix<double, Eigen::RowMajor>& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  Eigen::SparseMatrix<double, Eigen::RowMajor> c = m;
  c.makeCompressed();
  rows_ = static_cast<int>(c.rows());
  row_ptr_.assign(c.outerIndexPtr(), c.outerIndexPtr() + rows_ + 1);
  col_index_.assign(c.innerIndexPtr(), c.innerIndexPtr() + c.nonZeros());
  values_.assign(c.valuePtr(), c.valuePtr() + c.nonZeros());
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  simd::csr_matvec(view(), x, y);
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_index_[k]) += values_[k];
  }
  return d;
}

namespace {

double norm(std::span<const double> v) { return std::sqrt(simd::dot(v, v)); }

EigenPair dense_lowest(const CsrMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.to_dense());
  EigenPair ep;
  ep.value = es.eigenvalues()(0);
  ep.vector = es.eigenvectors().col(0);
  ep.converged = true;
  return ep;
}

}  // namespace

EigenPair lowest_eigenpair(const CsrMatrix& m, const LanczosOptions& opts) {
  const int n = m.rows();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty matrix");
  if (n < opts.dense_threshold) return dense_lowest(m);

  const int kdim = std::min(opts.krylov_dim, n);
  std::vector<std::vector<double>> basis(kdim + 1, std::vector<double>(n));
  std::vector<double> w(n);
  std::vector<double> alpha(kdim);
  std::vector<double> beta(kdim);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> start(n);
  for (double& x : start) x = dist(rng);
  simd::scale(1.0 / norm(start), start);

  EigenPair ep;
  ep.vector.resize(n);
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    ep.restarts = restart;
    basis[0] = start;
    int used = 0;
    bool invariant = false;
    for (int k = 0; k < kdim; ++k) {
      m.multiply(basis[k], w);
      alpha[k] = 0.0;
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= k; ++i) {
          const double c = simd::dot(w, basis[i]);
          if (i == k) alpha[k] += c;
          simd::axpy(-c, basis[i], w);
        }
      }
      used = k + 1;
      beta[k] = norm(w);
      const double scale = std::max(1.0, std::abs(alpha[k]));
      if (beta[k] < 1e-13 * scale) {
        invariant = true;
        break;
      }
      basis[k + 1] = w;
      simd::scale(1.0 / beta[k], basis[k + 1]);
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
    for (int k = 0; k < used; ++k) {
      t(k, k) = alpha[k];
      if (k + 1 < used) t(k, k + 1) = t(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta = es.eigenvalues()(0);
    const Eigen::VectorXd s = es.eigenvectors().col(0);

    std::fill(start.begin(), start.end(), 0.0);
    for (int k = 0; k < used; ++k) simd::axpy(s(k), basis[k], start);
    simd::scale(1.0 / norm(start), start);

    const double ritz_residual = invariant ? 0.0 : std::abs(beta[used - 1] * s(used - 1));
    ep.value = theta;
    ep.residual = ritz_residual;
    if (ritz_residual < opts.tol * std::max(1.0, std::abs(theta))) {
      ep.converged = true;
      break;
    }
  }

  // True residual of the returned vector.
  m.multiply(start, w);
  ep.value = simd::dot(start, w);
  simd::axpy(-ep.value, start, w);
  ep.residual = norm(w);
  ep.converged = ep.converged || ep.residual < 10.0 * opts.tol * std::max(1.0, std::abs(ep.value));
  for (int i = 0; i < n; ++i) ep.vector(i) = start[i];
  return ep;
}

}  // namespace ecsym::sparse
