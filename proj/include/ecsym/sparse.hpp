#pragma once

// Real symmetric sparse matrices and their lowest eigenpair.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <span>
#include <vector>

#include "ecsym/simd/kernels.hpp"

namespace ecsym::sparse {

class CsrMatrix {
 public:
  CsrMatrix() = default;
  explicit CsrMatrix(const Eigen::SparseMatrix<double, Eigen::RowMajor>& m);

  int rows() const { return rows_; }
  simd::CsrView view() const { return {row_ptr_, col_index_, values_}; }

  void multiply(std::span<const double> x, std::span<double> y) const;
  Eigen::MatrixXd to_dense() const;

 private:
  int rows_ = 0;
  std::vector<std::int32_t> row_ptr_;
  std::vector<std::int32_t> col_index_;
  std::vector<double> values_;
};

struct LanczosOptions {
  int krylov_dim = 120;
  int max_restarts = 300;
  double tol = 1e-11;          // residual norm relative to max(1, |eigenvalue|)
  int dense_threshold = 400;  // dense diagonalization below this size; full dense solves cost seconds past ~1000
  unsigned long seed = 7;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  bool converged = false;
  double residual = 0.0;
  int restarts = 0;
};

/// Lowest eigenpair: dense solver below the threshold, otherwise restarted
/// Lanczos with full reorthogonalization. Deterministic for fixed options.
EigenPair lowest_eigenpair(const CsrMatrix& m, const LanczosOptions& opts = {});

}  // namespace ecsym::sparse
