#include "ecsym/simd/kernels.hpp"

#include <cmath>

namespace ecsym::simd::scalar {
namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

void csr_matvec(const CsrView& m, std::span<const double> x, std::span<double> y) {
  const std::size_t rows = m.rows();
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::int32_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
      s += m.values[k] * x[m.col_index[k]];
    }
    y[r] = s;
  }
}

void landau_energy_row(const LandauCoefficients& c, std::span<const double> xs, double p,
                       std::span<double> out) {
  const double ap = 4.0 * c.g_minus * c.g_minus * p * p;
  const double ax = 4.0 * c.g_plus * c.g_plus;
  const double pp = c.stiffness * p * p;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    out[i] = c.stiffness * x * x + pp - 0.5 * std::sqrt(1.0 + ax * x * x + ap);
  }
}

constexpr KernelTable kTable{&dot, &axpy, &scale, &csr_matvec, &landau_energy_row};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace ecsym::simd::scalar
