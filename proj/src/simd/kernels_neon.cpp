#include "ecsym/simd/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace ecsym::simd::neon {
namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x.data() + i), vld1q_f64(y.data() + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x.data() + i + 2), vld1q_f64(y.data() + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y.data() + i, vfmaq_f64(vld1q_f64(y.data() + i), va, vld1q_f64(x.data() + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  const std::size_t n = x.size();
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x.data() + i, vmulq_f64(va, vld1q_f64(x.data() + i)));
  for (; i < n; ++i) x[i] *= a;
}

void csr_matvec(const CsrView& m, std::span<const double> x, std::span<double> y) {
  const std::size_t rows = m.rows();
  for (std::size_t r = 0; r < rows; ++r) {
    std::int32_t k = m.row_ptr[r];
    const std::int32_t end = m.row_ptr[r + 1];
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; k + 2 <= end; k += 2) {
      const double gathered[2] = {x[m.col_index[k]], x[m.col_index[k + 1]]};
      acc = vfmaq_f64(acc, vld1q_f64(m.values.data() + k), vld1q_f64(gathered));
    }
    double s = vaddvq_f64(acc);
    for (; k < end; ++k) s += m.values[k] * x[m.col_index[k]];
    y[r] = s;
  }
}

void landau_energy_row(const LandauCoefficients& c, std::span<const double> xs, double p,
                       std::span<double> out) {
  const std::size_t n = xs.size();
  const double ap = 1.0 + 4.0 * c.g_minus * c.g_minus * p * p;
  const double ax = 4.0 * c.g_plus * c.g_plus;
  const double pp = c.stiffness * p * p;
  const float64x2_t vax = vdupq_n_f64(ax);
  const float64x2_t vap = vdupq_n_f64(ap);
  const float64x2_t vpp = vdupq_n_f64(pp);
  const float64x2_t vs = vdupq_n_f64(c.stiffness);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(xs.data() + i);
    const float64x2_t x2 = vmulq_f64(x, x);
    const float64x2_t root = vsqrtq_f64(vfmaq_f64(vap, vax, x2));
    const float64x2_t quad = vfmaq_f64(vpp, vs, x2);
    vst1q_f64(out.data() + i, vfmsq_f64(quad, vdupq_n_f64(0.5), root));
  }
  for (; i < n; ++i) {
    const double x = xs[i];
    out[i] = c.stiffness * x * x + pp - 0.5 * std::sqrt(ap + ax * x * x);
  }
}

constexpr KernelTable kTable{&dot, &axpy, &scale, &csr_matvec, &landau_energy_row};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace ecsym::simd::neon
