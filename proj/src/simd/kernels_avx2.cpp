// Compiled with -mavx2 -mfma; only reached when the CPU reports both.

#include "ecsym/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace ecsym::simd::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double* px = x.data();
  const double* py = y.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i + 4), _mm256_loadu_pd(py + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += px[i] * py[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const double* px = x.data();
  double* py = y.data();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(py + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i)));
  }
  for (; i < n; ++i) py[i] += a * px[i];
}

void scale(double a, std::span<double> x) {
  const std::size_t n = x.size();
  double* px = x.data();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(px + i, _mm256_mul_pd(va, _mm256_loadu_pd(px + i)));
  for (; i < n; ++i) px[i] *= a;
}

void csr_matvec(const CsrView& m, std::span<const double> x, std::span<double> y) {
  const std::size_t rows = m.rows();
  const std::int32_t* cols = m.col_index.data();
  const double* vals = m.values.data();
  const double* px = x.data();
  for (std::size_t r = 0; r < rows; ++r) {
    std::int32_t k = m.row_ptr[r];
    const std::int32_t end = m.row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
      const __m256d xv = _mm256_i32gather_pd(px, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += vals[k] * px[cols[k]];
    y[r] = s;
  }
}

void landau_energy_row(const LandauCoefficients& c, std::span<const double> xs, double p,
                       std::span<double> out) {
  const std::size_t n = xs.size();
  const double ap = 1.0 + 4.0 * c.g_minus * c.g_minus * p * p;
  const double pp = c.stiffness * p * p;
  const __m256d vax = _mm256_set1_pd(4.0 * c.g_plus * c.g_plus);
  const __m256d vap = _mm256_set1_pd(ap);
  const __m256d vpp = _mm256_set1_pd(pp);
  const __m256d vs = _mm256_set1_pd(c.stiffness);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs.data() + i);
    const __m256d x2 = _mm256_mul_pd(x, x);
    const __m256d root = _mm256_sqrt_pd(_mm256_fmadd_pd(vax, x2, vap));
    const __m256d quad = _mm256_fmadd_pd(vs, x2, vpp);
    _mm256_storeu_pd(out.data() + i, _mm256_fnmadd_pd(half, root, quad));
  }
  const double ax = 4.0 * c.g_plus * c.g_plus;
  for (; i < n; ++i) {
    const double x = xs[i];
    out[i] = c.stiffness * x * x + pp - 0.5 * std::sqrt(ap + ax * x * x);
  }
}

constexpr KernelTable kTable{&dot, &axpy, &scale, &csr_matvec, &landau_energy_row};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace ecsym::simd::avx2
