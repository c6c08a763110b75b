#pragma once

// Data-parallel inner loops used by the Lanczos eigensolver and the dense
// Landau grid search. Every kernel has a scalar reference implementation;
// vectorized variants are selected once at runtime from the CPU features
// and can be forced with ECSYM_SIMD=scalar|avx2|neon.

#include <cstdint>
#include <span>
#include <string_view>

namespace ecsym::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);
bool backend_supported(Backend b);

/// Backend in use by the dispatching entry points below.
Backend active_backend();

/// Overrides the runtime choice. Throws Error(InvalidArgument) if the CPU or
/// the build lacks the backend.
void set_backend(Backend b);

/// Compressed sparse row view. Row i spans [row_ptr[i], row_ptr[i+1]).
struct CsrView {
  std::span<const std::int32_t> row_ptr;
  std::span<const std::int32_t> col_index;
  std::span<const double> values;

  std::size_t rows() const { return row_ptr.empty() ? 0 : row_ptr.size() - 1; }
};

/// Coefficients of the renormalized Landau potential
///   stiffness * (x^2 + p^2) - 1/2 sqrt(1 + (2 g_plus x)^2 + (2 g_minus p)^2).
struct LandauCoefficients {
  double g_plus;
  double g_minus;
  double stiffness = 1.0;
};

// Dispatching entry points.
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
void csr_matvec(const CsrView& m, std::span<const double> x, std::span<double> y);
void landau_energy_row(const LandauCoefficients& c, std::span<const double> xs, double p,
                       std::span<double> out);

// Function table of one backend.
struct KernelTable {
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  void (*scale)(double, std::span<double>);
  void (*csr_matvec)(const CsrView&, std::span<const double>, std::span<double>);
  void (*landau_energy_row)(const LandauCoefficients&, std::span<const double>, double,
                            std::span<double>);
};

/// Table for a specific backend, for equivalence testing. Throws if unsupported.
const KernelTable& kernels_for(Backend b);

namespace scalar {
const KernelTable& table();
}
#if defined(ECSYM_HAVE_AVX2_KERNELS)
namespace avx2 {
const KernelTable& table();
}
#endif
#if defined(ECSYM_HAVE_NEON_KERNELS)
namespace neon {
const KernelTable& table();
}
#endif

}  // namespace ecsym::simd
