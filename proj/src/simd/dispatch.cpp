#include "ecsym/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "ecsym/error.hpp"

namespace ecsym::simd {
namespace {

bool cpu_has_avx2() {
#if defined(ECSYM_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("ECSYM_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && backend_supported(Backend::Avx2)) return Backend::Avx2;
    if (want == "neon" && backend_supported(Backend::Neon)) return Backend::Neon;
  }
  if (backend_supported(Backend::Avx2)) return Backend::Avx2;
  if (backend_supported(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

struct State {
  std::atomic<Backend> backend{detect()};
  std::atomic<const KernelTable*> table{&kernels_for(backend.load())};
};

State& state() {
  static State s;
  return s;
}

inline const KernelTable& active() { return *state().table.load(std::memory_order_relaxed); }

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return cpu_has_avx2();
    case Backend::Neon:
#if defined(ECSYM_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Backend b) {
  if (!backend_supported(b)) {
    throw Error(ErrorKind::InvalidArgument,
                "SIMD backend '" + std::string(backend_name(b)) + "' not available");
  }
  switch (b) {
#if defined(ECSYM_HAVE_AVX2_KERNELS)
    case Backend::Avx2: return avx2::table();
#endif
#if defined(ECSYM_HAVE_NEON_KERNELS)
    case Backend::Neon: return neon::table();
#endif
    default: return scalar::table();
  }
}

Backend active_backend() { return state().backend.load(); }

void set_backend(Backend b) {
  const KernelTable& t = kernels_for(b);
  state().backend.store(b);
  state().table.store(&t);
}

double dot(std::span<const double> x, std::span<const double> y) { return active().dot(x, y); }

void axpy(double a, std::span<const double> x, std::span<double> y) { active().axpy(a, x, y); }

void scale(double a, std::span<double> x) { active().scale(a, x); }

void csr_matvec(const CsrView& m, std::span<const double> x, std::span<double> y) {
  active().csr_matvec(m, x, y);
}

void landau_energy_row(const LandauCoefficients& c, std::span<const double> xs, double p,
                       std::span<double> out) {
  active().landau_energy_row(c, xs, p, out);
}

}  // namespace ecsym::simd
