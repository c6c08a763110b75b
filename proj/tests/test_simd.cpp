#include <cmath>
#include <vector>

#include "doctest.h"
#include "ecsym/error.hpp"
#include "ecsym/simd/kernels.hpp"
#include "gen.hpp"

using namespace ecsym::simd;

namespace {

std::vector<Backend> vector_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (backend_supported(b)) out.push_back(b);
  }
  return out;
}

std::vector<double> random_vec(testgen::Gen& g, int n) {
  std::vector<double> v(n);
  for (double& x : v) x = g.uniform(-2.0, 2.0);
  return v;
}

struct RandomCsr {
  std::vector<std::int32_t> row_ptr{0};
  std::vector<std::int32_t> col;
  std::vector<double> val;
  CsrView view() const { return {row_ptr, col, val}; }
};

RandomCsr random_csr(testgen::Gen& g, int n) {
  RandomCsr m;
  for (int r = 0; r < n; ++r) {
    const int nnz = g.integer(0, std::min(n, 13));
    for (int k = 0; k < nnz; ++k) {
      m.col.push_back(g.integer(0, n - 1));
      m.val.push_back(g.uniform(-1.0, 1.0));
    }
    m.row_ptr.push_back(static_cast<std::int32_t>(m.col.size()));
  }
  return m;
}

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(backend_supported(Backend::Scalar));
  CHECK(backend_name(Backend::Scalar) == "scalar");
  CHECK(kernels_for(Backend::Scalar).dot == scalar::table().dot);
}

TEST_CASE("unsupported backends are rejected") {
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (!backend_supported(b)) CHECK_THROWS_AS(kernels_for(b), ecsym::Error);
  }
}

TEST_CASE("vector kernels match the scalar reference on random inputs") {
  const KernelTable& ref = scalar::table();
  for (Backend b : vector_backends()) {
    const KernelTable& k = kernels_for(b);
    testgen::Gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = g.integer(0, 67);  // covers empty inputs and every tail length
      INFO("backend " << backend_name(b) << " n=" << n);
      const auto x = random_vec(g, n);
      const auto y = random_vec(g, n);

      double mag = 0.0;
      for (int i = 0; i < n; ++i) mag += std::abs(x[i] * y[i]);
      CHECK(std::abs(k.dot(x, y) - ref.dot(x, y)) <= 1e-14 * std::max(1.0, mag));

      const double a = g.uniform(-3.0, 3.0);
      auto y1 = y;
      auto y2 = y;
      k.axpy(a, x, y1);
      ref.axpy(a, x, y2);
      for (int i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (std::abs(a * x[i]) + std::abs(y[i])) + 1e-300);

      auto s1 = x;
      auto s2 = x;
      k.scale(a, s1);
      ref.scale(a, s2);
      for (int i = 0; i < n; ++i) CHECK(s1[i] == s2[i]);
    }
  }
}

TEST_CASE("csr matvec matches the scalar reference") {
  const KernelTable& ref = scalar::table();
  for (Backend b : vector_backends()) {
    const KernelTable& k = kernels_for(b);
    testgen::Gen g(23);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = g.integer(1, 90);
      const RandomCsr m = random_csr(g, n);
      const auto x = random_vec(g, n);
      std::vector<double> y1(n);
      std::vector<double> y2(n);
      k.csr_matvec(m.view(), x, y1);
      ref.csr_matvec(m.view(), x, y2);
      for (int r = 0; r < n; ++r) {
        double mag = 0.0;
        for (int e = m.row_ptr[r]; e < m.row_ptr[r + 1]; ++e) mag += std::abs(m.val[e] * x[m.col[e]]);
        CHECK(std::abs(y1[r] - y2[r]) <= 1e-14 * std::max(1.0, mag));
      }
    }
  }
}

TEST_CASE("landau energy row matches the scalar reference and the potential") {
  const KernelTable& ref = scalar::table();
  testgen::Gen g(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 70);
    const LandauCoefficients c{g.uniform(-3, 3), g.uniform(-3, 3), g.uniform(0.2, 2.0)};
    const auto xs = random_vec(g, n);
    const double p = g.uniform(-2, 2);
    std::vector<double> e_ref(n);
    ref.landau_energy_row(c, xs, p, e_ref);
    // Scalar kernel against the potential written out by hand.
    for (int i = 0; i < n; ++i) {
      const double x = xs[i];
      const double direct = c.stiffness * (x * x + p * p) -
                            0.5 * std::sqrt(1.0 + 4.0 * c.g_plus * c.g_plus * x * x + 4.0 * c.g_minus * c.g_minus * p * p);
      CHECK(e_ref[i] == doctest::Approx(direct).epsilon(1e-14));
    }
    for (Backend b : vector_backends()) {
      std::vector<double> e(n);
      kernels_for(b).landau_energy_row(c, xs, p, e);
      for (int i = 0; i < n; ++i) CHECK(std::abs(e[i] - e_ref[i]) <= 1e-13 * std::max(1.0, std::abs(e_ref[i])));
    }
  }
}

TEST_CASE("set_backend switches the dispatched kernels") {
  const Backend before = active_backend();
  set_backend(Backend::Scalar);
  CHECK(active_backend() == Backend::Scalar);
  std::vector<double> x{1, 2, 3};
  CHECK(dot(x, x) == 14.0);
  set_backend(before);
  CHECK(active_backend() == before);
}
