#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ecsym/error.hpp"
#include "ecsym/quadratic_boson.hpp"
#include "gen.hpp"

using namespace ecsym;
using namespace ecsym::boson;

namespace {

double bits(double n) {
  if (n <= 0.0) return 0.0;
  return (n + 1.0) * std::log2(n + 1.0) - n * std::log2(n);
}

// Two-mode squeezed vacuum of w1 a^dag a + w2 b^dag b + k (ab + h.c.).
double two_mode_entropy(double w1, double w2, double k) {
  const double r = 0.5 * std::atanh(2.0 * k / (w1 + w2));
  return bits(std::sinh(r) * std::sinh(r));
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("single-mode squeezing: frequency and zero-point shift") {
  testgen::Gen g(1);
  for (int k = 0; k < 50; ++k) {
    const double w = g.uniform(0.5, 3.0);
    const double kappa = g.uniform(-0.95, 0.95) * w;
    QuadraticBosonForm f(1);
    f.conserving(0, 0) = w;
    f.add_pairing(0, 0, kappa);
    const SymplecticSpectrum s = diagonalize(f);
    REQUIRE(s.stable);
    const double eps = std::sqrt(w * w - kappa * kappa);
    CHECK(s.mode_energies[0] == doctest::Approx(eps).epsilon(1e-12));
    CHECK(ground_state_covariance(f).ground_energy == doctest::Approx(0.5 * (eps - w)).epsilon(1e-12));
  }
}

TEST_CASE("two-mode squeezing: energies and entropy") {
  testgen::Gen g(2);
  const int first[] = {0};
  const int second[] = {1};
  for (int k = 0; k < 50; ++k) {
    const double w1 = g.uniform(0.5, 3.0);
    const double w2 = g.uniform(0.5, 3.0);
    const double kappa = g.uniform(-0.95, 0.95) * std::sqrt(w1 * w2);  // stable iff kappa^2 < w1 w2
    QuadraticBosonForm f(2);
    f.conserving(0, 0) = w1;
    f.conserving(1, 1) = w2;
    f.add_pairing(0, 1, kappa);
    const SymplecticSpectrum s = diagonalize(f);
    REQUIRE(s.stable);
    const double mean = 0.5 * (w1 + w2);
    const double root = std::sqrt(mean * mean - kappa * kappa);
    const double half = 0.5 * std::abs(w1 - w2);
    CHECK(s.mode_energies[0] == doctest::Approx(root - half).epsilon(1e-10));
    CHECK(s.mode_energies[1] == doctest::Approx(root + half).epsilon(1e-10));
    const GaussianGround gs = ground_state_covariance(f);
    CHECK(gs.ground_energy == doctest::Approx(root - mean).epsilon(1e-10));
    const double expected = two_mode_entropy(w1, w2, kappa);
    CHECK(entanglement_entropy(gs, first) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(entanglement_entropy(gs, second) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("number-conserving forms have a factorized vacuum") {
  testgen::Gen g(3);
  for (int k = 0; k < 30; ++k) {
    const int n = g.integer(2, 5);
    QuadraticBosonForm f(n);
    for (int i = 0; i < n; ++i) f.conserving(i, i) = g.uniform(2.0, 3.0);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) f.add_hopping(i, j, g.complex_in(0.3, true));
    }
    CHECK(is_particle_conserving(f));
    const GaussianGround gs = ground_state_covariance(f);
    CHECK(std::abs(gs.ground_energy) < 1e-12);
    std::vector<int> part{0};
    if (n > 2) part.push_back(n - 1);
    CHECK(entanglement_entropy(gs, part) < 1e-12);
    // Mode energies are the eigenvalues of the hopping matrix.
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(f.conserving, Eigen::EigenvaluesOnly).eigenvalues();
    const SymplecticSpectrum s = diagonalize(f);
    for (int i = 0; i < n; ++i) CHECK(s.mode_energies[i] == doctest::Approx(ev(i)).epsilon(1e-10));
  }
}

TEST_CASE("random stable forms give pure, physical Gaussian states") {
  testgen::Gen g(4);
  for (int k = 0; k < 60; ++k) {
    const int n = g.integer(1, 5);
    const QuadraticBosonForm f = g.stable_form(n, g.coin());
    const GaussianGround gs = ground_state_covariance(f);
    const Eigen::MatrixXd& sigma = gs.covariance;
    CHECK((sigma - sigma.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    // Uncertainty principle: sigma + i Omega / 2 >= 0.
    const Eigen::MatrixXcd u = sigma.cast<std::complex<double>>() +
                               std::complex<double>(0, 0.5) * symplectic_form(n).cast<std::complex<double>>();
    const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(u, Eigen::EigenvaluesOnly).eigenvalues()(0);
    CHECK(lowest > -1e-10);
    for (double nu : symplectic_eigenvalues(sigma)) CHECK(nu == doctest::Approx(0.5).epsilon(1e-9));
    if (n >= 2) {
      // Pure state: a subsystem and its complement carry the same entropy.
      std::vector<int> a;
      std::vector<int> b;
      for (int i = 0; i < n; ++i) (g.coin() ? a : b).push_back(i);
      if (a.empty() || b.empty()) continue;
      CHECK(entanglement_entropy(gs, a) == doctest::Approx(entanglement_entropy(gs, b)).epsilon(1e-8));
    }
  }
}

TEST_CASE("ground energy is the zero-point sum minus half the trace") {
  testgen::Gen g(5);
  for (int k = 0; k < 40; ++k) {
    const int n = g.integer(1, 4);
    const QuadraticBosonForm f = g.stable_form(n, g.coin());
    const SymplecticSpectrum s = diagonalize(f);
    const double sum = std::accumulate(s.mode_energies.begin(), s.mode_energies.end(), 0.0);
    const double expected = 0.5 * sum - 0.5 * f.conserving.trace().real() + f.offset;
    CHECK(ground_state_covariance(f).ground_energy == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("mode relabelling leaves energies and entropies unchanged") {
  testgen::Gen g(6);
  for (int k = 0; k < 20; ++k) {
    const QuadraticBosonForm f = g.stable_form(3, true);
    QuadraticBosonForm p(3);
    const int perm[3] = {2, 0, 1};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        p.conserving(perm[i], perm[j]) = f.conserving(i, j);
        p.anomalous(perm[i], perm[j]) = f.anomalous(i, j);
      }
    }
    const int a[] = {0};
    const int pa[] = {2};
    CHECK(entanglement_entropy(ground_state_covariance(f), a) ==
          doctest::Approx(entanglement_entropy(ground_state_covariance(p), pa)).epsilon(1e-9));
    const auto e1 = diagonalize(f).mode_energies;
    const auto e2 = diagonalize(p).mode_energies;
    for (int i = 0; i < 3; ++i) CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-10));
  }
}

TEST_CASE("instability and zero modes are reported") {
  QuadraticBosonForm f(1);
  f.conserving(0, 0) = 1.0;
  f.add_pairing(0, 0, 1.5);
  CHECK_FALSE(diagonalize(f).stable);
  CHECK(kind_of([&] { ground_state_covariance(f); }) == ErrorKind::Unstable);

  QuadraticBosonForm z(1);
  z.conserving(0, 0) = 1.0;
  z.add_pairing(0, 0, 1.0);
  const SymplecticSpectrum s = diagonalize(z);
  CHECK(s.stable);
  CHECK(s.degenerate);
  CHECK(kind_of([&] { ground_state_covariance(z); }) == ErrorKind::Degenerate);

  QuadraticBosonForm neg(1);
  neg.conserving(0, 0) = -1.0;
  CHECK_FALSE(diagonalize(neg).stable);
}

TEST_CASE("malformed forms and partitions are rejected") {
  QuadraticBosonForm f(2);
  f.conserving(0, 0) = 1.0;
  f.conserving(1, 1) = 1.0;
  f.conserving(0, 1) = 0.3;  // not Hermitian without the (1, 0) partner
  CHECK(kind_of([&] { f.validate(); }) == ErrorKind::InvalidArgument);
  f.conserving(1, 0) = 0.3;
  f.anomalous(0, 1) = 0.2;
  CHECK(kind_of([&] { f.validate(); }) == ErrorKind::InvalidArgument);
  f.anomalous(1, 0) = 0.2;
  CHECK_NOTHROW(f.validate());

  const GaussianGround gs = ground_state_covariance(f);
  CHECK(kind_of([&] { entanglement_entropy(gs, std::vector<int>{}); }) == ErrorKind::BadPartition);
  CHECK(kind_of([&] { entanglement_entropy(gs, std::vector<int>{0, 1}); }) == ErrorKind::BadPartition);
  CHECK(kind_of([&] { entanglement_entropy(gs, std::vector<int>{2}); }) == ErrorKind::BadPartition);
  CHECK(kind_of([&] { entanglement_entropy(gs, std::vector<int>{-1}); }) == ErrorKind::BadPartition);
  CHECK(kind_of([&] { entanglement_entropy(gs, std::vector<int>{0, 0}); }) == ErrorKind::BadPartition);
}

TEST_CASE("entropy of symplectic spectra") {
  const double vac[] = {0.5, 0.5};
  CHECK(entropy_bits(vac) == 0.0);
  // nu = n + 1/2 for a thermal mode of occupation n.
  const double one[] = {1.5};
  CHECK(entropy_bits(one) == doctest::Approx(bits(1.0)));
  CHECK(bits(1.0) == doctest::Approx(2.0));
}

TEST_CASE("quadrature matrix of a stable form is positive definite") {
  testgen::Gen g(7);
  for (int k = 0; k < 20; ++k) {
    const QuadraticBosonForm f = g.stable_form(g.integer(1, 4), g.coin());
    const Eigen::MatrixXd m = quadrature_matrix(f);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues()(0) > 0.0);
  }
}

TEST_CASE("worked values") {
  QuadraticBosonForm hop(2);
  hop.conserving(0, 0) = hop.conserving(1, 1) = 1.0;
  hop.add_hopping(0, 1, 0.25);
  const auto h = diagonalize(hop).mode_energies;
  CHECK(h[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(h[1] == doctest::Approx(1.25).epsilon(1e-14));
  CHECK((ground_state_covariance(hop).covariance - 0.5 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

  QuadraticBosonForm sq(2);
  sq.conserving(0, 0) = sq.conserving(1, 1) = 1.0;
  sq.add_pairing(0, 1, 0.6);
  const SymplecticSpectrum s = diagonalize(sq);
  CHECK(s.stable);
  CHECK(s.mode_energies[0] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(s.mode_energies[1] == doctest::Approx(0.8).epsilon(1e-14));
  const GaussianGround gs = ground_state_covariance(sq);
  const int a[] = {0};
  const int b[] = {1};
  const auto nu = symplectic_eigenvalues(reduced_covariance(gs, a));
  CHECK(nu[0] == doctest::Approx(0.625).epsilon(1e-13));
  // S(nu) = (nu + 1/2) log2(nu + 1/2) - (nu - 1/2) log2(nu - 1/2)
  const double expected = 1.125 * std::log2(1.125) - 0.125 * std::log2(0.125);
  CHECK(entanglement_entropy(gs, a) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(entanglement_entropy(gs, a) == doctest::Approx(0.56617).epsilon(1e-5));
  CHECK(entanglement_entropy(gs, b) == doctest::Approx(expected).epsilon(1e-12));

  QuadraticBosonForm one(1);
  one.conserving(0, 0) = 1.0;
  one.offset = 0.37;
  CHECK(ground_state_covariance(one).ground_energy == doctest::Approx(0.37));
  CHECK(is_particle_conserving(one));
  CHECK_FALSE(is_particle_conserving(sq));
}
