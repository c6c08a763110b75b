#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ecsym/ed_oracle.hpp"
#include "ecsym/error.hpp"
#include "gen.hpp"

using namespace ecsym;
using namespace ecsym::ed;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::InvalidArgument;
}

long double lfact(long double x) { return std::lgamma(x + 1.0L); }

// Racah's closed formula for <j1 m1; j2 m2 | J M>, general J.
double racah_cg(double j1, double m1, double j2, double m2, double jj) {
  const double mm = m1 + m2;
  long double pre = 0.5L * (std::log(2.0L * jj + 1.0L) + lfact(jj + j1 - j2) + lfact(jj - j1 + j2) +
                            lfact(j1 + j2 - jj) - lfact(j1 + j2 + jj + 1.0L));
  pre += 0.5L * (lfact(jj + mm) + lfact(jj - mm) + lfact(j1 - m1) + lfact(j1 + m1) + lfact(j2 - m2) +
                 lfact(j2 + m2));
  long double sum = 0.0L;
  for (int k = 0; k <= 200; ++k) {
    const long double d[] = {static_cast<long double>(k), j1 + j2 - jj - k, j1 - m1 - k, j2 + m2 - k,
                             jj - j2 + m1 + k, jj - j1 - m2 + k};
    bool ok = true;
    for (long double x : d) ok = ok && x > -0.5L;
    if (!ok) continue;
    long double den = 0.0L;
    for (long double x : d) den += lfact(std::round(x));
    sum += (k % 2 ? -1.0L : 1.0L) * std::exp(pre - den);
  }
  return static_cast<double>(sum);
}

double entropy_from_rho(const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd rho = a * a.adjoint();
  const Eigen::VectorXd w = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho, Eigen::EigenvaluesOnly).eigenvalues();
  double s = 0.0;
  for (int i = 0; i < w.size(); ++i) {
    if (w(i) > 1e-300) s -= w(i) * std::log2(w(i));
  }
  return s;
}

}  // namespace

TEST_CASE("Schmidt entropy") {
  Eigen::MatrixXcd bell = Eigen::MatrixXcd::Zero(2, 2);
  bell(0, 0) = bell(1, 1) = std::sqrt(0.5);
  CHECK(schmidt_entropy_bits(bell) == doctest::Approx(1.0).epsilon(1e-14));
  Eigen::MatrixXcd prod = Eigen::VectorXcd::Ones(3) * Eigen::VectorXcd::Ones(4).transpose() / std::sqrt(12.0);
  CHECK(std::abs(schmidt_entropy_bits(prod)) < 1e-12);

  testgen::Gen g(1);
  for (int k = 0; k < 30; ++k) {
    const int r = g.integer(1, 7);
    const int c = g.integer(1, 7);
    Eigen::MatrixXcd a(r, c);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) a(i, j) = g.complex_in(1.0, true);
    }
    a /= a.norm();
    CHECK(schmidt_entropy_bits(a) == doctest::Approx(entropy_from_rho(a)).epsilon(1e-10));
  }
}

TEST_CASE("stretched Clebsch-Gordan coefficients agree with Racah's formula") {
  testgen::Gen g(2);
  for (int k = 0; k < 300; ++k) {
    const double j1 = 0.5 * g.integer(0, 40);
    const double j2 = 0.5 * g.integer(0, 40);
    const double m1 = -j1 + g.integer(0, static_cast<int>(2 * j1));
    const double m2 = -j2 + g.integer(0, static_cast<int>(2 * j2));
    INFO(j1 << " " << m1 << " " << j2 << " " << m2);
    CHECK(stretched_clebsch_gordan(j1, m1, j2, m2) == doctest::Approx(racah_cg(j1, m1, j2, m2, j1 + j2)).epsilon(1e-10));
  }
  // Completeness in the stretched multiplet: sum over m1 at fixed M is one.
  for (double big_m : {-3.0, 0.0, 1.0, 5.0}) {
    double total = 0.0;
    for (double m1 = -4.0; m1 <= 4.0; m1 += 1.0) {
      const double c = stretched_clebsch_gordan(4.0, m1, 3.0, big_m - m1);
      total += c * c;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(stretched_clebsch_gordan(1.0, 2.0, 1.0, 0.0) == 0.0);
}

TEST_CASE("coherent states") {
  testgen::Gen g(3);
  for (int k = 0; k < 20; ++k) {
    const std::complex<double> alpha = g.complex_in(2.0, true);
    const Eigen::VectorXcd v = coherent_state(alpha, 80);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // a |alpha> = alpha |alpha>
    for (int n = 0; n < 40; ++n) CHECK(std::abs(std::sqrt(n + 1.0) * v(n + 1) - alpha * v(n)) < 1e-12);

    const double j = 0.5 * g.integer(1, 40);
    const double th = g.uniform(0, std::numbers::pi);
    const double ph = g.uniform(0, 2 * std::numbers::pi);
    const Eigen::VectorXcd s = spin_coherent_state(j, th, ph);
    CHECK(s.size() == static_cast<int>(2 * j) + 1);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    double jz = 0.0;
    for (int i = 0; i < s.size(); ++i) jz += std::norm(s(i)) * (i - j);
    CHECK(jz == doctest::Approx(j * std::cos(th)).epsilon(1e-10));
  }
  const Eigen::VectorXcd up = spin_coherent_state(2.0, 0.0, 0.0);
  CHECK(std::abs(up(4)) == doctest::Approx(1.0));
}

TEST_CASE("quadratic forms: Fock-space ground state matches the Gaussian solution") {
  testgen::Gen g(4);
  const int first[] = {0};
  for (int k = 0; k < 12; ++k) {
    const int n = 1 + k % 3;
    const bool complex_entries = g.coin();
    const boson::QuadraticBosonForm f = g.stable_form(n, complex_entries);
    const int cutoff = n == 1 ? 40 : (n == 2 ? 30 : 12);
    const EdResult r = quadratic_ed(f, cutoff);
    const boson::GaussianGround gs = boson::ground_state_covariance(f);
    INFO("modes " << n << " complex " << complex_entries);
    CHECK(r.converged);
    CHECK(r.ground_energy == doctest::Approx(gs.ground_energy).epsilon(1e-6));
    if (n > 1) {
      std::vector<int> rest;
      for (int i = 1; i < n; ++i) rest.push_back(i);
      CHECK(std::abs(r.entropy_bits - boson::entanglement_entropy(gs, first)) < 1e-5);
    } else {
      CHECK(r.entropy_bits == 0.0);
    }
  }
}

TEST_CASE("quadratic_ed refuses unstable forms and oversized problems") {
  boson::QuadraticBosonForm f(1);
  f.conserving(0, 0) = 1.0;
  f.add_pairing(0, 0, 2.0);
  CHECK(kind_of([&] { quadratic_ed(f, 10); }) == ErrorKind::Unstable);
  testgen::Gen g(5);
  CHECK(kind_of([&] { quadratic_ed(g.stable_form(4, false), 5); }) == ErrorKind::OutOfMemoryBudget);
}

TEST_CASE("Dicke: exact product ground state on the number-conserving line") {
  // With w0 = W and g+ g- = 1 the finite-N ground state is a product of
  // coherent states with energy -N (g^2 + 1/g^2) / 4.
  for (int n : {4, 8, 16}) {
    const auto p = dicke::DickeParams::from_couplings(2.0, 0.5);
    const EdResult r = dicke_ed(p, n);
    CHECK(r.converged);
    CHECK(r.entropy_bits < 1e-8);
    CHECK(r.ground_energy == doctest::Approx(-n * (4.0 + 0.25) / 4.0).epsilon(1e-10));
    CHECK(r.product_fidelity == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("Dicke: finite-size entropy approaches the Gaussian value") {
  for (auto [gp, gm] : {std::pair{0.6, 0.1}, std::pair{2.0, -0.5}}) {
    const auto p = dicke::DickeParams::from_couplings(gp, gm);
    const double target = dicke::ground_state_entropy(p);
    double last = 1e300;
    for (int n : {8, 16, 32}) {
      const EdResult r = dicke_ed(p, n);
      INFO("g+=" << gp << " g-=" << gm << " N=" << n);
      CHECK(r.converged);
      const double err = std::abs(r.entropy_bits - target);
      CHECK(err < last);
      last = err;
    }
    CHECK(last < 0.01);
  }
}

TEST_CASE("Dicke: normal-phase ground energy has the mean-field leading term") {
  const auto p = dicke::DickeParams::from_couplings(0.5, 0.2);
  const EdResult r = dicke_ed(p, 24);
  // -N W / 2 plus the O(1) zero-point shift of the Gaussian modes.
  const double shift = boson::ground_state_covariance(dicke::effective_hamiltonian(p)).ground_energy;
  CHECK(r.ground_energy == doctest::Approx(-12.0 + shift).epsilon(5e-3));
  CHECK(r.parity_gap > 0.1);
}

TEST_CASE("Dicke matrix") {
  const auto p = dicke::DickeParams::from_couplings(1.3, -0.4, 1.2, 0.8);
  const auto m = dicke_matrix(p, 6, 10);
  CHECK(m.rows() == 7 * 11);
  const Eigen::MatrixXd d(m);
  CHECK((d - d.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  // Without coupling the spectrum is w0 n + W m.
  const auto free = dicke_matrix(dicke::DickeParams::from_couplings(0, 0, 1.2, 0.8), 6, 10);
  const Eigen::VectorXd diag = Eigen::MatrixXd(free).diagonal();
  CHECK(diag(0) == doctest::Approx(-3 * 0.8));
  CHECK(diag(7) == doctest::Approx(1.2 - 3 * 0.8));
}

TEST_CASE("Dicke: size and cutoff limits") {
  const auto p = dicke::DickeParams::from_couplings(0.5, 0.2);
  CHECK(kind_of([&] { dicke_ed(p, kMaxAtoms + 2); }) == ErrorKind::OutOfMemoryBudget);
  DickeEdOptions o;
  o.fock_cutoff = kMaxCutoff + 1;
  CHECK(kind_of([&] { dicke_ed(p, 8, o); }) == ErrorKind::OutOfMemoryBudget);
  CHECK(kind_of([&] { dicke_ed(p, 7); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("LMG: half/half entropy") {
  const lmg::LmgParams generic{1.0, 2.0, 0.25, 0};
  const double target = lmg::two_block_entropy(generic);
  double last = 1e300;
  for (int n : {8, 16, 32, 64}) {
    const EdResult r = lmg_ed(generic, n);
    const Eigen::MatrixXd m = lmg::lmg_matrix(generic, n);
    const double e0 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
    CHECK(r.ground_energy == doctest::Approx(e0).epsilon(1e-10));
    const double err = std::abs(r.entropy_bits - target);
    CHECK(err < last);
    last = err;
  }
  CHECK(last < 2e-3);

  // On gx gy = h^2 the entropy goes to zero with N.
  const lmg::LmgParams line{0.5, 1.0, 0.25, 0};
  double prev = 1e300;
  for (int n : {8, 16, 32, 64}) {
    const double s = lmg_ed(line, n).entropy_bits;
    CHECK(s < prev);
    prev = s;
  }
  CHECK(prev < 1e-3);

  // Polarized diagonal: exact eigenstate |j, j>, no entanglement.
  CHECK(lmg_ed(lmg::LmgParams{1.0, 0.4, 0.4, 0}, 16).entropy_bits < 1e-10);
}

TEST_CASE("LMG: size limits") {
  const lmg::LmgParams p{1.0, 0.5, 0.2, 0};
  CHECK(kind_of([&] { lmg_ed(p, 10); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { lmg_ed(p, kMaxLmgSpins + 4); }) == ErrorKind::OutOfMemoryBudget);
}

TEST_CASE("worked values") {
  // Equal couplings below threshold: no excitations, bare vacuum.
  const EdResult rwa = dicke_ed(dicke::DickeParams::from_couplings(0.4, 0.4), 8);
  CHECK(rwa.entropy_bits < 1e-12);
  CHECK(rwa.ground_energy == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(rwa.product_fidelity == doctest::Approx(1.0).epsilon(1e-8));

  double prev = 1e300;
  for (int n : {8, 16, 32}) {
    const double s = dicke_ed(dicke::DickeParams::from_couplings(2.0, 0.5), n).entropy_bits;
    CHECK(s <= prev);
    prev = s;
  }
  CHECK(prev < 1e-6);
  const EdResult anti = dicke_ed(dicke::DickeParams::from_couplings(2.0, -0.5), 16);
  CHECK(anti.entropy_bits > 0.01);
  CHECK(dicke_ed(dicke::DickeParams::from_couplings(2.0, -0.5), 32).product_fidelity < 0.999);

  // Superradiant reference point without a symmetry line.
  const auto sp = dicke::DickeParams::from_couplings(1.5, 0.0);
  const double gauss = dicke::ground_state_entropy(sp);
  double err = 1e300;
  for (int n : {8, 16, 32}) {
    const double e = std::abs(dicke_ed(sp, n).entropy_bits - gauss);
    CHECK(e < err);
    err = e;
  }
  CHECK(err < 0.02);

  CHECK(lmg_ed(lmg::LmgParams{0.7, 0.0, 0.0, 0}, 16).entropy_bits < 1e-12);
  CHECK(lmg_ed(lmg::LmgParams{1.0, 2.0, 0.5, 0}, 64).entropy_bits < 0.02);

  boson::QuadraticBosonForm diag(2);
  diag.conserving(0, 0) = 1.0;
  diag.conserving(1, 1) = 1.3;
  CHECK(quadratic_ed(diag, 10).entropy_bits < 1e-12);
  boson::QuadraticBosonForm sq(2);
  sq.conserving(0, 0) = sq.conserving(1, 1) = 1.0;
  sq.add_pairing(0, 1, 0.6);
  const EdResult q = quadratic_ed(sq, 40);
  CHECK(q.converged);
  CHECK(q.entropy_bits == doctest::Approx(0.56617).epsilon(1e-4));
  CHECK(q.ground_energy == doctest::Approx(boson::ground_state_covariance(sq).ground_energy).epsilon(1e-8));
}
