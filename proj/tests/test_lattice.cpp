#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ecsym/dicke_lattice.hpp"
#include "ecsym/error.hpp"
#include "gen.hpp"

using namespace ecsym;
using namespace ecsym::lattice;

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

LatticeParams make(const LatticeGeometry& geo, double gp, double gm, double j, double w0 = 1.0, double ws = 1.0) {
  LatticeParams p;
  p.dicke = dicke::DickeParams::from_couplings(gp, gm, w0, ws);
  p.hop_j = j;
  p.geometry = geo;
  return p;
}

// Band oracle. A uniform state makes the lattice translation invariant; the
// k = 0 sector is a single Dicke site whose cavity frequency absorbs the
// hopping, w0 + J z. Every other momentum only shifts the cavity frequency by
// J (eps_k - z), eps_k = sum over neighbours of cos(k . d).
std::vector<double> band_energies(const LatticeParams& p, const std::vector<double>& eps) {
  dicke::DickeParams site = p.dicke;
  site.omega0 += p.hop_j * p.geometry.coordination;
  const boson::QuadraticBosonForm base = dicke::effective_hamiltonian(site);
  std::vector<double> out;
  for (double e : eps) {
    boson::QuadraticBosonForm f = base;
    f.conserving(0, 0) += p.hop_j * (e - p.geometry.coordination);
    const auto s = boson::diagonalize(f);
    out.insert(out.end(), s.mode_energies.begin(), s.mode_energies.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> chain_eps(int n) {
  std::vector<double> eps;
  for (int m = 0; m < n; ++m) eps.push_back(2.0 * std::cos(2.0 * std::numbers::pi * m / n));
  return eps;
}

std::vector<double> torus_eps(int lx, int ly) {
  std::vector<double> eps;
  for (int a = 0; a < lx; ++a) {
    for (int b = 0; b < ly; ++b) {
      eps.push_back(2.0 * std::cos(2.0 * std::numbers::pi * a / lx) + 2.0 * std::cos(2.0 * std::numbers::pi * b / ly));
    }
  }
  return eps;
}

double entropy(const LatticeParams& p, const std::vector<int>& part) {
  return boson::entanglement_entropy(boson::ground_state_covariance(effective_lattice_hamiltonian(p)), part);
}

}  // namespace

TEST_CASE("geometry builders") {
  const auto c = LatticeGeometry::chain(5);
  CHECK(c.n_sites == 5);
  CHECK(c.edges.size() == 5);
  CHECK(c.coordination == 2);
  const auto t = LatticeGeometry::torus(3, 4);
  CHECK(t.n_sites == 12);
  CHECK(t.edges.size() == 24);
  CHECK(t.coordination == 4);
  const auto h = LatticeGeometry::hypercubic(3, 3);
  CHECK(h.n_sites == 27);
  CHECK(h.edges.size() == 81);
  CHECK(h.coordination == 6);
  const auto tri = LatticeGeometry::triangle();
  CHECK(tri.edges.size() == 3);
  CHECK(tri.coordination == 2);
  for (const auto& g : {c, t, h, tri}) CHECK_NOTHROW(g.validate());
}

TEST_CASE("malformed geometries are rejected") {
  CHECK(kind_of([] { LatticeGeometry::chain(2); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { LatticeGeometry::torus(2, 5); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { LatticeGeometry::hypercubic(3, 4); }) == ErrorKind::InvalidArgument);
  // self-loop
  CHECK(kind_of([] { LatticeGeometry::from_edges(2, {{0, 0}, {1, 1}}); }) == ErrorKind::InvalidArgument);
  // repeated edge, in either orientation
  CHECK(kind_of([] { LatticeGeometry::from_edges(3, {{0, 1}, {1, 0}, {1, 2}, {2, 0}}); }) == ErrorKind::InvalidArgument);
  // not regular
  CHECK(kind_of([] { LatticeGeometry::from_edges(3, {{0, 1}, {1, 2}}); }) == ErrorKind::InvalidArgument);
  // disconnected: two triangles
  CHECK(kind_of([] {
          LatticeGeometry::from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
        }) == ErrorKind::InvalidArgument);
  // out of range
  CHECK(kind_of([] { LatticeGeometry::from_edges(3, {{0, 1}, {1, 2}, {2, 3}}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("hopping must be non-positive and keep the cavity gapped") {
  const auto geo = LatticeGeometry::chain(6);
  CHECK(kind_of([&] { make(geo, 0.5, 0.1, 0.1).validate(); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { make(geo, 0.5, 0.1, -0.5).validate(); }) == ErrorKind::InvalidArgument);
  CHECK_NOTHROW(make(geo, 0.5, 0.1, -0.49).validate());
}

TEST_CASE("critical coupling is sqrt(1 + J z / w0)") {
  testgen::Gen g(1);
  for (int k = 0; k < 20; ++k) {
    const double w0 = g.uniform(0.5, 2.0);
    const double j = -g.uniform(0.0, 0.24) * w0;
    const auto p = make(LatticeGeometry::torus(3, 3), 0.5, 0.1, j, w0);
    CHECK(critical_coupling(p) == doctest::Approx(std::sqrt(1.0 + 4.0 * j / w0)).epsilon(1e-14));
    CHECK(uniform_potential(p).stiffness == doctest::Approx(1.0 + 4.0 * j / w0).epsilon(1e-14));
  }
}

TEST_CASE("gap of the unbroken state closes at g_c") {
  const auto geo = LatticeGeometry::chain(8);
  testgen::Gen g(2);
  for (int k = 0; k < 10; ++k) {
    const double a = g.uniform(0, 2 * std::numbers::pi);
    const double gc = critical_coupling(make(geo, 0, 0, -0.2));
    auto lowest = [&](double r) {
      const auto p = make(geo, r * std::cos(a), r * std::sin(a), -0.2);
      const Eigen::MatrixXd m = boson::quadrature_matrix(normal_phase_lattice_hamiltonian(p));
      return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
    };
    const double scale = 1.0 / std::max(std::abs(std::cos(a)), std::abs(std::sin(a)));
    CHECK(lowest(0.99 * gc * scale) > 0.0);
    CHECK(lowest(1.01 * gc * scale) < 0.0);
  }
}

TEST_CASE("uniform mean field matches the rescaled Landau minimum") {
  testgen::Gen g(3);
  const auto geo = LatticeGeometry::torus(3, 3);
  for (int k = 0; k < 40; ++k) {
    const double j = -g.uniform(0.0, 0.2);
    const double s = 1.0 + 4.0 * j;
    const double big = g.signed_magnitude(1.02, 3.0);
    const double small = g.uniform(-0.9, 0.9) * std::abs(big);
    const bool x_axis = g.coin();
    const auto p = x_axis ? make(geo, big, small, j) : make(geo, small, big, j);
    const auto mf = mean_field_uniform(p);
    const double r = std::sqrt(std::pow(big, 4) / (s * s) - 1.0) / (2.0 * std::abs(big));
    CHECK(std::abs(x_axis ? mf.minimum.x_bar : mf.minimum.p_bar) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("mode energies follow the band structure") {
  testgen::Gen g(4);
  for (int k = 0; k < 40; ++k) {
    const bool chain = g.coin();
    const auto geo = chain ? LatticeGeometry::chain(g.integer(3, 9)) : LatticeGeometry::torus(3, g.integer(3, 4));
    const double j = -g.uniform(0.0, 0.2) / geo.coordination;
    const auto p = make(geo, g.uniform(-3, 3), g.uniform(-3, 3), j, g.uniform(0.7, 1.5), g.uniform(0.7, 1.5));
    const double gc = critical_coupling(p);
    const double gp = p.dicke.g_plus();
    const double gm = p.dicke.g_minus();
    if (std::abs(std::max(std::abs(gp), std::abs(gm)) - gc) < 1e-2) continue;
    if (std::max(std::abs(gp), std::abs(gm)) > gc && std::abs(std::abs(gp) - std::abs(gm)) < 1e-2) continue;
    const auto eps = chain ? chain_eps(geo.n_sites) : torus_eps(3, geo.n_sites / 3);
    const auto expected = band_energies(p, eps);
    const auto got = boson::diagonalize(effective_lattice_hamiltonian(p)).mode_energies;
    INFO("g+=" << gp << " g-=" << gm << " J=" << j << " N=" << geo.n_sites);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-9));
  }
}

TEST_CASE("ground state factorizes on g+ g- = g_c^2") {
  testgen::Gen g(5);
  for (int k = 0; k < 20; ++k) {
    const auto geo = g.coin() ? LatticeGeometry::chain(8) : LatticeGeometry::torus(3, 3);
    const double j = -g.uniform(0.0, 0.4) / geo.coordination;
    const double gc = std::sqrt(1.0 + j * geo.coordination);
    const double big = g.signed_magnitude(1.05, 3.0) * gc;
    const double small = gc * gc / big;  // same sign: the number-conserving branch
    const bool swap = g.coin();
    const auto p = swap ? make(geo, small, big, j) : make(geo, big, small, j);
    CHECK(std::abs(factorization_residual(p)) < 1e-12);
    const auto f = effective_lattice_hamiltonian(p);
    CHECK(f.anomalous.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(entropy(p, half_lattice_partition(geo)) < 1e-10);
    CHECK(entropy(p, site_partition(geo, {0})) < 1e-10);
    CHECK(entropy(p, {0}) < 1e-10);  // cavity of site 0 alone

    // Opposite signs: pure pairing, entangled.
    const auto anti = swap ? make(geo, -small, big, j) : make(geo, big, -small, j);
    CHECK(std::abs(factorization_residual(anti)) < 1e-12);
    CHECK(entropy(anti, {0}) > 1e-4);
  }
}

TEST_CASE("generic couplings entangle the sites") {
  const auto geo = LatticeGeometry::chain(8);
  const auto p = make(geo, 1.5, 0.2, -0.1);
  CHECK(entropy(p, half_lattice_partition(geo)) > 1e-4);
  // Translation invariance: every single site carries the same entropy.
  const double s0 = entropy(p, site_partition(geo, {0}));
  CHECK(s0 > 1e-6);
  for (int j = 1; j < 8; ++j) CHECK(entropy(p, site_partition(geo, {j})) == doctest::Approx(s0).epsilon(1e-9));
}

TEST_CASE("without hopping the sites decouple into single Dicke models") {
  testgen::Gen g(6);
  const auto geo = LatticeGeometry::chain(4);
  for (int k = 0; k < 20; ++k) {
    const double gp = g.uniform(-3, 3);
    const double gm = g.uniform(-3, 3);
    if (std::abs(std::max(std::abs(gp), std::abs(gm)) - 1.0) < 1e-2 || std::abs(std::abs(gp) - std::abs(gm)) < 1e-2) continue;
    const auto p = make(geo, gp, gm, 0.0);
    CHECK(entropy(p, site_partition(geo, {1})) < 1e-10);
    CHECK(entropy(p, half_lattice_partition(geo)) < 1e-10);
    const double single = dicke::ground_state_entropy(p.dicke);
    CHECK(entropy(p, {2}) == doctest::Approx(single).epsilon(1e-9));
  }
}

TEST_CASE("the uniform state beats non-uniform configurations") {
  const auto geo = LatticeGeometry::chain(4);
  for (auto [gp, gm] : {std::pair{1.4, 0.3}, std::pair{0.2, 1.8}, std::pair{2.5, -1.0}}) {
    const auto p = make(geo, gp, gm, -0.2);
    const UniformityReport r = verify_uniform_minimum(p, 32);
    CHECK(r.uniform_wins());
    CHECK(r.max_site_spread < 1e-4);
    CHECK(r.starts == 32);
    // Its energy is N times the single-site uniform minimum.
    CHECK(r.uniform_energy == doctest::Approx(4.0 * mean_field_uniform(p).energy).epsilon(1e-10));
  }
  CHECK_FALSE(verify_uniform_minimum(make(geo, 1.4, 0.3, 0.0), 4).spread_checked);
  CHECK(kind_of([] { verify_uniform_minimum(make(LatticeGeometry::chain(17), 1.4, 0.3, -0.1), 4); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("site-resolved energy at the uniform configuration") {
  const auto geo = LatticeGeometry::chain(5);
  const auto p = make(geo, 1.6, -0.4, -0.15);
  const auto mf = mean_field_uniform(p);
  std::vector<double> xp;
  for (int i = 0; i < 5; ++i) {
    xp.push_back(mf.minimum.x_bar);
    xp.push_back(mf.minimum.p_bar);
  }
  CHECK(site_resolved_energy(p, xp) == doctest::Approx(5.0 * mf.energy).epsilon(1e-12));
  xp[0] += 0.1;
  CHECK(site_resolved_energy(p, xp) > 5.0 * mf.energy);
}

TEST_CASE("partitions") {
  const auto geo = LatticeGeometry::chain(6);
  CHECK(half_lattice_partition(geo) == std::vector<int>{0, 1, 2, 6, 7, 8});
  CHECK(site_partition(geo, {1, 4}) == std::vector<int>{1, 4, 7, 10});
  CHECK(kind_of([&] { site_partition(geo, {6}); }) == ErrorKind::BadPartition);
}

TEST_CASE("the critical surface is flagged") {
  const auto geo = LatticeGeometry::chain(4);
  const double gc = std::sqrt(1.0 - 0.4);
  CHECK(kind_of([&] { effective_lattice_hamiltonian(make(geo, gc, 0.1, -0.2)); }) == ErrorKind::OnBoundary);
}

TEST_CASE("worked values") {
  CHECK(critical_coupling(make(LatticeGeometry::chain(8), 0.5, 0.1, 0.0)) == 1.0);
  CHECK(critical_coupling(make(LatticeGeometry::chain(8), 0.5, 0.1, -0.2)) == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(critical_coupling(make(LatticeGeometry::torus(3, 3), 0.5, 0.1, -0.1)) == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));

  const auto on_line = make(LatticeGeometry::chain(8), 1.2, 0.5, -0.2);
  const auto mf = mean_field_uniform(on_line);
  CHECK(mf.minimum.x_bar * mf.minimum.x_bar == doctest::Approx((std::pow(1.2, 4) / 0.36 - 1.0) / (4 * 1.44)).epsilon(1e-13));
  CHECK(std::abs(factorization_residual(on_line)) < 1e-15);
  CHECK(boson::is_particle_conserving(effective_lattice_hamiltonian(on_line)));
  CHECK(entropy(on_line, half_lattice_partition(on_line.geometry)) < 1e-10);
  const auto off_line = make(LatticeGeometry::chain(8), 1.2, 0.6, -0.2);
  CHECK_FALSE(boson::is_particle_conserving(effective_lattice_hamiltonian(off_line)));
  CHECK(entropy(off_line, half_lattice_partition(off_line.geometry)) > 0.0);

  CHECK(std::abs(factorization_residual(make(LatticeGeometry::chain(4), 2.0, 0.5, 0.0))) < 1e-15);
  CHECK(factorization_residual(make(LatticeGeometry::chain(4), 1.0, 1.0, -0.2)) == doctest::Approx(0.4).epsilon(1e-14));

  // J = 0 reduces to landau_mf exactly.
  const auto free = mean_field_uniform(make(LatticeGeometry::chain(4), 2.0, 0.5, 0.0));
  CHECK(free.energy == landau::minimize_mf(landau::CouplingPair{2.0, 0.5}).energy);

  const auto ring = make(LatticeGeometry::chain(6), 0.5, 0.1, -0.05);
  const UniformityReport r = verify_uniform_minimum(ring, 16);
  CHECK(r.uniform_wins());
  CHECK(mean_field_uniform(ring).minimum.x_bar == 0.0);
  CHECK(verify_uniform_minimum(make(LatticeGeometry::chain(4), 1.2, 0.5, -0.2), 64).uniform_wins());
}
