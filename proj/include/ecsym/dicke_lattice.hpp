#pragma once

// Dicke lattice: one anisotropic Dicke site per vertex of a regular periodic
// graph, coupled by photon hopping J sum_<jk> (a_j^dag a_k + h.c.) over
// unordered nearest-neighbour pairs, J <= 0.

#include <utility>
#include <vector>

#include "ecsym/dicke_model.hpp"
#include "ecsym/landau_mf.hpp"
#include "ecsym/quadratic_boson.hpp"

namespace ecsym::lattice {

struct LatticeGeometry {
  int n_sites = 0;
  std::vector<std::pair<int, int>> edges;  // unordered, each listed once
  int coordination = 0;

  /// Periodic ring of n >= 3 sites.
  static LatticeGeometry chain(int n);
  /// Periodic Lx x Ly square lattice, Lx, Ly >= 3.
  static LatticeGeometry torus(int lx, int ly);
  /// Periodic hypercubic lattice of side l >= 3 in d = 1, 2 or 3 dimensions.
  static LatticeGeometry hypercubic(int l, int d);
  /// Three mutually connected sites (z = 2).
  static LatticeGeometry triangle();
  /// Arbitrary edge list; validated.
  static LatticeGeometry from_edges(int n_sites, std::vector<std::pair<int, int>> edges);

  /// Throws InvalidArgument unless the graph is z-regular, connected, without
  /// self-loops or repeated edges.
  void validate() const;
};

struct LatticeParams {
  dicke::DickeParams dicke;
  double hop_j = 0.0;
  LatticeGeometry geometry;

  /// Throws InvalidArgument for J > 0 or 1 + J z / w0 <= 0.
  void validate() const;
};

/// sqrt(1 + J z / w0).
double critical_coupling(const LatticeParams& p);

/// Landau potential with stiffness g_c^2 shared by every site.
landau::Potential uniform_potential(const LatticeParams& p);

/// Minimum of the uniform per-site energy g_c^2 (x^2 + p^2) - 1/2 sqrt(...).
landau::MfSolution mean_field_uniform(const LatticeParams& p);

/// Total mean-field energy per site count N W of a site-resolved configuration
/// (x_1, p_1, ..., x_N, p_N), spins relaxed.
double site_resolved_energy(const LatticeParams& p, const std::vector<double>& xp);

struct UniformityReport {
  double uniform_energy = 0.0;         // total, all sites at the uniform minimum
  double best_nonuniform_energy = 0.0;  // lowest energy found by multi-start search
  double max_site_spread = 0.0;         // spread of the best configuration
  bool spread_checked = true;           // false when J = 0 (sites decouple)
  int starts = 0;

  bool uniform_wins(double tol = 1e-8) const;
};

/// Multi-start local minimization of site_resolved_energy (deterministic seed).
/// Requires n_sites <= 16.
UniformityReport verify_uniform_minimum(const LatticeParams& p, int n_starts,
                                        unsigned long seed = 12345);

/// Quadratic form on 2N modes ordered a_1..a_N, b_1..b_N around the uniform
/// mean field. Throws OnBoundary when max(|g+|, |g-|) = g_c within 1e-12.
boson::QuadraticBosonForm effective_lattice_hamiltonian(const LatticeParams& p);

/// Same construction around the unbroken state regardless of the phase; its
/// quadrature matrix loses positivity beyond g_c. Used to locate the gap closing.
boson::QuadraticBosonForm normal_phase_lattice_hamiltonian(const LatticeParams& p);

/// |g+ g-| - g_c^2.
double factorization_residual(const LatticeParams& p);

/// Modes of sites [0, N/2) with both their cavity and spin modes.
std::vector<int> half_lattice_partition(const LatticeGeometry& g);

/// Modes (a_j and b_j) of the listed sites.
std::vector<int> site_partition(const LatticeGeometry& g, const std::vector<int>& sites);

}  // namespace ecsym::lattice
