#pragma once

// Finite-size exact diagonalization used as ground truth for the
// thermodynamic-limit Gaussian results.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>

#include "ecsym/dicke_model.hpp"
#include "ecsym/lmg_model.hpp"
#include "ecsym/quadratic_boson.hpp"
#include "ecsym/sparse.hpp"

namespace ecsym::ed {

enum class EdModel { Dicke, Lmg, Quadratic };

/// Pure state on a bipartite space, stored row-major as (left, right).
struct EdState {
  EdModel model = EdModel::Dicke;
  Eigen::VectorXcd amplitudes;
  int dim_left = 0;
  int dim_right = 0;
  double coherent_scale = 0.0;  // Dicke: alpha = coherent_scale (x + i p)
  double spin_left = 0.0;       // LMG: spin of the left half
  double spin_right = 0.0;      // Dicke collective spin, LMG right half

  /// Amplitude matrix (dim_left x dim_right).
  Eigen::MatrixXcd as_matrix() const;
};

struct EdResult {
  double ground_energy = 0.0;
  double entropy_bits = 0.0;
  double product_fidelity = 0.0;
  bool converged = false;
  int cutoff_used = 0;
  double parity_gap = 0.0;  // lowest odd-sector minus lowest even-sector energy
  EdState state;
};

/// How the ground state is chosen when the two parity sectors are (nearly)
/// degenerate in the broken phase.
enum class SymmetryHandling {
  Auto,        // broken phase: equal-weight parity superposition aligned with the order parameter
  GroundOnly,  // always the lowest eigenvector
};

struct DickeEdOptions {
  int fock_cutoff = 0;  // 0: 4 max(1, g+^2, g-^2) N capped at 512, doubled until converged
  double entropy_tol = 1e-6;
  SymmetryHandling symmetry = SymmetryHandling::Auto;
  bool compute_fidelity = true;
  sparse::LanczosOptions lanczos;
};

inline constexpr int kMaxAtoms = 64;
inline constexpr int kMaxCutoff = 512;
inline constexpr int kMaxLmgSpins = 128;

/// Dicke model in the j = N/2 sector with a truncated Fock space. Convergence
/// compares the entropy at the used cutoff and at half of it. Throws
/// OutOfMemoryBudget for N > 64 or cutoff > 512, InvalidArgument for odd N.
EdResult dicke_ed(const dicke::DickeParams& p, int n_atoms, const DickeEdOptions& opts = {});

struct LmgEdOptions {
  SymmetryHandling symmetry = SymmetryHandling::Auto;
  bool compute_fidelity = true;
};

/// LMG model in the symmetric sector; entropy between two halves of N/2 spins.
/// Requires N divisible by 4 and N <= 128.
EdResult lmg_ed(const lmg::LmgParams& p, int n_spins, const LmgEdOptions& opts = {});

/// Quadratic form (n_modes <= 3) in a truncated Fock space; entropy of mode 0
/// against the rest. Converged when the weight on the top Fock level of every
/// mode is below 1e-10. product_fidelity is the largest Schmidt weight.
/// Throws Unstable for forms without a stable ground state.
EdResult quadratic_ed(const boson::QuadraticBosonForm& form, int fock_cutoff);

/// Full Dicke Hamiltonian (both parity sectors), basis index n (N+1) + (m + j).
Eigen::SparseMatrix<double, Eigen::RowMajor> dicke_matrix(const dicke::DickeParams& p, int n_atoms,
                                                          int fock_cutoff);

/// Quadratic form in the truncated Fock space, mode 0 most significant.
Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor> quadratic_matrix(
    const boson::QuadraticBosonForm& form, int fock_cutoff);

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | j1+j2, m1+m2> (stretched coupling).
double stretched_clebsch_gordan(double j1, double m1, double j2, double m2);

/// Overlap <theta, phi | j, m> amplitudes of a spin coherent state,
/// <j, m | theta, phi> = e^{-i m phi} sqrt(C(2j, j+m)) cos^{j+m}(theta/2) sin^{j-m}(theta/2).
Eigen::VectorXcd spin_coherent_state(double j, double theta, double phi);

/// Truncated boson coherent state with amplitude alpha on levels 0..cutoff.
Eigen::VectorXcd coherent_state(std::complex<double> alpha, int cutoff);

/// Largest squared overlap with a product of coherent states, by local search
/// (Nelder-Mead) from `seed`. Dicke seed: (x, p, theta, phi). LMG seed:
/// (theta1, phi1, theta2, phi2).
double product_fidelity(const EdState& state, const std::array<double, 4>& seed);

/// Entropy in bits of the Schmidt spectrum of a bipartite pure state.
double schmidt_entropy_bits(const Eigen::MatrixXcd& amplitudes);

}  // namespace ecsym::ed
