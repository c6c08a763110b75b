#pragma once

// n-mode quadratic bosonic Hamiltonians
//
//   H = sum_ij A_ij a_i^dag a_j + 1/2 sum_ij (B_ij a_i^dag a_j^dag + h.c.) + offset
//
// with A Hermitian (conserving block) and B symmetric (anomalous block).
// Quadratures follow x = (a + a^dag)/sqrt2, p = i(a^dag - a)/sqrt2, ordered
// (x1, p1, ..., xn, pn); the vacuum covariance is identity/2.

#include <Eigen/Core>
#include <complex>
#include <span>
#include <vector>

namespace ecsym::boson {

using cplx = std::complex<double>;

struct QuadraticBosonForm {
  Eigen::MatrixXcd conserving;
  Eigen::MatrixXcd anomalous;
  double offset = 0.0;

  QuadraticBosonForm() = default;
  explicit QuadraticBosonForm(int n_modes);

  int n_modes() const { return static_cast<int>(conserving.rows()); }

  /// Adds c (a_i^dag a_j + h.c.) for i != j, or c a_i^dag a_i for i == j.
  void add_hopping(int i, int j, cplx c);
  /// Adds c a_i^dag a_j^dag + h.c. for i != j, or c/2 (a_i^dag^2 + h.c.) for i == j.
  void add_pairing(int i, int j, cplx c);

  /// Throws InvalidArgument when A is not Hermitian or B not symmetric (1e-12).
  void validate() const;
};

struct SymplecticSpectrum {
  std::vector<double> mode_energies;  // ascending
  bool stable = false;
  bool degenerate = false;  // stable with a zero-frequency mode
  double max_growth_rate = 0.0;  // largest |Re| eigenvalue of the dynamical matrix
};

struct GaussianGround {
  Eigen::MatrixXd covariance;
  double ground_energy = 0.0;

  int n_modes() const { return static_cast<int>(covariance.rows() / 2); }
};

/// Real symmetric M with H = 1/2 r^T M r - 1/2 Re tr A + offset.
Eigen::MatrixXd quadrature_matrix(const QuadraticBosonForm& form);

/// Symplectic form for interleaved (x, p) ordering.
Eigen::MatrixXd symplectic_form(int n_modes);

SymplecticSpectrum diagonalize(const QuadraticBosonForm& form);

/// Covariance of the Bogoliubov vacuum. Throws Unstable when the spectrum is
/// unstable and Degenerate when a zero mode makes the vacuum non-normalizable.
GaussianGround ground_state_covariance(const QuadraticBosonForm& form);

/// Symplectic eigenvalues (ascending) of a 2k x 2k covariance matrix.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& covariance);

/// Von Neumann entropy in bits of a Gaussian state with the given symplectic spectrum.
double entropy_bits(std::span<const double> symplectic);

/// Entropy of the reduced state on the listed modes. Throws BadPartition
/// unless the partition is a nonempty proper subset of distinct valid modes.
double entanglement_entropy(const GaussianGround& g, std::span<const int> partition);

/// Covariance restricted to the listed modes.
Eigen::MatrixXd reduced_covariance(const GaussianGround& g, std::span<const int> modes);

bool is_particle_conserving(const QuadraticBosonForm& form, double tol = 1e-12);

}  // namespace ecsym::boson
