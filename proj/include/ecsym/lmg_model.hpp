#pragma once

// Anisotropic Lipkin-Meshkov-Glick model
//
//   H = -h J_z - gx/(2j) J_x^2 - gy/(2j) J_y^2,   N = 2j spins,
//
// mean field on the Bloch sphere, rotated Hamiltonian, and the two-block
// Holstein-Primakoff quadratic form whose entropy gives the half/half
// entanglement in the thermodynamic limit.

#include <Eigen/Core>
#include <optional>
#include <string_view>
#include <vector>

#include "ecsym/quadratic_boson.hpp"

namespace ecsym::lmg {

struct LmgParams {
  double field_h = 1.0;
  double gamma_x = 0.0;
  double gamma_y = 0.0;
  int n_spins = 0;  // finite-size contexts only

  /// Throws InvalidArgument unless h > 0 and the couplings are finite.
  void validate() const;
};

enum class BlochPhase { Polarized, BrokenX, BrokenY };
std::string_view to_string(BlochPhase p);

struct BlochMf {
  double big_x = 0.0;
  double big_y = 0.0;
  double theta0 = 0.0;
  double phi0 = 0.0;
  double energy = 0.0;  // in units of j h
  BlochPhase phase = BlochPhase::Polarized;
  bool goldstone = false;  // gx = gy > h: a circle of minima, BrokenX representative
};

/// Mean-field energy per (j h) at Bloch coordinates X = sin t cos f, Y = sin t sin f.
double bloch_energy(const LmgParams& p, double big_x, double big_y);
Eigen::Vector2d bloch_gradient(const LmgParams& p, double big_x, double big_y);
Eigen::Matrix2d bloch_hessian(const LmgParams& p, double big_x, double big_y);

BlochMf mean_field(const LmgParams& p);

/// (kappa_x, kappa_y) = h times the Hessian diagonal of the Bloch energy at the
/// minimum; (gx (gx^2/h^2 - 1), gx - gy) on the BrokenX branch and the mirror
/// on BrokenY. Throws NotBroken in the polarized phase.
std::pair<double, double> curvatures(const LmgParams& p);

/// gx gy - h^2.
double symmetry_residual(const LmgParams& p);

/// kappa_b cos^2(theta0) - kappa_t for the broken axis b and transverse axis t;
/// equals symmetry_residual / gamma_b. Throws NotBroken.
double line_element_residual(const LmgParams& p);

/// Rotated Hamiltonian U^dag H U with U = exp(-i phi0 J_z) exp(-i theta0 J_y),
/// written with the broken axis relabelled x:
///
///   c_z J_z + (c_zz J_z^2 + c_xx J_x^2 + c_yy J_y^2) / (2j)
///     + c_x J_x + c_xz {J_x, J_z} / (2j).
///
/// The last two terms cancel at the mean-field level and do not reach the
/// quadratic fluctuation order; they are kept so the operator is unitarily
/// equivalent to H at any finite j.
struct RotatedCoefficients {
  double c_z = 0.0;
  double c_zz = 0.0;
  double c_xx = 0.0;
  double c_yy = 0.0;
  double c_x = 0.0;
  double c_xz = 0.0;
  double theta0 = 0.0;
  double phi0 = 0.0;
};

/// Throws NotBroken in the polarized phase.
RotatedCoefficients rotated_hamiltonian(const LmgParams& p);

/// Dense H in the symmetric sector, basis |j, m>, m = -j..j (index m + j).
Eigen::MatrixXd lmg_matrix(const LmgParams& p, int n_spins);

/// Dense matrix of the rotated operator for the given coefficients.
Eigen::MatrixXd rotated_matrix(const RotatedCoefficients& c, int n_spins);

/// Two-block quadratic form on (b1, b2): the collective spin split into two
/// halves, each Holstein-Primakoff expanded around the mean-field direction.
/// Throws OnBoundary when max(gx, gy) = h within 1e-12.
boson::QuadraticBosonForm two_block_form(const LmgParams& p);

/// Signed inter-block pairing amplitude of two_block_form; zero on gx gy = h^2
/// in the broken phase.
double anomalous_coupling(const LmgParams& p);

/// Half/half entropy in bits of the Gaussian ground state of two_block_form.
double two_block_entropy(const LmgParams& p);

enum class CurveFlag { Ok, Boundary, Goldstone };

struct CurvePoint {
  double gamma_x = 0.0;
  double gamma_y = 0.0;
  std::optional<double> entropy;  // empty when flagged
  CurveFlag flag = CurveFlag::Ok;
};

struct EntanglementCurve {
  std::vector<CurvePoint> points;
  std::optional<double> zero_crossing;  // gamma_x where the pairing amplitude changes sign
};

/// Entropy along gamma_y = slope * gamma_x at the given gamma_x values, and the
/// root of the inter-block pairing amplitude inside the broken phase.
EntanglementCurve entanglement_curve(double field_h, double slope,
                                     const std::vector<double>& gamma_x_grid);

}  // namespace ecsym::lmg
