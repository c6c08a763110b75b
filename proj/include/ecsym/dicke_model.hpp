#pragma once

// Anisotropic Dicke model
//
//   H = w0 a^dag a + W J_z + 2 l+/sqrt(N) (a^dag + a) J_x - i 2 l-/sqrt(N) (a^dag - a) J_y
//
// in the thermodynamic limit: mean field, Holstein-Primakoff fluctuations,
// Gaussian ground-state entanglement between the cavity (mode 0) and the
// collective spin (mode 1).

#include <complex>

#include "ecsym/landau_mf.hpp"
#include "ecsym/quadratic_boson.hpp"

namespace ecsym::dicke {

struct DickeParams {
  double omega0 = 1.0;
  double omega_spin = 1.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  int n_atoms = 0;  // finite-size contexts only

  /// Builds parameters from the dimensionless couplings g = 2 lambda / sqrt(w0 W).
  static DickeParams from_couplings(double g_plus, double g_minus, double omega0 = 1.0,
                                    double omega_spin = 1.0);

  double g_plus() const;
  double g_minus() const;
  landau::CouplingPair couplings() const { return {g_plus(), g_minus()}; }

  /// Throws InvalidArgument unless w0 > 0, W > 0 and the couplings are finite.
  void validate() const;
};

enum class MfPhase { Normal, Superradiant };

struct SpinBosonMf {
  double x_bar = 0.0;
  double p_bar = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double energy_per_spin = 0.0;  // in units of N W
  MfPhase phase = MfPhase::Normal;
  landau::Phase branch = landau::Phase::Normal;
};

/// Spin angles minimizing the mean-field energy at fixed boson displacement.
/// theta = pi - arctan(2R), (cos phi, sin phi) = (-g+ x, g- p) / R with
/// R = |(g+ x, g- p)|; theta = pi, phi = pi at R = 0.
std::pair<double, double> optimal_spin_angles(landau::CouplingPair c, double x_bar, double p_bar);

/// Mean-field energy per spin, including the 1/2 cos(theta) term.
double mean_field_energy(const DickeParams& p, double x_bar, double p_bar, double theta,
                         double phi);

SpinBosonMf mean_field(const DickeParams& p);

/// Linear (order sqrt N) coefficients of the expansion around a mean field:
/// `boson` multiplies a, `spin` multiplies b (their conjugates multiply a^dag, b^dag).
struct LinearTerms {
  std::complex<double> boson;
  std::complex<double> spin;

  double norm() const { return std::abs(boson) + std::abs(spin); }
};

/// Quadratic fluctuation Hamiltonian around an arbitrary displaced and rotated
/// state. `boson_shift` adds to w0 in the linear terms only (uniform hopping
/// on a lattice). Does not check stationarity.
struct Expansion {
  boson::QuadraticBosonForm form;
  LinearTerms linear;
};
Expansion expand_around(const DickeParams& p, const SpinBosonMf& mf, double boson_shift = 0.0);

inline constexpr double kStationarityTol = 1e-8;

/// Second-order expansion around `mf`. Throws NotStationary when the linear
/// terms exceed 1e-8 (in units of max(1, w0, W)).
boson::QuadraticBosonForm quadratic_expansion(const DickeParams& p, const SpinBosonMf& mf);

/// Closed-form effective Hamiltonian on modes (a, b). In the normal phase:
/// diag(w0, W), rotating l+ + l-, anomalous l+ - l-. Superradiant with
/// |g+| >= |g-|: diag(w0, g+^2 W), rotating l~+ + l-, anomalous l~+ - l-,
/// l~+ = sqrt(w0 W) / (2 g+). For |g-| > |g+| the dual form with + and -
/// exchanged. Throws OnBoundary when max(|g+|, |g-|) = 1 within 1e-12.
boson::QuadraticBosonForm effective_hamiltonian(const DickeParams& p);

/// Entropy (bits) between cavity and spin in the Gaussian ground state.
/// Propagates OnBoundary, Unstable and Degenerate.
double ground_state_entropy(const DickeParams& p);

enum class LineClass { TC, AntiTC, Goldstone, Generic };
std::string_view to_string(LineClass c);

/// TC / anti-TC / Goldstone classification. In the superradiant phase this
/// wraps landau::classify_symmetry; in the normal phase g+ = g- is TC and
/// g+ = -g- is anti-TC.
LineClass classify_lines(const DickeParams& p, double tol = landau::kDefaultSymmetryTol);

}  // namespace ecsym::dicke
