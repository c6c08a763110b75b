#pragma once

// Generic Landau mean-field potential of a fully-connected model with
// anisotropic particle-conserving / non-conserving couplings:
//
//   E(x, p) = s (x^2 + p^2) - 1/2 sqrt(1 + (2 g+ x)^2 + (2 g- p)^2)
//
// with stiffness s = 1 for a single cavity (s = g_c^2 on a lattice).

#include <Eigen/Core>
#include <string_view>

namespace ecsym::landau {

struct CouplingPair {
  double g_plus = 0.0;
  double g_minus = 0.0;
};

struct MfPoint {
  double x_bar = 0.0;
  double p_bar = 0.0;
};

enum class Phase { Normal, BrokenX, BrokenP, GoldstoneDegenerate };

enum class SymmetryClass { None, EmergentTC, EmergentAntiTC, GoldstoneU1 };

std::string_view to_string(Phase p);
std::string_view to_string(SymmetryClass s);

struct MfSolution {
  MfPoint minimum;
  double energy = 0.0;
  Phase phase = Phase::Normal;
  double curvature_x = 0.0;  // half the Hessian diagonal along x_bar
  double curvature_p = 0.0;
};

/// Potential with an explicit stiffness; the single-cavity case is stiffness 1.
struct Potential {
  CouplingPair c;
  double stiffness = 1.0;

  double critical_coupling() const;  // sqrt(stiffness)
};

double mf_energy(MfPoint point, CouplingPair c);
double mf_energy(MfPoint point, const Potential& v);

Eigen::Vector2d mf_gradient(MfPoint point, const Potential& v);
Eigen::Matrix2d mf_hessian(MfPoint point, const Potential& v);

/// Closed-form global minimum. Branch convention: the positive member of the
/// Z2 pair is returned; |g+| = |g-| beyond threshold reports the BrokenX
/// representative of the degenerate circle.
MfSolution minimize_mf(CouplingPair c);
MfSolution minimize_mf(const Potential& v);

/// Fluctuation curvatures (1 - 1/g+^4, 1 - g-^2/g+^2) on the BrokenX branch and
/// the x<->p mirror on the BrokenP branch. Throws NotBroken in the normal phase.
std::pair<double, double> fluctuation_curvatures(CouplingPair c);
std::pair<double, double> fluctuation_curvatures(const Potential& v);

inline constexpr double kDefaultSymmetryTol = 1e-9;

/// Emergent symmetry of the fluctuation potential in the broken phase.
SymmetryClass classify_symmetry(CouplingPair c, double tol = kDefaultSymmetryTol);

/// True when the origin is a strict local minimum (normal phase interior).
bool origin_is_stable(const Potential& v);

struct GridSearchOptions {
  int points_per_axis = 401;
  double span = 0.0;  // 0: max(1, g_max^2)
  double gradient_tol = 1e-12;
  int max_newton_steps = 100;
};

/// Dense-grid plus Newton refinement minimizer; independent of the closed
/// form and used to cross-check it.
MfSolution numeric_minimize(const Potential& v, const GridSearchOptions& opts = {});

}  // namespace ecsym::landau
