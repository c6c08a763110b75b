#include "ecsym/landau_mf.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ecsym/error.hpp"
#include "ecsym/simd/kernels.hpp"

namespace ecsym::landau {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Normal: return "normal";
    case Phase::BrokenX: return "broken_x";
    case Phase::BrokenP: return "broken_p";
    case Phase::GoldstoneDegenerate: return "goldstone";
  }
  return "unknown";
}

std::string_view to_string(SymmetryClass s) {
  switch (s) {
    case SymmetryClass::None: return "none";
    case SymmetryClass::EmergentTC: return "tc";
    case SymmetryClass::EmergentAntiTC: return "anti_tc";
    case SymmetryClass::GoldstoneU1: return "goldstone";
  }
  return "unknown";
}

double Potential::critical_coupling() const { return std::sqrt(stiffness); }

double mf_energy(MfPoint point, CouplingPair c) { return mf_energy(point, Potential{c, 1.0}); }

double mf_energy(MfPoint pt, const Potential& v) {
  const double gx = 2.0 * v.c.g_plus * pt.x_bar;
  const double gp = 2.0 * v.c.g_minus * pt.p_bar;
  return v.stiffness * (pt.x_bar * pt.x_bar + pt.p_bar * pt.p_bar) -
         0.5 * std::sqrt(1.0 + gx * gx + gp * gp);
}

Eigen::Vector2d mf_gradient(MfPoint pt, const Potential& v) {
  const double a = v.c.g_plus * v.c.g_plus;
  const double b = v.c.g_minus * v.c.g_minus;
  const double f = std::sqrt(1.0 + 4.0 * a * pt.x_bar * pt.x_bar + 4.0 * b * pt.p_bar * pt.p_bar);
  return {2.0 * v.stiffness * pt.x_bar - 2.0 * a * pt.x_bar / f,
          2.0 * v.stiffness * pt.p_bar - 2.0 * b * pt.p_bar / f};
}

Eigen::Matrix2d mf_hessian(MfPoint pt, const Potential& v) {
  const double a = v.c.g_plus * v.c.g_plus;
  const double b = v.c.g_minus * v.c.g_minus;
  const double x = pt.x_bar;
  const double p = pt.p_bar;
  const double f = std::sqrt(1.0 + 4.0 * a * x * x + 4.0 * b * p * p);
  const double f3 = f * f * f;
  Eigen::Matrix2d h;
  h(0, 0) = 2.0 * v.stiffness - 2.0 * a / f + 8.0 * a * a * x * x / f3;
  h(1, 1) = 2.0 * v.stiffness - 2.0 * b / f + 8.0 * b * b * p * p / f3;
  h(0, 1) = h(1, 0) = 8.0 * a * b * x * p / f3;
  return h;
}

namespace {

// Closed-form broken-phase data along the axis with the larger coupling.
struct AxisMinimum {
  double coordinate;
  double energy;
};

AxisMinimum axis_minimum(double g, double s) {
  const double g2 = g * g;
  const double x0 = std::sqrt(g2 * g2 / (s * s) - 1.0) / (2.0 * std::abs(g));
  return {x0, -(g2 * g2 + s * s) / (4.0 * s * g2)};
}

}  // namespace

MfSolution minimize_mf(CouplingPair c) { return minimize_mf(Potential{c, 1.0}); }

MfSolution minimize_mf(const Potential& v) {
  const double s = v.stiffness;
  const double gc = v.critical_coupling();
  const double ap = std::abs(v.c.g_plus);
  const double am = std::abs(v.c.g_minus);
  MfSolution out;
  if (std::max(ap, am) <= gc) {
    out.phase = Phase::Normal;
    out.minimum = {0.0, 0.0};
    out.energy = -0.5;
    out.curvature_x = s - ap * ap;
    out.curvature_p = s - am * am;
    return out;
  }
  if (ap >= am) {
    const AxisMinimum m = axis_minimum(v.c.g_plus, s);
    out.phase = ap == am ? Phase::GoldstoneDegenerate : Phase::BrokenX;
    out.minimum = {m.coordinate, 0.0};
    out.energy = m.energy;
  } else {
    const AxisMinimum m = axis_minimum(v.c.g_minus, s);
    out.phase = Phase::BrokenP;
    out.minimum = {0.0, m.coordinate};
    out.energy = m.energy;
  }
  const auto [kx, kp] = fluctuation_curvatures(v);
  out.curvature_x = kx;
  out.curvature_p = kp;
  return out;
}

std::pair<double, double> fluctuation_curvatures(CouplingPair c) {
  return fluctuation_curvatures(Potential{c, 1.0});
}

std::pair<double, double> fluctuation_curvatures(const Potential& v) {
  const double s = v.stiffness;
  const double a = v.c.g_plus * v.c.g_plus;
  const double b = v.c.g_minus * v.c.g_minus;
  if (std::max(a, b) <= s) {
    throw Error(ErrorKind::NotBroken, "fluctuation curvatures need max(|g+|,|g-|) > g_c");
  }
  if (a >= b) return {s * (1.0 - s * s / (a * a)), s * (1.0 - b / a)};
  return {s * (1.0 - a / b), s * (1.0 - s * s / (b * b))};
}

SymmetryClass classify_symmetry(CouplingPair c, double tol) {
  if (std::max(std::abs(c.g_plus), std::abs(c.g_minus)) <= 1.0) {
    throw Error(ErrorKind::NotBroken, "symmetry classification needs the broken phase");
  }
  if (std::abs(std::abs(c.g_plus) - std::abs(c.g_minus)) < tol) return SymmetryClass::GoldstoneU1;
  const double prod = c.g_plus * c.g_minus;
  if (std::abs(prod - 1.0) < tol) return SymmetryClass::EmergentTC;
  if (std::abs(prod + 1.0) < tol) return SymmetryClass::EmergentAntiTC;
  return SymmetryClass::None;
}

bool origin_is_stable(const Potential& v) {
  const Eigen::Matrix2d h = mf_hessian({0.0, 0.0}, v);
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(h, Eigen::EigenvaluesOnly)
             .eigenvalues()
             .minCoeff() > 0.0;
}

MfSolution numeric_minimize(const Potential& v, const GridSearchOptions& opts) {
  const double gmax = std::max(std::abs(v.c.g_plus), std::abs(v.c.g_minus));
  const double span = opts.span > 0.0 ? opts.span : std::max(1.0, gmax * gmax);
  const int n = std::max(3, opts.points_per_axis | 1);
  const double step = 2.0 * span / (n - 1);

  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = -span + i * step;
  xs[n / 2] = 0.0;

  std::vector<double> row(n);
  const simd::LandauCoefficients coeffs{v.c.g_plus, v.c.g_minus, v.stiffness};
  double best = std::numeric_limits<double>::infinity();
  MfPoint pt{};
  for (int j = 0; j < n; ++j) {
    const double p = xs[j];
    simd::landau_energy_row(coeffs, xs, p, row);
    for (int i = 0; i < n; ++i) {
      if (row[i] < best) {
        best = row[i];
        pt = {xs[i], p};
      }
    }
  }

  // Damped Newton refinement, gradient descent when the Hessian is indefinite.
  Eigen::Vector2d z(pt.x_bar, pt.p_bar);
  auto energy_at = [&](const Eigen::Vector2d& q) { return mf_energy({q[0], q[1]}, v); };
  for (int it = 0; it < opts.max_newton_steps; ++it) {
    const MfPoint cur{z[0], z[1]};
    const Eigen::Vector2d g = mf_gradient(cur, v);
    if (g.norm() < opts.gradient_tol) break;
    const Eigen::Matrix2d h = mf_hessian(cur, v);
    Eigen::Vector2d dir;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    if (es.eigenvalues().minCoeff() > 1e-12) {
      dir = -h.ldlt().solve(g);
    } else {
      dir = -g;
    }
    double t = 1.0;
    const double e0 = energy_at(z);
    while (t > 1e-12 && energy_at(z + t * dir) > e0 + 1e-16 * std::abs(e0)) t *= 0.5;
    const Eigen::Vector2d next = z + t * dir;
    if ((next - z).norm() == 0.0) break;
    z = next;
  }

  MfSolution out;
  out.minimum = {std::abs(z[0]), std::abs(z[1])};
  out.energy = mf_energy(out.minimum, v);
  const Eigen::Matrix2d h = mf_hessian(out.minimum, v);
  out.curvature_x = 0.5 * h(0, 0);
  out.curvature_p = 0.5 * h(1, 1);
  constexpr double kZero = 1e-7;
  const bool hx = out.minimum.x_bar > kZero;
  const bool hp = out.minimum.p_bar > kZero;
  if (hx && hp) {
    out.phase = Phase::GoldstoneDegenerate;
  } else if (hx) {
    out.phase = Phase::BrokenX;
  } else if (hp) {
    out.phase = Phase::BrokenP;
  } else {
    out.phase = Phase::Normal;
  }
  return out;
}

}  // namespace ecsym::landau
