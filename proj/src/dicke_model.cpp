#include "ecsym/dicke_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <tuple>

#include "ecsym/error.hpp"

namespace ecsym::dicke {

using cplx = std::complex<double>;

namespace {

constexpr double kBoundaryTol = 1e-12;

}  // namespace

DickeParams DickeParams::from_couplings(double g_plus, double g_minus, double omega0,
                                        double omega_spin) {
  DickeParams p;
  p.omega0 = omega0;
  p.omega_spin = omega_spin;
  const double root = std::sqrt(omega0 * omega_spin);
  p.lambda_plus = 0.5 * g_plus * root;
  p.lambda_minus = 0.5 * g_minus * root;
  return p;
}

double DickeParams::g_plus() const { return 2.0 * lambda_plus / std::sqrt(omega0 * omega_spin); }
double DickeParams::g_minus() const { return 2.0 * lambda_minus / std::sqrt(omega0 * omega_spin); }

void DickeParams::validate() const {
  if (!(omega0 > 0.0) || !(omega_spin > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "omega0 and omega_spin must be positive");
  }
  if (!std::isfinite(g_plus()) || !std::isfinite(g_minus())) {
    throw Error(ErrorKind::InvalidArgument, "couplings must be finite");
  }
}

std::pair<double, double> optimal_spin_angles(landau::CouplingPair c, double x_bar,
                                              double p_bar) {
  const double u = c.g_plus * x_bar;
  const double v = c.g_minus * p_bar;
  const double r = std::hypot(u, v);
  if (r == 0.0) return {std::numbers::pi, std::numbers::pi};
  const double theta = std::numbers::pi - std::atan(2.0 * r);
  double phi = std::atan2(v, -u);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return {theta, phi};
}

double mean_field_energy(const DickeParams& p, double x, double pb, double theta, double phi) {
  const double s = std::sin(theta);
  return x * x + pb * pb + p.g_plus() * x * s * std::cos(phi) -
         p.g_minus() * pb * s * std::sin(phi) + 0.5 * std::cos(theta);
}

SpinBosonMf mean_field(const DickeParams& p) {
  p.validate();
  const landau::MfSolution sol = landau::minimize_mf(p.couplings());
  SpinBosonMf mf;
  mf.x_bar = sol.minimum.x_bar;
  mf.p_bar = sol.minimum.p_bar;
  std::tie(mf.theta, mf.phi) = optimal_spin_angles(p.couplings(), mf.x_bar, mf.p_bar);
  mf.energy_per_spin = mean_field_energy(p, mf.x_bar, mf.p_bar, mf.theta, mf.phi);
  mf.branch = sol.phase;
  mf.phase = sol.phase == landau::Phase::Normal ? MfPhase::Normal : MfPhase::Superradiant;
  return mf;
}

Expansion expand_around(const DickeParams& p, const SpinBosonMf& mf, double boson_shift) {
  const double st = std::sin(mf.theta);
  const double ct = std::cos(mf.theta);
  const double sp = std::sin(mf.phi);
  const double cp = std::cos(mf.phi);
  const std::array<double, 3> n{st * cp, st * sp, ct};
  const std::array<double, 3> ex{ct * cp, ct * sp, -st};
  const std::array<double, 3> ey{-sp, cp, 0.0};
  std::array<cplx, 3> eps;
  for (int k = 0; k < 3; ++k) eps[k] = cplx(ex[k], -ey[k]);

  // Boson displacement per sqrt(N).
  const double scale = std::sqrt(p.omega_spin / p.omega0);
  const double re_beta = scale * mf.x_bar;
  const double im_beta = scale * mf.p_bar;
  const double lp = p.lambda_plus;
  const double lm = p.lambda_minus;
  const cplx i(0.0, 1.0);

  Expansion e{boson::QuadraticBosonForm(2), {}};
  e.linear.boson = (p.omega0 + boson_shift) * cplx(re_beta, -im_beta) + lp * n[0] + i * lm * n[1];
  e.linear.spin = 0.5 * p.omega_spin * eps[2] + 2.0 * lp * re_beta * eps[0] -
                  2.0 * lm * im_beta * eps[1];

  auto& a = e.form.conserving;
  auto& b = e.form.anomalous;
  a(0, 0) = p.omega0;
  a(1, 1) = -p.omega_spin * n[2] - 4.0 * lp * re_beta * n[0] + 4.0 * lm * im_beta * n[1];
  a(0, 1) = lp * eps[0] - i * lm * eps[1];
  a(1, 0) = std::conj(a(0, 1));
  b(0, 1) = b(1, 0) = lp * std::conj(eps[0]) - i * lm * std::conj(eps[1]);
  return e;
}

boson::QuadraticBosonForm quadratic_expansion(const DickeParams& p, const SpinBosonMf& mf) {
  p.validate();
  Expansion e = expand_around(p, mf);
  const double unit = std::max({1.0, p.omega0, p.omega_spin});
  if (e.linear.norm() > kStationarityTol * unit) {
    throw Error(ErrorKind::NotStationary, "linear fluctuation terms do not vanish");
  }
  return std::move(e.form);
}

boson::QuadraticBosonForm effective_hamiltonian(const DickeParams& p) {
  p.validate();
  const double gp = p.g_plus();
  const double gm = p.g_minus();
  const double gmax = std::max(std::abs(gp), std::abs(gm));
  if (std::abs(gmax - 1.0) <= kBoundaryTol) {
    throw Error(ErrorKind::OnBoundary, "max(|g+|,|g-|) = 1: gap closes at the transition");
  }
  const double root = std::sqrt(p.omega0 * p.omega_spin);
  double spin_energy = p.omega_spin;
  double rotating = p.lambda_plus + p.lambda_minus;
  double anomalous = p.lambda_plus - p.lambda_minus;
  if (gmax > 1.0) {
    if (std::abs(gp) >= std::abs(gm)) {
      const double lt = root / (2.0 * gp);
      spin_energy = gp * gp * p.omega_spin;
      rotating = lt + p.lambda_minus;
      anomalous = lt - p.lambda_minus;
    } else {
      const double lt = root / (2.0 * gm);
      spin_energy = gm * gm * p.omega_spin;
      rotating = p.lambda_plus + lt;
      anomalous = lt - p.lambda_plus;
    }
  }
  boson::QuadraticBosonForm f(2);
  f.conserving(0, 0) = p.omega0;
  f.conserving(1, 1) = spin_energy;
  f.add_hopping(0, 1, rotating);
  f.add_pairing(0, 1, anomalous);
  return f;
}

double ground_state_entropy(const DickeParams& p) {
  const boson::GaussianGround g = boson::ground_state_covariance(effective_hamiltonian(p));
  const int cavity[] = {0};
  return boson::entanglement_entropy(g, cavity);
}

std::string_view to_string(LineClass c) {
  switch (c) {
    case LineClass::TC: return "tc";
    case LineClass::AntiTC: return "anti_tc";
    case LineClass::Goldstone: return "goldstone";
    case LineClass::Generic: return "generic";
  }
  return "unknown";
}

LineClass classify_lines(const DickeParams& p, double tol) {
  const double gp = p.g_plus();
  const double gm = p.g_minus();
  if (std::max(std::abs(gp), std::abs(gm)) > 1.0) {
    switch (landau::classify_symmetry({gp, gm}, tol)) {
      case landau::SymmetryClass::EmergentTC: return LineClass::TC;
      case landau::SymmetryClass::EmergentAntiTC: return LineClass::AntiTC;
      case landau::SymmetryClass::GoldstoneU1: return LineClass::Goldstone;
      case landau::SymmetryClass::None: return LineClass::Generic;
    }
  }
  if (std::abs(gp - gm) < tol) return LineClass::TC;
  if (std::abs(gp + gm) < tol) return LineClass::AntiTC;
  return LineClass::Generic;
}

}  // namespace ecsym::dicke
