#include "ecsym/lmg_model.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "ecsym/error.hpp"

namespace ecsym::lmg {

namespace {

constexpr double kBoundaryTol = 1e-12;

struct SpinOps {
  Eigen::MatrixXd jz;
  Eigen::MatrixXd jx;
  Eigen::MatrixXd jy_sq;  // J_y^2 is real in the |j,m> basis
};

SpinOps spin_ops(int n_spins) {
  if (n_spins < 1) throw Error(ErrorKind::InvalidArgument, "need at least one spin");
  const int dim = n_spins + 1;
  const double j = 0.5 * n_spins;
  Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(dim, dim);
  SpinOps ops;
  ops.jz = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = k - j;
    ops.jz(k, k) = m;
    if (k + 1 < dim) jp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Eigen::MatrixXd jm = jp.transpose();
  ops.jx = 0.5 * (jp + jm);
  const Eigen::MatrixXd diff = jp - jm;  // J_y = (J+ - J-)/(2i)
  ops.jy_sq = -0.25 * diff * diff;
  return ops;
}

double broken_gamma(const LmgParams& p, BlochPhase phase) {
  return phase == BlochPhase::BrokenY ? p.gamma_y : p.gamma_x;
}

double transverse_gamma(const LmgParams& p, BlochPhase phase) {
  return phase == BlochPhase::BrokenY ? p.gamma_x : p.gamma_y;
}

BlochPhase classify(const LmgParams& p) {
  if (std::max(p.gamma_x, p.gamma_y) <= p.field_h) return BlochPhase::Polarized;
  return p.gamma_x >= p.gamma_y ? BlochPhase::BrokenX : BlochPhase::BrokenY;
}

void require_broken(const LmgParams& p, const char* what) {
  if (classify(p) == BlochPhase::Polarized) {
    throw Error(ErrorKind::NotBroken, std::string(what) + " needs max(gamma_x, gamma_y) > h");
  }
}

}  // namespace

void LmgParams::validate() const {
  if (!(field_h > 0.0)) throw Error(ErrorKind::InvalidArgument, "field_h must be positive");
  if (!std::isfinite(gamma_x) || !std::isfinite(gamma_y)) {
    throw Error(ErrorKind::InvalidArgument, "gamma_x and gamma_y must be finite");
  }
}

std::string_view to_string(BlochPhase p) {
  switch (p) {
    case BlochPhase::Polarized: return "polarized";
    case BlochPhase::BrokenX: return "broken_x";
    case BlochPhase::BrokenY: return "broken_y";
  }
  return "unknown";
}

double bloch_energy(const LmgParams& p, double x, double y) {
  return -p.gamma_x * x * x / (2.0 * p.field_h) - p.gamma_y * y * y / (2.0 * p.field_h) -
         std::sqrt(std::max(0.0, 1.0 - x * x - y * y));
}

Eigen::Vector2d bloch_gradient(const LmgParams& p, double x, double y) {
  const double r = std::sqrt(1.0 - x * x - y * y);
  return {-p.gamma_x * x / p.field_h + x / r, -p.gamma_y * y / p.field_h + y / r};
}

Eigen::Matrix2d bloch_hessian(const LmgParams& p, double x, double y) {
  const double r = std::sqrt(1.0 - x * x - y * y);
  const double r3 = r * r * r;
  Eigen::Matrix2d hm;
  hm(0, 0) = -p.gamma_x / p.field_h + (1.0 - y * y) / r3;
  hm(1, 1) = -p.gamma_y / p.field_h + (1.0 - x * x) / r3;
  hm(0, 1) = hm(1, 0) = x * y / r3;
  return hm;
}

BlochMf mean_field(const LmgParams& p) {
  p.validate();
  BlochMf mf;
  mf.phase = classify(p);
  if (mf.phase != BlochPhase::Polarized) {
    const double c = p.field_h / broken_gamma(p, mf.phase);
    const double s = std::sqrt(1.0 - c * c);
    mf.theta0 = std::acos(c);
    if (mf.phase == BlochPhase::BrokenX) {
      mf.big_x = s;
    } else {
      mf.big_y = s;
      mf.phi0 = 0.5 * std::numbers::pi;
    }
    mf.goldstone = p.gamma_x == p.gamma_y;
  }
  mf.energy = bloch_energy(p, mf.big_x, mf.big_y);
  return mf;
}

std::pair<double, double> curvatures(const LmgParams& p) {
  p.validate();
  require_broken(p, "curvatures");
  const BlochPhase phase = classify(p);
  const double gb = broken_gamma(p, phase);
  const double gt = transverse_gamma(p, phase);
  const double h = p.field_h;
  const double along = gb * (gb * gb / (h * h) - 1.0);
  const double across = gb - gt;
  return phase == BlochPhase::BrokenX ? std::pair{along, across} : std::pair{across, along};
}

double symmetry_residual(const LmgParams& p) { return p.gamma_x * p.gamma_y - p.field_h * p.field_h; }

double line_element_residual(const LmgParams& p) {
  const auto [kx, ky] = curvatures(p);
  const BlochPhase phase = classify(p);
  const double c = p.field_h / broken_gamma(p, phase);
  return phase == BlochPhase::BrokenX ? kx * c * c - ky : ky * c * c - kx;
}

RotatedCoefficients rotated_hamiltonian(const LmgParams& p) {
  p.validate();
  require_broken(p, "rotated_hamiltonian");
  const BlochMf mf = mean_field(p);
  const double gb = broken_gamma(p, mf.phase);
  const double gt = transverse_gamma(p, mf.phase);
  const double h = p.field_h;
  const double c = h / gb;
  const double s = std::sqrt(1.0 - c * c);
  RotatedCoefficients r;
  r.c_z = -h * c;
  r.c_zz = -(gb - h * h / gb);
  r.c_xx = -h * h / gb;
  r.c_yy = -gt;
  r.c_x = h * s;
  r.c_xz = -gb * s * c;
  r.theta0 = mf.theta0;
  r.phi0 = mf.phi0;
  return r;
}

Eigen::MatrixXd lmg_matrix(const LmgParams& p, int n_spins) {
  p.validate();
  const SpinOps ops = spin_ops(n_spins);
  const double two_j = n_spins;
  return -p.field_h * ops.jz - (p.gamma_x / two_j) * ops.jx * ops.jx -
         (p.gamma_y / two_j) * ops.jy_sq;
}

Eigen::MatrixXd rotated_matrix(const RotatedCoefficients& c, int n_spins) {
  const SpinOps ops = spin_ops(n_spins);
  const double two_j = n_spins;
  const Eigen::MatrixXd xz = ops.jx * ops.jz + ops.jz * ops.jx;
  return c.c_z * ops.jz +
         (c.c_zz * ops.jz * ops.jz + c.c_xx * ops.jx * ops.jx + c.c_yy * ops.jy_sq) / two_j +
         c.c_x * ops.jx + (c.c_xz / two_j) * xz;
}

boson::QuadraticBosonForm two_block_form(const LmgParams& p) {
  p.validate();
  if (std::abs(std::max(p.gamma_x, p.gamma_y) - p.field_h) <= kBoundaryTol) {
    throw Error(ErrorKind::OnBoundary, "max(gamma_x, gamma_y) = h: gap closes at the transition");
  }
  // With J_z = j - n, each half of spin j/2 mapped to b_k, the rotated
  // operator c_z J_z + (c_zz J_z^2 + c_xx J_x^2 + c_yy J_y^2)/(2j) becomes
  // kn n - u/8 (B + B^dag)^2 + v/8 (B - B^dag)^2 with B = b1 + b2.
  double kn = p.field_h;
  double u = p.gamma_x;
  double v = p.gamma_y;
  if (classify(p) != BlochPhase::Polarized) {
    const RotatedCoefficients r = rotated_hamiltonian(p);
    kn = -(r.c_z + r.c_zz);
    u = -r.c_xx;
    v = -r.c_yy;
  }
  boson::QuadraticBosonForm f(2);
  const double rot = -(u + v) / 4.0;
  const double pair = -(u - v) / 4.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      f.conserving(a, b) = rot + (a == b ? kn : 0.0);
      f.anomalous(a, b) = pair;
    }
  }
  f.offset = rot;
  return f;
}

double anomalous_coupling(const LmgParams& p) { return two_block_form(p).anomalous(0, 1).real(); }

double two_block_entropy(const LmgParams& p) {
  const boson::GaussianGround g = boson::ground_state_covariance(two_block_form(p));
  const int first[] = {0};
  return boson::entanglement_entropy(g, first);
}

EntanglementCurve entanglement_curve(double field_h, double slope,
                                     const std::vector<double>& gamma_x_grid) {
  EntanglementCurve out;
  const bool goldstone_line = std::abs(slope - 1.0) <= kBoundaryTol;
  auto params_at = [&](double gx) { return LmgParams{field_h, gx, slope * gx, 0}; };
  auto broken = [&](double gx) {
    const LmgParams p = params_at(gx);
    return std::max(p.gamma_x, p.gamma_y) > field_h + kBoundaryTol;
  };

  for (double gx : gamma_x_grid) {
    CurvePoint pt;
    const LmgParams p = params_at(gx);
    pt.gamma_x = p.gamma_x;
    pt.gamma_y = p.gamma_y;
    if (std::abs(std::max(p.gamma_x, p.gamma_y) - field_h) <= kBoundaryTol) {
      pt.flag = CurveFlag::Boundary;
    } else if (goldstone_line && broken(gx)) {
      pt.flag = CurveFlag::Goldstone;
    } else {
      try {
        pt.entropy = two_block_entropy(p);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Degenerate) {
          pt.flag = CurveFlag::Goldstone;
        } else if (e.kind() == ErrorKind::Unstable || e.kind() == ErrorKind::OnBoundary) {
          pt.flag = CurveFlag::Boundary;
        } else {
          throw;
        }
      }
    }
    out.points.push_back(pt);
  }
  if (goldstone_line) return out;

  std::vector<double> xs;
  for (double gx : gamma_x_grid) {
    if (broken(gx)) xs.push_back(gx);
  }
  std::sort(xs.begin(), xs.end());
  auto f = [&](double gx) { return anomalous_coupling(params_at(gx)); };
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double fa = f(xs[k]);
    const double fb = f(xs[k + 1]);
    if (fa == 0.0) {
      out.zero_crossing = xs[k];
      break;
    }
    if ((fa < 0.0) != (fb < 0.0)) {
      std::uintmax_t iters = 200;
      const auto bracket = boost::math::tools::toms748_solve(
          f, xs[k], xs[k + 1], fa, fb, boost::math::tools::eps_tolerance<double>(50), iters);
      out.zero_crossing = 0.5 * (bracket.first + bracket.second);
      break;
    }
  }
  return out;
}

}  // namespace ecsym::lmg
