#include "ecsym/quadratic_boson.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "ecsym/error.hpp"

namespace ecsym::boson {

namespace {

constexpr double kSpectralTol = 1e-9;
constexpr double kEntropyNuTol = 1e-12;

// Principal square root (and optionally inverse root) of a symmetric PSD matrix.
struct SymmetricRoots {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;
};

SymmetricRoots symmetric_roots(const Eigen::MatrixXd& m, bool want_inverse) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& v = es.eigenvectors();
  SymmetricRoots r;
  r.sqrt = v * lam.cwiseSqrt().asDiagonal() * v.transpose();
  if (want_inverse) r.inv_sqrt = v * lam.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  return r;
}

// Positive half of the +-pairs of eig(i * S^1/2 Omega S^1/2), ascending.
std::vector<double> positive_pair_values(const Eigen::MatrixXd& root) {
  const Eigen::Index dim = root.rows();
  const Eigen::MatrixXd k = root * symplectic_form(static_cast<int>(dim / 2)) * root;
  const Eigen::MatrixXcd herm = cplx(0.0, 1.0) * k.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  std::vector<double> out(ev.data() + dim / 2, ev.data() + dim);
  for (double& w : out) w = std::max(w, 0.0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

QuadraticBosonForm::QuadraticBosonForm(int n_modes)
    : conserving(Eigen::MatrixXcd::Zero(n_modes, n_modes)),
      anomalous(Eigen::MatrixXcd::Zero(n_modes, n_modes)) {}

void QuadraticBosonForm::add_hopping(int i, int j, cplx c) {
  if (i == j) {
    conserving(i, i) += c.real();
    return;
  }
  conserving(i, j) += c;
  conserving(j, i) += std::conj(c);
}

void QuadraticBosonForm::add_pairing(int i, int j, cplx c) {
  anomalous(i, j) += c;
  if (i != j) anomalous(j, i) += c;
}

void QuadraticBosonForm::validate() const {
  const Eigen::Index n = conserving.rows();
  if (conserving.cols() != n || anomalous.rows() != n || anomalous.cols() != n) {
    throw Error(ErrorKind::InvalidArgument, "quadratic form blocks must be square and equal size");
  }
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "quadratic form needs at least one mode");
  if ((conserving - conserving.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "conserving block is not Hermitian");
  }
  if ((anomalous - anomalous.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "anomalous block is not symmetric");
  }
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Eigen::MatrixXd quadrature_matrix(const QuadraticBosonForm& form) {
  const int n = form.n_modes();
  const Eigen::MatrixXd ra = form.conserving.real();
  const Eigen::MatrixXd ia = form.conserving.imag();
  const Eigen::MatrixXd rb = form.anomalous.real();
  const Eigen::MatrixXd ib = form.anomalous.imag();
  Eigen::MatrixXd m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(2 * i, 2 * j) = ra(i, j) + rb(i, j);
      m(2 * i, 2 * j + 1) = -ia(i, j) + ib(i, j);
      m(2 * i + 1, 2 * j) = ia(i, j) + ib(i, j);
      m(2 * i + 1, 2 * j + 1) = ra(i, j) - rb(i, j);
    }
  }
  return 0.5 * (m + m.transpose());
}

SymplecticSpectrum diagonalize(const QuadraticBosonForm& form) {
  form.validate();
  const int n = form.n_modes();
  const Eigen::MatrixXd m = quadrature_matrix(form);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const double min_eig = es.eigenvalues().minCoeff();

  const Eigen::MatrixXd dynamical = symplectic_form(n) * m;
  Eigen::EigenSolver<Eigen::MatrixXd> dyn(dynamical, false);
  SymplecticSpectrum out;
  out.max_growth_rate = dyn.eigenvalues().real().cwiseAbs().maxCoeff();

  const double tol = kSpectralTol * scale;
  const bool psd = min_eig >= -tol;
  // A zero mode forms a Jordan block in the dynamical matrix whose numerical
  // eigenvalues split by ~sqrt(eps); only a positive semidefinite M is trusted there.
  const bool zero_mode = psd && min_eig <= tol;
  out.stable = psd && (out.max_growth_rate <= tol || zero_mode);

  if (out.stable) {
    out.mode_energies = positive_pair_values(symmetric_roots(m, false).sqrt);
    out.degenerate = zero_mode || out.mode_energies.front() <= tol;
  } else {
    std::vector<double> im;
    for (const auto& z : dyn.eigenvalues()) im.push_back(std::abs(z.imag()));
    std::sort(im.begin(), im.end());
    out.mode_energies.assign(im.begin() + n, im.end());
  }
  return out;
}

GaussianGround ground_state_covariance(const QuadraticBosonForm& form) {
  const SymplecticSpectrum spec = diagonalize(form);
  if (!spec.stable) {
    throw Error(ErrorKind::Unstable, "quadratic form has no stable ground state");
  }
  if (spec.degenerate) {
    throw Error(ErrorKind::Degenerate, "zero-frequency mode: Gaussian vacuum is not normalizable");
  }
  const int n = form.n_modes();
  const Eigen::MatrixXd m = quadrature_matrix(form);
  const SymmetricRoots roots = symmetric_roots(m, true);
  const Eigen::MatrixXd k = roots.sqrt * symplectic_form(n) * roots.sqrt;
  const Eigen::MatrixXd abs_k = symmetric_roots(k.transpose() * k, false).sqrt;

  GaussianGround g;
  g.covariance = 0.5 * roots.inv_sqrt * abs_k * roots.inv_sqrt;
  g.covariance = 0.5 * (g.covariance + g.covariance.transpose());
  double sum = 0.0;
  for (double w : spec.mode_energies) sum += w;
  g.ground_energy = 0.5 * sum - 0.5 * form.conserving.trace().real() + form.offset;
  return g;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() % 2 != 0 || covariance.rows() != covariance.cols()) {
    throw Error(ErrorKind::InvalidArgument, "covariance must be 2k x 2k");
  }
  const Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
  return positive_pair_values(symmetric_roots(sym, false).sqrt);
}

double entropy_bits(std::span<const double> symplectic) {
  double s = 0.0;
  for (double nu : symplectic) {
    if (nu - 0.5 <= kEntropyNuTol) continue;
    const double up = nu + 0.5;
    const double dn = nu - 0.5;
    s += up * std::log2(up) - dn * std::log2(dn);
  }
  return s;
}

Eigen::MatrixXd reduced_covariance(const GaussianGround& g, std::span<const int> modes) {
  const Eigen::Index k = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      out.block<2, 2>(2 * a, 2 * b) = g.covariance.block<2, 2>(2 * modes[a], 2 * modes[b]);
    }
  }
  return out;
}

double entanglement_entropy(const GaussianGround& g, std::span<const int> partition) {
  const int n = g.n_modes();
  if (partition.empty() || static_cast<int>(partition.size()) >= n) {
    throw Error(ErrorKind::BadPartition, "partition must be a nonempty proper subset of the modes");
  }
  std::set<int> seen;
  for (int m : partition) {
    if (m < 0 || m >= n) {
      throw Error(ErrorKind::BadPartition, "mode index " + std::to_string(m) + " out of range");
    }
    if (!seen.insert(m).second) {
      throw Error(ErrorKind::BadPartition, "duplicate mode index " + std::to_string(m));
    }
  }
  const std::vector<double> nu = symplectic_eigenvalues(reduced_covariance(g, partition));
  return entropy_bits(nu);
}

bool is_particle_conserving(const QuadraticBosonForm& form, double tol) {
  if (form.anomalous.size() == 0) return true;
  return form.anomalous.cwiseAbs().maxCoeff() < tol;
}

}  // namespace ecsym::boson
