#include "ecsym/ed_oracle.hpp"

#include <gsl/gsl_multimin.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ecsym/error.hpp"

namespace ecsym::ed {

using cplx = std::complex<double>;
using SpMatRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;

namespace {

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Lowest eigenvector of the sub-block of `h` spanned by `indices`, embedded back.
struct SectorGround {
  double energy;
  Eigen::VectorXd vector;  // full-space vector
  bool converged;
};

SectorGround sector_ground(const SpMatRow& h, const std::vector<int>& indices,
                           const sparse::LanczosOptions& opts) {
  const int full = static_cast<int>(h.rows());
  std::vector<int> local(full, -1);
  for (std::size_t k = 0; k < indices.size(); ++k) local[indices[k]] = static_cast<int>(k);
  std::vector<Eigen::Triplet<double>> trip;
  for (int r : indices) {
    for (SpMatRow::InnerIterator it(h, r); it; ++it) {
      if (local[it.col()] >= 0) trip.emplace_back(local[r], local[it.col()], it.value());
    }
  }
  const int n = static_cast<int>(indices.size());
  SpMatRow sub(n, n);
  sub.setFromTriplets(trip.begin(), trip.end());
  const sparse::EigenPair ep = sparse::lowest_eigenpair(sparse::CsrMatrix(sub), opts);
  SectorGround g{ep.value, Eigen::VectorXd::Zero(full), ep.converged};
  for (int k = 0; k < n; ++k) g.vector(indices[k]) = ep.vector(k);
  return g;
}

// Equal-weight superposition of the two parity ground states with the relative
// phase that makes <O> real and positive.
Eigen::VectorXcd aligned_superposition(const Eigen::VectorXd& even, const Eigen::VectorXd& odd,
                                       const Eigen::VectorXcd& odd_image) {
  // odd_image = O |odd>
  const cplx m = even.cast<cplx>().dot(odd_image);
  const double chi = std::abs(m) > 0.0 ? -std::arg(m) : 0.0;
  Eigen::VectorXcd psi = even.cast<cplx>() + std::polar(1.0, chi) * odd.cast<cplx>();
  return psi / psi.norm();
}

double entropy_from_weights(const Eigen::VectorXd& sv) {
  double s = 0.0;
  for (int k = 0; k < sv.size(); ++k) {
    const double w = sv(k) * sv(k);
    if (w > 1e-300) s -= w * std::log2(w);
  }
  return std::max(s, 0.0);
}

struct FidelityContext {
  const EdState* state;
  Eigen::MatrixXcd amp;
};

double fidelity_at(const FidelityContext& ctx, const double* q) {
  const EdState& st = *ctx.state;
  Eigen::VectorXcd left;
  Eigen::VectorXcd right;
  if (st.model == EdModel::Dicke) {
    left = coherent_state(st.coherent_scale * cplx(q[0], q[1]), st.dim_left - 1);
    right = spin_coherent_state(st.spin_right, q[2], q[3]);
  } else {
    left = spin_coherent_state(st.spin_left, q[0], q[1]);
    right = spin_coherent_state(st.spin_right, q[2], q[3]);
  }
  const cplx ov = left.adjoint() * ctx.amp * right.conjugate();
  return std::norm(ov);
}

double negative_fidelity(const gsl_vector* v, void* p) {
  return -fidelity_at(*static_cast<const FidelityContext*>(p), v->data);
}

}  // namespace

Eigen::MatrixXcd EdState::as_matrix() const {
  Eigen::MatrixXcd m(dim_left, dim_right);
  for (int r = 0; r < dim_left; ++r) {
    for (int c = 0; c < dim_right; ++c) m(r, c) = amplitudes(r * dim_right + c);
  }
  return m;
}

double schmidt_entropy_bits(const Eigen::MatrixXcd& amplitudes) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(amplitudes);
  return entropy_from_weights(svd.singularValues());
}

double stretched_clebsch_gordan(double j1, double m1, double j2, double m2) {
  const double j = j1 + j2;
  const double m = m1 + m2;
  if (std::abs(m1) > j1 || std::abs(m2) > j2) return 0.0;
  const double lg = log_binomial(2 * j1, j1 + m1) + log_binomial(2 * j2, j2 + m2) -
                    log_binomial(2 * j, j + m);
  return std::exp(0.5 * lg);
}

Eigen::VectorXcd spin_coherent_state(double j, double theta, double phi) {
  const int dim = static_cast<int>(std::lround(2 * j)) + 1;
  Eigen::VectorXcd v(dim);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  for (int k = 0; k < dim; ++k) {
    const double m = k - j;
    const int up = static_cast<int>(std::lround(j + m));
    const int dn = static_cast<int>(std::lround(j - m));
    const double mag = std::exp(0.5 * log_binomial(2 * j, j + m)) * std::pow(c, up) * std::pow(s, dn);
    v(k) = std::polar(1.0, -m * phi) * mag;
  }
  return v;
}

Eigen::VectorXcd coherent_state(cplx alpha, int cutoff) {
  Eigen::VectorXcd v(cutoff + 1);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= cutoff; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return v;
}

double product_fidelity(const EdState& state, const std::array<double, 4>& seed) {
  FidelityContext ctx{&state, state.as_matrix()};
  gsl_multimin_function fn{&negative_fidelity, 4, &ctx};
  gsl_vector* x = gsl_vector_alloc(4);
  gsl_vector* step = gsl_vector_alloc(4);
  for (int k = 0; k < 4; ++k) {
    gsl_vector_set(x, k, seed[k]);
    gsl_vector_set(step, k, 0.05);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  for (int it = 0; it < 4000; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-10) == GSL_SUCCESS) break;
  }
  const double best = std::max(-s->fval, fidelity_at(ctx, seed.data()));
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return best;
}

SpMatRow dicke_matrix(const dicke::DickeParams& p, int n_atoms, int cutoff) {
  p.validate();
  const int ds = n_atoms + 1;
  const int dim = (cutoff + 1) * ds;
  const double j = 0.5 * n_atoms;
  const double root_n = std::sqrt(static_cast<double>(n_atoms));
  const double c_pp = (p.lambda_plus - p.lambda_minus) / root_n;  // a^dag J+ + a J-
  const double c_pm = (p.lambda_plus + p.lambda_minus) / root_n;  // a^dag J- + a J+
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(dim) * 5);
  for (int n = 0; n <= cutoff; ++n) {
    for (int k = 0; k < ds; ++k) {
      const double m = k - j;
      const int idx = n * ds + k;
      trip.emplace_back(idx, idx, p.omega0 * n + p.omega_spin * m);
      if (n == cutoff) continue;
      const double bos = std::sqrt(n + 1.0);
      if (k + 1 < ds && c_pp != 0.0) {
        const double v = c_pp * bos * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        const int to = (n + 1) * ds + k + 1;
        trip.emplace_back(to, idx, v);
        trip.emplace_back(idx, to, v);
      }
      if (k > 0 && c_pm != 0.0) {
        const double v = c_pm * bos * std::sqrt(j * (j + 1.0) - m * (m - 1.0));
        const int to = (n + 1) * ds + k - 1;
        trip.emplace_back(to, idx, v);
        trip.emplace_back(idx, to, v);
      }
    }
  }
  SpMatRow h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

namespace {

struct DickeRun {
  double energy;
  double parity_gap;
  double entropy;
  bool lanczos_ok;
  EdState state;
};

DickeRun dicke_at_cutoff(const dicke::DickeParams& p, int n_atoms, int cutoff,
                         const DickeEdOptions& opts) {
  const SpMatRow h = dicke_matrix(p, n_atoms, cutoff);
  const int ds = n_atoms + 1;
  std::vector<int> sectors[2];
  for (int n = 0; n <= cutoff; ++n) {
    for (int k = 0; k < ds; ++k) sectors[(n + k) % 2].push_back(n * ds + k);
  }
  const SectorGround even = sector_ground(h, sectors[0], opts.lanczos);
  const SectorGround odd = sector_ground(h, sectors[1], opts.lanczos);

  DickeRun run;
  run.energy = std::min(even.energy, odd.energy);
  run.parity_gap = odd.energy - even.energy;
  run.lanczos_ok = even.converged && odd.converged;
  run.state.model = EdModel::Dicke;
  run.state.dim_left = cutoff + 1;
  run.state.dim_right = ds;
  run.state.spin_right = 0.5 * n_atoms;
  run.state.coherent_scale = std::sqrt(n_atoms * p.omega_spin / p.omega0);

  const landau::CouplingPair c = p.couplings();
  const bool broken = std::max(std::abs(c.g_plus), std::abs(c.g_minus)) > 1.0;
  if (opts.symmetry == SymmetryHandling::Auto && broken) {
    // Order parameter: a + a^dag on the x branch, i(a^dag - a) on the p branch.
    const bool p_branch = std::abs(c.g_minus) > std::abs(c.g_plus);
    Eigen::VectorXcd image = Eigen::VectorXcd::Zero(h.rows());
    for (int n = 0; n <= cutoff; ++n) {
      for (int k = 0; k < ds; ++k) {
        const cplx amp = odd.vector(n * ds + k);
        if (amp == 0.0) continue;
        if (n + 1 <= cutoff) {  // a^dag
          const cplx w = p_branch ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
          image((n + 1) * ds + k) += w * std::sqrt(n + 1.0) * amp;
        }
        if (n > 0) {  // a
          const cplx w = p_branch ? cplx(0.0, -1.0) : cplx(1.0, 0.0);
          image((n - 1) * ds + k) += w * std::sqrt(static_cast<double>(n)) * amp;
        }
      }
    }
    run.state.amplitudes = aligned_superposition(even.vector, odd.vector, image);
  } else {
    run.state.amplitudes = (even.energy <= odd.energy ? even.vector : odd.vector).cast<cplx>();
  }
  run.entropy = schmidt_entropy_bits(run.state.as_matrix());
  return run;
}

}  // namespace

EdResult dicke_ed(const dicke::DickeParams& p, int n_atoms, const DickeEdOptions& opts) {
  p.validate();
  if (n_atoms > kMaxAtoms) {
    throw Error(ErrorKind::OutOfMemoryBudget, "n_atoms above " + std::to_string(kMaxAtoms));
  }
  if (n_atoms < 2 || n_atoms % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "n_atoms must be even and >= 2");
  }
  if (opts.fock_cutoff > kMaxCutoff) {
    throw Error(ErrorKind::OutOfMemoryBudget, "fock_cutoff above " + std::to_string(kMaxCutoff));
  }
  if (opts.fock_cutoff < 0) throw Error(ErrorKind::InvalidArgument, "negative fock_cutoff");

  const bool automatic = opts.fock_cutoff == 0;
  int cutoff = opts.fock_cutoff;
  if (automatic) {
    const double g2 = std::max({1.0, p.g_plus() * p.g_plus(), p.g_minus() * p.g_minus()});
    cutoff = static_cast<int>(std::min<double>(kMaxCutoff, std::ceil(4.0 * g2 * n_atoms)));
  }
  cutoff = std::max(cutoff, 2);

  DickeRun coarse = dicke_at_cutoff(p, n_atoms, cutoff / 2, opts);
  DickeRun fine = dicke_at_cutoff(p, n_atoms, cutoff, opts);
  while (automatic && std::abs(fine.entropy - coarse.entropy) >= opts.entropy_tol &&
         2 * cutoff <= kMaxCutoff) {
    cutoff *= 2;
    coarse = std::move(fine);
    fine = dicke_at_cutoff(p, n_atoms, cutoff, opts);
  }

  EdResult r;
  r.ground_energy = fine.energy;
  r.entropy_bits = fine.entropy;
  r.parity_gap = fine.parity_gap;
  r.cutoff_used = cutoff;
  r.converged = fine.lanczos_ok && std::abs(fine.entropy - coarse.entropy) < opts.entropy_tol;
  r.state = std::move(fine.state);
  if (opts.compute_fidelity) {
    const dicke::SpinBosonMf mf = dicke::mean_field(p);
    r.product_fidelity = product_fidelity(r.state, {mf.x_bar, mf.p_bar, mf.theta, mf.phi});
  }
  return r;
}

EdResult lmg_ed(const lmg::LmgParams& p, int n_spins, const LmgEdOptions& opts) {
  p.validate();
  if (n_spins < 4 || n_spins % 4 != 0) {
    throw Error(ErrorKind::InvalidArgument, "n_spins must be a positive multiple of 4");
  }
  if (n_spins > kMaxLmgSpins) {
    throw Error(ErrorKind::OutOfMemoryBudget, "n_spins above " + std::to_string(kMaxLmgSpins));
  }
  const Eigen::MatrixXd h = lmg::lmg_matrix(p, n_spins);
  const int dim = n_spins + 1;
  const double j = 0.5 * n_spins;

  Eigen::VectorXd ground[2];
  double energy[2];
  for (int par = 0; par < 2; ++par) {
    std::vector<int> idx;
    for (int k = par; k < dim; k += 2) idx.push_back(k);
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXd sub(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) sub(a, b) = h(idx[a], idx[b]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
    energy[par] = es.eigenvalues()(0);
    ground[par] = Eigen::VectorXd::Zero(dim);
    for (int a = 0; a < n; ++a) ground[par](idx[a]) = es.eigenvectors()(a, 0);
  }

  EdResult r;
  r.ground_energy = std::min(energy[0], energy[1]);
  r.parity_gap = energy[1] - energy[0];
  r.converged = true;
  r.cutoff_used = dim;

  const lmg::BlochMf mf = lmg::mean_field(p);
  Eigen::VectorXcd psi;
  if (opts.symmetry == SymmetryHandling::Auto && mf.phase != lmg::BlochPhase::Polarized) {
    // O = J_x on the x branch, J_y = (J+ - J-)/(2i) on the y branch.
    const bool y_branch = mf.phase == lmg::BlochPhase::BrokenY;
    Eigen::VectorXcd image = Eigen::VectorXcd::Zero(dim);
    for (int k = 0; k < dim; ++k) {
      const double m = k - j;
      const double amp = ground[1](k);
      if (amp == 0.0) continue;
      if (k + 1 < dim) {
        const double up = std::sqrt(j * (j + 1.0) - m * (m + 1.0)) * amp;
        image(k + 1) += y_branch ? cplx(0.0, -0.5 * up) : cplx(0.5 * up, 0.0);
      }
      if (k > 0) {
        const double dn = std::sqrt(j * (j + 1.0) - m * (m - 1.0)) * amp;
        image(k - 1) += y_branch ? cplx(0.0, 0.5 * dn) : cplx(0.5 * dn, 0.0);
      }
    }
    psi = aligned_superposition(ground[0], ground[1], image);
  } else {
    psi = (energy[0] <= energy[1] ? ground[0] : ground[1]).cast<cplx>();
  }

  // Split into two halves of spin j/2 each.
  const double jh = 0.5 * j;
  const int dh = n_spins / 2 + 1;
  EdState st;
  st.model = EdModel::Lmg;
  st.dim_left = dh;
  st.dim_right = dh;
  st.spin_left = jh;
  st.spin_right = jh;
  st.amplitudes = Eigen::VectorXcd::Zero(dh * dh);
  for (int k1 = 0; k1 < dh; ++k1) {
    for (int k2 = 0; k2 < dh; ++k2) {
      const double m1 = k1 - jh;
      const double m2 = k2 - jh;
      const int k = static_cast<int>(std::lround(m1 + m2 + j));
      st.amplitudes(k1 * dh + k2) = psi(k) * stretched_clebsch_gordan(jh, m1, jh, m2);
    }
  }
  r.entropy_bits = schmidt_entropy_bits(st.as_matrix());
  r.state = std::move(st);
  if (opts.compute_fidelity) {
    r.product_fidelity = product_fidelity(r.state, {mf.theta0, mf.phi0, mf.theta0, mf.phi0});
  }
  return r;
}

Eigen::SparseMatrix<cplx, Eigen::RowMajor> quadratic_matrix(const boson::QuadraticBosonForm& form,
                                                            int cutoff) {
  form.validate();
  const int modes = form.n_modes();
  if (modes > 3) throw Error(ErrorKind::OutOfMemoryBudget, "quadratic_ed supports at most 3 modes");
  if (cutoff < 1) throw Error(ErrorKind::InvalidArgument, "fock_cutoff must be >= 1");
  const int base = cutoff + 1;
  int dim = 1;
  for (int k = 0; k < modes; ++k) dim *= base;
  std::vector<int> stride(modes);
  for (int k = modes - 1, s = 1; k >= 0; --k, s *= base) stride[k] = s;

  std::vector<Eigen::Triplet<cplx>> trip;
  std::vector<int> occ(modes);
  for (int idx = 0; idx < dim; ++idx) {
    for (int k = 0; k < modes; ++k) occ[k] = (idx / stride[k]) % base;
    cplx diag = form.offset;
    for (int k = 0; k < modes; ++k) diag += form.conserving(k, k).real() * occ[k];
    trip.emplace_back(idx, idx, diag);
    for (int i = 0; i < modes; ++i) {
      for (int jm = 0; jm < modes; ++jm) {
        // A_ij a_i^dag a_j, i != j
        if (i != jm && occ[jm] > 0 && occ[i] < cutoff && form.conserving(i, jm) != 0.0) {
          const int to = idx + stride[i] - stride[jm];
          trip.emplace_back(to, idx, form.conserving(i, jm) * std::sqrt((occ[i] + 1.0) * occ[jm]));
        }
      }
    }
    // Pairing: B_ij a_i^dag a_j^dag for i < j, B_ii/2 a_i^dag^2, plus conjugates.
    for (int i = 0; i < modes; ++i) {
      for (int jm = i; jm < modes; ++jm) {
        const cplx b = form.anomalous(i, jm);
        if (b == 0.0) continue;
        double amp = 0.0;
        int to = idx + stride[i] + stride[jm];
        if (i == jm) {
          if (occ[i] + 2 > cutoff) continue;
          amp = 0.5 * std::sqrt((occ[i] + 1.0) * (occ[i] + 2.0));
        } else {
          if (occ[i] + 1 > cutoff || occ[jm] + 1 > cutoff) continue;
          amp = std::sqrt((occ[i] + 1.0) * (occ[jm] + 1.0));
        }
        trip.emplace_back(to, idx, b * amp);
        trip.emplace_back(idx, to, std::conj(b) * amp);
      }
    }
  }
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

EdResult quadratic_ed(const boson::QuadraticBosonForm& form, int cutoff) {
  if (!boson::diagonalize(form).stable) {
    throw Error(ErrorKind::Unstable, "quadratic_ed needs a stable form");
  }
  const auto h = quadratic_matrix(form, cutoff);
  const int dim = static_cast<int>(h.rows());
  bool complex_entries = false;
  for (int r = 0; r < dim && !complex_entries; ++r) {
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator it(h, r); it; ++it) {
      if (it.value().imag() != 0.0) {
        complex_entries = true;
        break;
      }
    }
  }
  // Complex Hermitian H = Hr + i Hi acts on (u; v), psi = u + i v, as [[Hr, -Hi], [Hi, Hr]].
  const int rdim = complex_entries ? 2 * dim : dim;
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < dim; ++r) {
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator it(h, r); it; ++it) {
      const int c = static_cast<int>(it.col());
      trip.emplace_back(r, c, it.value().real());
      if (complex_entries) {
        trip.emplace_back(dim + r, dim + c, it.value().real());
        if (it.value().imag() != 0.0) {
          trip.emplace_back(r, dim + c, -it.value().imag());
          trip.emplace_back(dim + r, c, it.value().imag());
        }
      }
    }
  }
  SpMatRow real_h(rdim, rdim);
  real_h.setFromTriplets(trip.begin(), trip.end());
  const sparse::EigenPair ep = sparse::lowest_eigenpair(sparse::CsrMatrix(real_h));

  Eigen::VectorXcd psi(dim);
  for (int k = 0; k < dim; ++k) {
    psi(k) = complex_entries ? cplx(ep.vector(k), ep.vector(dim + k)) : cplx(ep.vector(k), 0.0);
  }
  psi /= psi.norm();

  const int base = cutoff + 1;
  EdResult r;
  r.ground_energy = ep.value;
  r.cutoff_used = cutoff;
  r.state.model = EdModel::Quadratic;
  r.state.dim_left = base;
  r.state.dim_right = dim / base;
  r.state.amplitudes = psi;
  const Eigen::MatrixXcd amp = r.state.as_matrix();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(amp);
  r.entropy_bits = entropy_from_weights(svd.singularValues());
  r.product_fidelity = svd.singularValues()(0) * svd.singularValues()(0);

  const int modes = form.n_modes();
  double top = 0.0;
  for (int k = 0; k < modes; ++k) {
    int stride = 1;
    for (int q = modes - 1; q > k; --q) stride *= base;
    double w = 0.0;
    for (int idx = 0; idx < dim; ++idx) {
      if ((idx / stride) % base == cutoff) w += std::norm(psi(idx));
    }
    top = std::max(top, w);
  }
  r.converged = ep.converged && top < 1e-10;
  return r;
}

}  // namespace ecsym::ed
