#include "ecsym/dicke_lattice.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "ecsym/error.hpp"

namespace ecsym::lattice {

namespace {

constexpr double kBoundaryTol = 1e-12;

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

// Collects the distinct unordered edges of a periodic grid.
LatticeGeometry grid(const std::vector<int>& dims) {
  int n = 1;
  for (int l : dims) n *= l;
  std::set<std::pair<int, int>> edges;
  std::vector<int> coord(dims.size());
  for (int site = 0; site < n; ++site) {
    int rem = site;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      coord[k] = rem % dims[k];
      rem /= dims[k];
    }
    int stride = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const int next = (coord[k] + 1) % dims[k];
      const int nb = site + (next - coord[k]) * stride;
      edges.insert(ordered(site, nb));
      stride *= dims[k];
    }
  }
  return LatticeGeometry::from_edges(n, {edges.begin(), edges.end()});
}

}  // namespace

LatticeGeometry LatticeGeometry::chain(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "periodic chain needs at least 3 sites");
  return grid({n});
}

LatticeGeometry LatticeGeometry::torus(int lx, int ly) {
  if (lx < 3 || ly < 3) throw Error(ErrorKind::InvalidArgument, "torus sides must be >= 3");
  return grid({lx, ly});
}

LatticeGeometry LatticeGeometry::hypercubic(int l, int d) {
  if (d < 1 || d > 3) throw Error(ErrorKind::InvalidArgument, "hypercubic dimension must be 1..3");
  if (l < 3) throw Error(ErrorKind::InvalidArgument, "hypercubic side must be >= 3");
  return grid(std::vector<int>(d, l));
}

LatticeGeometry LatticeGeometry::triangle() { return from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

LatticeGeometry LatticeGeometry::from_edges(int n_sites, std::vector<std::pair<int, int>> edges) {
  LatticeGeometry g;
  g.n_sites = n_sites;
  g.edges = std::move(edges);
  std::vector<int> degree(std::max(n_sites, 0), 0);
  for (const auto& [a, b] : g.edges) {
    if (a >= 0 && a < n_sites) ++degree[a];
    if (b >= 0 && b < n_sites) ++degree[b];
  }
  g.coordination = degree.empty() ? 0 : degree.front();
  g.validate();
  return g;
}

void LatticeGeometry::validate() const {
  if (n_sites < 2) throw Error(ErrorKind::InvalidArgument, "lattice needs at least 2 sites");
  std::set<std::pair<int, int>> seen;
  std::vector<int> degree(n_sites, 0);
  std::vector<std::vector<int>> adj(n_sites);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_sites || b >= n_sites) {
      throw Error(ErrorKind::InvalidArgument,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    }
    if (a == b) throw Error(ErrorKind::InvalidArgument, "self-loop at site " + std::to_string(a));
    if (!seen.insert(ordered(a, b)).second) {
      throw Error(ErrorKind::InvalidArgument,
                  "repeated edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    ++degree[a];
    ++degree[b];
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (int s = 0; s < n_sites; ++s) {
    if (degree[s] != coordination || coordination == 0) {
      throw Error(ErrorKind::InvalidArgument, "graph is not regular with z = " +
                                                  std::to_string(coordination));
    }
  }
  std::vector<char> visited(n_sites, 0);
  std::vector<int> stack{0};
  visited[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (int t : adj[s]) {
      if (!visited[t]) {
        visited[t] = 1;
        ++count;
        stack.push_back(t);
      }
    }
  }
  if (count != n_sites) throw Error(ErrorKind::InvalidArgument, "graph is not connected");
}

void LatticeParams::validate() const {
  dicke.validate();
  geometry.validate();
  if (hop_j > 0.0) {
    throw Error(ErrorKind::InvalidArgument, "hopping J must be <= 0 (frustrated regime unsupported)");
  }
  if (!(1.0 + geometry.coordination * hop_j / dicke.omega0 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "1 + J z / omega0 must be positive");
  }
}

double critical_coupling(const LatticeParams& p) {
  p.validate();
  return std::sqrt(1.0 + p.hop_j * p.geometry.coordination / p.dicke.omega0);
}

landau::Potential uniform_potential(const LatticeParams& p) {
  const double gc = critical_coupling(p);
  return {p.dicke.couplings(), gc * gc};
}

landau::MfSolution mean_field_uniform(const LatticeParams& p) {
  return landau::minimize_mf(uniform_potential(p));
}

double site_resolved_energy(const LatticeParams& p, const std::vector<double>& xp) {
  const landau::CouplingPair c = p.dicke.couplings();
  const int n = p.geometry.n_sites;
  double e = 0.0;
  for (int j = 0; j < n; ++j) e += landau::mf_energy({xp[2 * j], xp[2 * j + 1]}, c);
  const double k = 2.0 * p.hop_j / p.dicke.omega0;
  for (const auto& [a, b] : p.geometry.edges) {
    e += k * (xp[2 * a] * xp[2 * b] + xp[2 * a + 1] * xp[2 * b + 1]);
  }
  return e;
}

namespace {

struct MinimizeContext {
  const LatticeParams* params;
};

double gsl_energy(const gsl_vector* v, void* ctx) {
  const auto* c = static_cast<const MinimizeContext*>(ctx);
  std::vector<double> xp(v->data, v->data + v->size);
  return site_resolved_energy(*c->params, xp);
}

void gsl_gradient(const gsl_vector* v, void* ctx, gsl_vector* grad) {
  const auto* c = static_cast<const MinimizeContext*>(ctx);
  const LatticeParams& p = *c->params;
  const landau::Potential single{p.dicke.couplings(), 1.0};
  const int n = p.geometry.n_sites;
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector2d g = landau::mf_gradient({gsl_vector_get(v, 2 * j),
                                                   gsl_vector_get(v, 2 * j + 1)}, single);
    gsl_vector_set(grad, 2 * j, g[0]);
    gsl_vector_set(grad, 2 * j + 1, g[1]);
  }
  const double k = 2.0 * p.hop_j / p.dicke.omega0;
  for (const auto& [a, b] : p.geometry.edges) {
    for (int q = 0; q < 2; ++q) {
      gsl_vector_set(grad, 2 * a + q, gsl_vector_get(grad, 2 * a + q) + k * gsl_vector_get(v, 2 * b + q));
      gsl_vector_set(grad, 2 * b + q, gsl_vector_get(grad, 2 * b + q) + k * gsl_vector_get(v, 2 * a + q));
    }
  }
}

void gsl_both(const gsl_vector* v, void* ctx, double* f, gsl_vector* grad) {
  *f = gsl_energy(v, ctx);
  gsl_gradient(v, ctx, grad);
}

}  // namespace

bool UniformityReport::uniform_wins(double tol) const {
  if (best_nonuniform_energy < uniform_energy - tol) return false;
  return !spread_checked || max_site_spread < 1e-6;
}

UniformityReport verify_uniform_minimum(const LatticeParams& p, int n_starts, unsigned long seed) {
  p.validate();
  const int n = p.geometry.n_sites;
  if (n > 16) throw Error(ErrorKind::InvalidArgument, "uniformity check limited to 16 sites");
  if (n_starts < 1) throw Error(ErrorKind::InvalidArgument, "need at least one start");

  UniformityReport rep;
  rep.starts = n_starts;
  rep.spread_checked = p.hop_j != 0.0;
  const landau::MfSolution uni = mean_field_uniform(p);
  std::vector<double> uniform_xp(2 * n);
  for (int j = 0; j < n; ++j) {
    uniform_xp[2 * j] = uni.minimum.x_bar;
    uniform_xp[2 * j + 1] = uni.minimum.p_bar;
  }
  rep.uniform_energy = site_resolved_energy(p, uniform_xp);

  const double gmax = std::max(std::abs(p.dicke.g_plus()), std::abs(p.dicke.g_minus()));
  const double span = std::max(1.0, gmax * gmax);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-span, span);

  MinimizeContext ctx{&p};
  gsl_multimin_function_fdf fn{&gsl_energy, &gsl_gradient, &gsl_both,
                               static_cast<std::size_t>(2 * n), &ctx};
  gsl_multimin_fdfminimizer* solver =
      gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, 2 * n);
  gsl_vector* start = gsl_vector_alloc(2 * n);

  rep.best_nonuniform_energy = std::numeric_limits<double>::infinity();
  std::vector<double> best(2 * n);
  for (int s = 0; s < n_starts; ++s) {
    for (int k = 0; k < 2 * n; ++k) gsl_vector_set(start, k, dist(rng));
    gsl_multimin_fdfminimizer_set(solver, &fn, start, 0.05, 0.1);
    for (int it = 0; it < 5000; ++it) {
      if (gsl_multimin_fdfminimizer_iterate(solver) != GSL_SUCCESS) break;
      if (gsl_multimin_test_gradient(solver->gradient, 1e-11) == GSL_SUCCESS) break;
    }
    const double e = solver->f;
    if (e < rep.best_nonuniform_energy) {
      rep.best_nonuniform_energy = e;
      best.assign(solver->x->data, solver->x->data + 2 * n);
    }
  }
  gsl_vector_free(start);
  gsl_multimin_fdfminimizer_free(solver);

  for (int q = 0; q < 2; ++q) {
    double lo = best[q];
    double hi = best[q];
    for (int j = 0; j < n; ++j) {
      lo = std::min(lo, best[2 * j + q]);
      hi = std::max(hi, best[2 * j + q]);
    }
    rep.max_site_spread = std::max(rep.max_site_spread, hi - lo);
  }
  return rep;
}

namespace {

void check_boundary(const LatticeParams& p) {
  const double gc = critical_coupling(p);
  const double gmax = std::max(std::abs(p.dicke.g_plus()), std::abs(p.dicke.g_minus()));
  if (std::abs(gmax - gc) <= kBoundaryTol) {
    throw Error(ErrorKind::OnBoundary, "max(|g+|,|g-|) = g_c: gap closes at the transition");
  }
}

boson::QuadraticBosonForm assemble(const LatticeParams& p, const dicke::SpinBosonMf& mf) {
  const int n = p.geometry.n_sites;
  const double shift = p.hop_j * p.geometry.coordination;
  const dicke::Expansion site = dicke::expand_around(p.dicke, mf, shift);
  const double unit = std::max({1.0, p.dicke.omega0, p.dicke.omega_spin});
  if (site.linear.norm() > dicke::kStationarityTol * unit) {
    throw Error(ErrorKind::NotStationary, "uniform mean field is not stationary on the lattice");
  }
  boson::QuadraticBosonForm f(2 * n);
  for (int j = 0; j < n; ++j) {
    const int idx[2] = {j, n + j};
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        f.conserving(idx[r], idx[c]) = site.form.conserving(r, c);
        f.anomalous(idx[r], idx[c]) = site.form.anomalous(r, c);
      }
    }
  }
  for (const auto& [a, b] : p.geometry.edges) f.add_hopping(a, b, p.hop_j);
  return f;
}

}  // namespace

boson::QuadraticBosonForm effective_lattice_hamiltonian(const LatticeParams& p) {
  check_boundary(p);
  const landau::MfSolution sol = mean_field_uniform(p);
  dicke::SpinBosonMf mf;
  mf.x_bar = sol.minimum.x_bar;
  mf.p_bar = sol.minimum.p_bar;
  std::tie(mf.theta, mf.phi) = dicke::optimal_spin_angles(p.dicke.couplings(), mf.x_bar, mf.p_bar);
  mf.branch = sol.phase;
  mf.phase = sol.phase == landau::Phase::Normal ? dicke::MfPhase::Normal : dicke::MfPhase::Superradiant;
  return assemble(p, mf);
}

boson::QuadraticBosonForm normal_phase_lattice_hamiltonian(const LatticeParams& p) {
  p.validate();
  dicke::SpinBosonMf mf;
  mf.theta = std::numbers::pi;
  mf.phi = std::numbers::pi;
  return assemble(p, mf);
}

double factorization_residual(const LatticeParams& p) {
  const double gc = critical_coupling(p);
  return std::abs(p.dicke.g_plus() * p.dicke.g_minus()) - gc * gc;
}

std::vector<int> site_partition(const LatticeGeometry& g, const std::vector<int>& sites) {
  std::vector<int> modes;
  for (int s : sites) {
    if (s < 0 || s >= g.n_sites) {
      throw Error(ErrorKind::BadPartition, "site " + std::to_string(s) + " out of range");
    }
    modes.push_back(s);
    modes.push_back(g.n_sites + s);
  }
  std::sort(modes.begin(), modes.end());
  return modes;
}

std::vector<int> half_lattice_partition(const LatticeGeometry& g) {
  std::vector<int> sites;
  for (int s = 0; s < g.n_sites / 2; ++s) sites.push_back(s);
  return site_partition(g, sites);
}

}  // namespace ecsym::lattice
