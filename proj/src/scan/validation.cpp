#include "ecsym/scan/validation.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "ecsym/dicke_lattice.hpp"
#include "ecsym/ed_oracle.hpp"
#include "ecsym/error.hpp"
#include "ecsym/landau_mf.hpp"
#include "ecsym/lmg_model.hpp"
#include "ecsym/scan/config.hpp"
#include "ecsym/scan/scan.hpp"

namespace ecsym::scan {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Bisection for the boundary of a predicate that holds at lo and fails at hi.
double bisect(const std::function<bool(double)>& holds, double lo, double hi, double width) {
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

boson::QuadraticBosonForm random_stable_form(std::mt19937_64& rng, bool complex_entries) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    boson::QuadraticBosonForm f(2);
    f.conserving(0, 0) = 1.0 + 0.8 * std::abs(u(rng));
    f.conserving(1, 1) = 1.0 + 0.8 * std::abs(u(rng));
    const boson::cplx hop(0.3 * u(rng), complex_entries ? 0.3 * u(rng) : 0.0);
    f.add_hopping(0, 1, hop);
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        const boson::cplx pair(0.3 * u(rng), complex_entries ? 0.3 * u(rng) : 0.0);
        f.add_pairing(i, j, i == j ? 0.5 * pair : pair);
      }
    }
    const boson::SymplecticSpectrum s = boson::diagonalize(f);
    if (s.stable && !s.degenerate && s.mode_energies.front() > 0.3) return f;
  }
}

CheckResult check_critical_point() {
  CheckResult r;
  // Landau onset along rays in the (g+, g-) plane: the origin stops being a
  // minimum where max(|g+|, |g-|) crosses 1.
  double worst = 0.0;
  for (double angle : {0.0, 0.3, 0.7, 1.2, 2.0, 2.9, -0.5}) {
    const double cx = std::cos(angle);
    const double cp = std::sin(angle);
    auto symmetric = [&](double t) {
      return landau::origin_is_stable(landau::Potential{{t * cx, t * cp}, 1.0});
    };
    const double t = bisect(symmetric, 0.0, 4.0, 1e-13);
    const double gmax = t * std::max(std::abs(cx), std::abs(cp));
    const landau::MfSolution above = landau::minimize_mf(landau::CouplingPair{(t + 1e-6) * cx, (t + 1e-6) * cp});
    if (above.phase == landau::Phase::Normal) worst = 1.0;
    worst = std::max(worst, std::abs(gmax - 1.0));
  }
  // Lattice onset from the closing of the normal-phase gap.
  lattice::LatticeParams lp;
  lp.hop_j = -0.2;
  lp.geometry = lattice::LatticeGeometry::chain(8);
  auto gapped = [&](double g) {
    lp.dicke = dicke::DickeParams::from_couplings(g, 0.5 * g);
    const boson::SymplecticSpectrum s = boson::diagonalize(lattice::normal_phase_lattice_hamiltonian(lp));
    return s.stable && !s.degenerate && s.mode_energies.front() > 0.0;
  };
  const double gc = bisect(gapped, 0.1, 1.5, 1e-12);
  const double expected = std::sqrt(0.6);
  r.metrics = {{"landau_onset_error", worst},
               {"lattice_onset", gc},
               {"lattice_expected", expected},
               {"lattice_onset_error", std::abs(gc - expected)}};
  r.passed = worst < 1e-9 && std::abs(gc - expected) < 1e-6;
  return r;
}

CheckResult check_curvature_equality() {
  CheckResult r;
  double worst_eq = 0.0;
  double worst_fd = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double gp0 = 1.05 * std::pow(4.0 / 1.05, k / 49.0);
    // Alternate sign and which coupling dominates.
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    double gp = gp0;
    double gm = sign / gp0;
    if (k % 4 >= 2) std::swap(gp, gm);
    const landau::CouplingPair c{gp, gm};
    const auto [kx, kp] = landau::fluctuation_curvatures(c);
    worst_eq = std::max(worst_eq, std::abs(kx - kp));

    const landau::MfSolution s = landau::minimize_mf(c);
    const landau::Potential v{c, 1.0};
    const Eigen::Matrix2d hes = landau::mf_hessian(s.minimum, v);
    const double h = 1e-4;
    const double x = s.minimum.x_bar;
    const double p = s.minimum.p_bar;
    auto e = [&](double dx, double dp) { return landau::mf_energy({x + dx, p + dp}, v); };
    const double fxx = (e(h, 0) - 2 * e(0, 0) + e(-h, 0)) / (h * h);
    const double fpp = (e(0, h) - 2 * e(0, 0) + e(0, -h)) / (h * h);
    const double fxp = (e(h, h) - e(h, -h) - e(-h, h) + e(-h, -h)) / (4 * h * h);
    const double scale = std::max(1.0, hes.cwiseAbs().maxCoeff());
    worst_fd = std::max({worst_fd, std::abs(fxx - hes(0, 0)) / scale, std::abs(fpp - hes(1, 1)) / scale,
                         std::abs(fxp - hes(0, 1)) / scale, std::abs(0.5 * hes(0, 0) - kx) / scale,
                         std::abs(0.5 * hes(1, 1) - kp) / scale});
  }
  r.metrics = {{"max_curvature_difference", worst_eq}, {"max_hessian_error", worst_fd}};
  r.passed = worst_eq < 1e-12 && worst_fd < 1e-6;
  return r;
}

CheckResult check_tc_line(const ValidationHooks& hooks) {
  CheckResult r;
  const auto t0 = Clock::now();
  double worst_anom = 0.0;
  double worst_entropy = 0.0;
  double least_anti = std::numeric_limits<double>::infinity();
  const int part[] = {0};
  for (int k = 0; k < 20; ++k) {
    const double gp = 1.05 + (4.0 - 1.05) * k / 19.0;
    const auto tc = dicke::DickeParams::from_couplings(gp, 1.0 / gp);
    const boson::QuadraticBosonForm f = hooks.dicke_form(tc);
    worst_anom = std::max(worst_anom, f.anomalous.cwiseAbs().maxCoeff());
    worst_entropy =
        std::max(worst_entropy, boson::entanglement_entropy(boson::ground_state_covariance(f), part));
    const auto anti = dicke::DickeParams::from_couplings(gp, -1.0 / gp);
    least_anti = std::min(
        least_anti, boson::entanglement_entropy(boson::ground_state_covariance(hooks.dicke_form(anti)), part));
  }
  const double secs = seconds_since(t0);
  r.metrics = {{"max_anomalous", worst_anom},
               {"max_tc_entropy", worst_entropy},
               {"min_anti_tc_entropy", least_anti},
               {"runtime_s", secs}};
  r.passed = worst_anom < 1e-12 && worst_entropy < 1e-10 && least_anti > 0.01 && secs < 5.0;
  return r;
}

bool near_tc_curves(double gp, double gm, double h) {
  // Normal-region diagonal: some t in [-1, 1] within one cell in both directions.
  const double lo = std::max({gp - h, gm - h, -1.0});
  const double hi = std::min({gp + h, gm + h, 1.0});
  if (lo <= hi) return true;
  for (int k = 0; k <= 400; ++k) {
    const double x = gp - h + 2.0 * h * k / 400.0;
    if (x == 0.0) continue;
    const double y = 1.0 / x;
    if (std::max(std::abs(x), std::abs(y)) > 1.0 && std::abs(y - gm) <= h) return true;
  }
  return false;
}

CheckResult check_entanglement_diagram() {
  CheckResult r;
  ScanConfig cfg = default_config(Model::Dicke);
  cfg.threads = 4;
  const auto t0 = Clock::now();
  const ScanDataset d = run_scan(cfg);
  const double secs = seconds_since(t0);
  const double h = (cfg.axes[0].max - cfg.axes[0].min) / (cfg.axes[0].steps - 1) * (1.0 + 1e-9);
  int zero = 0;
  int stray = 0;
  int flagged = 0;
  int missing_on_curve = 0;
  for (const CellRecord& c : d.cells) {
    if (c.boundary) {
      ++flagged;
      continue;
    }
    const bool is_zero = c.entropy_bits && *c.entropy_bits < cfg.tolerances.zero_entropy;
    if (is_zero) {
      ++zero;
      if (!near_tc_curves(c.axis1, c.axis2, h)) ++stray;
    }
    const bool on_diag = c.axis1 == c.axis2 && std::max(std::abs(c.axis1), std::abs(c.axis2)) < 1.0;
    const bool on_hyper =
        std::abs(c.axis1 * c.axis2 - 1.0) < 1e-12 && std::max(std::abs(c.axis1), std::abs(c.axis2)) > 1.0;
    if ((on_diag || on_hyper) && !is_zero) ++missing_on_curve;
  }
  const double frac = static_cast<double>(flagged) / d.cells.size();
  r.metrics = {{"cells", d.cells.size()},       {"zero_entropy_cells", zero},
               {"stray_zero_cells", stray},     {"curve_cells_not_zero", missing_on_curve},
               {"boundary_fraction", frac},     {"runtime_s", secs}};
  r.passed = d.cells.size() == 61u * 61u && stray == 0 && missing_on_curve == 0 && zero > 0 && frac < 0.05 &&
             secs < 60.0;
  return r;
}

CheckResult check_lattice_factorization() {
  CheckResult r;
  const auto t0 = Clock::now();
  struct Case {
    std::string name;
    lattice::LatticeGeometry geom;
  };
  std::vector<Case> cases{{"chain8", lattice::LatticeGeometry::chain(8)},
                          {"torus3x3", lattice::LatticeGeometry::torus(3, 3)}};
  json per = json::object();
  double worst = 0.0;
  std::vector<double> energy_per_site;
  for (const Case& c : cases) {
    lattice::LatticeParams lp;
    lp.geometry = c.geom;
    lp.hop_j = -0.4 / c.geom.coordination;  // g_c^2 = 1 + J z = 0.6
    lp.dicke = dicke::DickeParams::from_couplings(1.2, 0.6 / 1.2);
    const boson::QuadraticBosonForm f = lattice::effective_lattice_hamiltonian(lp);
    const boson::GaussianGround g = boson::ground_state_covariance(f);
    std::vector<std::vector<int>> parts;
    for (int s = 0; s < c.geom.n_sites; ++s) parts.push_back(lattice::site_partition(c.geom, {s}));
    parts.push_back(lattice::half_lattice_partition(c.geom));
    parts.push_back(lattice::site_partition(c.geom, {0, 2, 5}));
    parts.push_back({0});                   // a cavity alone
    parts.push_back({c.geom.n_sites + 1});  // a spin alone
    double local = 0.0;
    for (const auto& part : parts) local = std::max(local, boson::entanglement_entropy(g, part));
    worst = std::max(worst, local);
    energy_per_site.push_back(g.ground_energy / c.geom.n_sites);
    per[c.name] = {{"max_entropy", local}, {"partitions", parts.size()}, {"energy_per_site", energy_per_site.back()}};
  }
  const double secs = seconds_since(t0);
  const double spread = std::abs(energy_per_site[0] - energy_per_site[1]);
  r.metrics = {{"geometries", per}, {"max_entropy", worst}, {"energy_per_site_difference", spread}, {"runtime_s", secs}};
  r.passed = worst < 1e-10 && spread < 1e-10 && secs < 30.0;
  return r;
}

CheckResult check_uniformity() {
  CheckResult r;
  json runs = json::array();
  bool ok = true;
  for (const auto& [gp, gm] : std::vector<std::pair<double, double>>{{1.5, 0.4}, {0.6, 1.3}, {1.2, -0.8}}) {
    lattice::LatticeParams lp;
    lp.geometry = lattice::LatticeGeometry::chain(4);
    lp.hop_j = -0.2;
    lp.dicke = dicke::DickeParams::from_couplings(gp, gm);
    const lattice::UniformityReport u = lattice::verify_uniform_minimum(lp, 64);
    ok = ok && u.uniform_wins(1e-8);
    runs.push_back({{"g_plus", gp},
                    {"g_minus", gm},
                    {"uniform_energy", u.uniform_energy},
                    {"best_found", u.best_nonuniform_energy},
                    {"starts", u.starts}});
  }
  r.metrics = {{"runs", runs}};
  r.passed = ok;
  return r;
}

CheckResult check_lmg_factorization() {
  CheckResult r;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double gx = 1.05 + (3.0 - 1.05) * k / 19.0;
    lmg::LmgParams p{1.0, gx, 1.0 / gx, 0};
    if (k % 2 == 1) std::swap(p.gamma_x, p.gamma_y);
    worst = std::max(worst, lmg::two_block_entropy(p));
  }
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(0.9 + 0.2 * k / 40.0);
  const lmg::EntanglementCurve curve = lmg::entanglement_curve(1.0, 1.05, grid);
  const double expected = 1.0 / std::sqrt(1.05);
  const double crossing = curve.zero_crossing.value_or(std::nan(""));

  std::vector<double> ed;
  ed::LmgEdOptions opts;
  opts.compute_fidelity = false;
  for (int n : {8, 16, 32, 64}) ed.push_back(ed::lmg_ed({1.0, 2.0, 0.5, n}, n, opts).entropy_bits);
  bool decreasing = true;
  for (std::size_t k = 1; k < ed.size(); ++k) decreasing = decreasing && ed[k] < ed[k - 1];
  r.metrics = {{"max_line_entropy", worst},
               {"zero_crossing", crossing},
               {"expected_crossing", expected},
               {"ed_entropy", ed}};
  r.passed = worst < 1e-8 && std::abs(crossing - expected) < 1e-4 && ed.back() < 0.02 && decreasing;
  return r;
}

CheckResult check_gaussian_vs_ed() {
  CheckResult r;
  std::mt19937_64 rng(2024);
  double worst_e = 0.0;
  double worst_s = 0.0;
  const int part[] = {0};
  for (int k = 0; k < 25; ++k) {
    const boson::QuadraticBosonForm f = random_stable_form(rng, k % 2 == 1);
    const boson::GaussianGround g = boson::ground_state_covariance(f);
    const ed::EdResult e = ed::quadratic_ed(f, 40);
    worst_e = std::max(worst_e, std::abs(e.ground_energy - g.ground_energy));
    worst_s = std::max(worst_s, std::abs(e.entropy_bits - boson::entanglement_entropy(g, part)));
  }
  r.metrics = {{"max_energy_difference", worst_e}, {"max_entropy_difference", worst_s}};
  r.passed = worst_e < 1e-4 && worst_s < 1e-4;
  return r;
}

CheckResult check_isospectrality() {
  CheckResult r;
  double worst_lmg = 0.0;
  for (const auto& [gx, gy] : std::vector<std::pair<double, double>>{{2.0, 0.5}, {1.5, 0.3}, {0.4, 1.7}, {3.0, 1.2}}) {
    const lmg::LmgParams p{1.0, gx, gy, 0};
    const Eigen::VectorXd a =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(lmg::lmg_matrix(p, 8), Eigen::EigenvaluesOnly).eigenvalues();
    const Eigen::VectorXd b = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                  lmg::rotated_matrix(lmg::rotated_hamiltonian(p), 8), Eigen::EigenvaluesOnly)
                                  .eigenvalues();
    worst_lmg = std::max(worst_lmg, (a - b).cwiseAbs().maxCoeff());
  }
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_dicke = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double gp = 1.05 + 2.95 * u(rng);
    const double gm = gp * (-0.95 + 1.9 * u(rng));
    const double w0 = 0.5 + 1.5 * u(rng);
    const double ws = 0.5 + 1.5 * u(rng);
    const auto dp = dicke::DickeParams::from_couplings(gp, gm, w0, ws);
    const boson::QuadraticBosonForm f = dicke::quadratic_expansion(dp, dicke::mean_field(dp));
    const double lt = std::sqrt(w0 * ws) / (2.0 * gp);
    Eigen::MatrixXcd a(2, 2);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2, 2);
    a << w0, lt + dp.lambda_minus, lt + dp.lambda_minus, gp * gp * ws;
    b(0, 1) = b(1, 0) = lt - dp.lambda_minus;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    worst_dicke = std::max({worst_dicke, (f.conserving - a).cwiseAbs().maxCoeff() / scale,
                            (f.anomalous - b).cwiseAbs().maxCoeff() / scale});
  }
  r.metrics = {{"lmg_max_eigenvalue_difference", worst_lmg}, {"dicke_max_coefficient_error", worst_dicke}};
  r.passed = worst_lmg < 1e-10 && worst_dicke < 1e-12;
  return r;
}

CheckResult check_determinism() {
  CheckResult r;
  ScanConfig cfg = default_config(Model::Dicke);
  std::vector<std::string> csv;
  for (int threads : {1, 2, 8}) {
    cfg.threads = threads;
    csv.push_back(emit_csv(run_scan(cfg)));
  }
  const bool same = csv[0] == csv[1] && csv[0] == csv[2];
  r.metrics = {{"bytes", csv[0].size()}, {"identical", same}};
  r.passed = same;
  return r;
}

CheckResult check_config_roundtrip() {
  CheckResult r;
  bool ok = true;
  for (Model m : {Model::Landau, Model::Dicke, Model::DickeLattice, Model::Lmg}) {
    ScanConfig c = default_config(m);
    c.partition = m == Model::DickeLattice ? std::vector<int>{0, 8} : std::vector<int>{1};
    const json once = to_json(c);
    ok = ok && to_json(parse_config(once)) == once;
  }
  r.metrics = {{"identical", ok}};
  r.passed = ok;
  return r;
}

CheckResult check_uncertainty() {
  CheckResult r;
  std::mt19937_64 rng(5);
  double least = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 50; ++k) {
    const auto g = boson::ground_state_covariance(random_stable_form(rng, k % 2 == 0));
    for (double nu : boson::symplectic_eigenvalues(g.covariance)) least = std::min(least, nu);
  }
  r.metrics = {{"min_symplectic_eigenvalue", least}};
  r.passed = least > 0.5 - 1e-10 && std::abs(least - 0.5) < 1e-8;  // pure states sit at 1/2
  return r;
}

CheckResult check_csv_shape() {
  CheckResult r;
  ScanConfig cfg = default_config(Model::Dicke);
  cfg.axes[0].steps = 2;
  cfg.axes[1].steps = 2;
  const std::string csv = emit_csv(run_scan(cfg));
  const long lines = std::count(csv.begin(), csv.end(), '\n');
  const bool no_cr = csv.find('\r') == std::string::npos;
  r.metrics = {{"lines", lines}, {"lf_only", no_cr}};
  r.passed = lines == 5 && no_cr;
  return r;
}

CheckResult check_clebsch_normalization() {
  CheckResult r;
  double worst = 0.0;
  for (double j1 : {0.5, 2.0, 8.0, 32.0}) {
    const double j2 = j1;
    for (double m = -(j1 + j2); m <= j1 + j2; m += 1.0) {
      double sum = 0.0;
      for (double m1 = -j1; m1 <= j1; m1 += 1.0) {
        const double m2 = m - m1;
        if (std::abs(m2) > j2) continue;
        const double c = ed::stretched_clebsch_gordan(j1, m1, j2, m2);
        sum += c * c;
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  r.metrics = {{"max_normalization_error", worst}};
  r.passed = worst < 1e-10;
  return r;
}

struct Entry {
  CheckInfo info;
  std::function<CheckResult(const ValidationHooks&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {{"A1", "critical point of the Landau potential and of the lattice"},
       [](const ValidationHooks&) { return check_critical_point(); }},
      {{"A2", "equal fluctuation curvatures on |g+ g-| = 1"},
       [](const ValidationHooks&) { return check_curvature_equality(); }},
      {{"A3", "factorization on the TC line, entanglement on the anti-TC line"}, check_tc_line},
      {{"A4", "61x61 Dicke entanglement diagram"},
       [](const ValidationHooks&) { return check_entanglement_diagram(); }},
      {{"A5", "lattice factorization on chain and torus"},
       [](const ValidationHooks&) { return check_lattice_factorization(); }},
      {{"A6", "uniform mean field wins the multi-start search"},
       [](const ValidationHooks&) { return check_uniformity(); }},
      {{"A7", "LMG factorization line, zero crossing and ED trend"},
       [](const ValidationHooks&) { return check_lmg_factorization(); }},
      {{"A8", "Gaussian engine against Fock-space ED"},
       [](const ValidationHooks&) { return check_gaussian_vs_ed(); }},
      {{"A9", "isospectral LMG rotation, Dicke expansion coefficients"},
       [](const ValidationHooks&) { return check_isospectrality(); }},
      {{"A10", "byte-identical scans at 1, 2 and 8 workers"},
       [](const ValidationHooks&) { return check_determinism(); }},
      {{"config_roundtrip", "parse(serialize(config)) is the identity"},
       [](const ValidationHooks&) { return check_config_roundtrip(); }},
      {{"uncertainty", "Gaussian ground states are pure and physical"},
       [](const ValidationHooks&) { return check_uncertainty(); }},
      {{"csv_shape", "2x2 scan gives header plus 4 rows"},
       [](const ValidationHooks&) { return check_csv_shape(); }},
      {{"clebsch_normalization", "stretched Clebsch-Gordan rows are normalized"},
       [](const ValidationHooks&) { return check_clebsch_normalization(); }},
  };
  return entries;
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

json ValidationReport::to_json() const {
  json j;
  j["checks"] = json::array();
  int failed = 0;
  for (const CheckResult& c : checks) {
    if (!c.passed) ++failed;
    j["checks"].push_back({{"id", c.id},
                           {"description", c.description},
                           {"passed", c.passed},
                           {"metrics", c.metrics},
                           {"seconds", c.seconds}});
  }
  j["total"] = checks.size();
  j["failed"] = failed;
  j["passed"] = failed == 0;
  return j;
}

std::vector<CheckInfo> available_checks() {
  std::vector<CheckInfo> out;
  for (const Entry& e : registry()) out.push_back(e.info);
  return out;
}

ValidationReport run_validation_suite(const std::vector<std::string>& selection, const ValidationHooks& hooks) {
  std::vector<const Entry*> chosen;
  for (const std::string& id : selection) {
    if (id == "all") {
      for (const Entry& e : registry()) chosen.push_back(&e);
      continue;
    }
    auto it = std::find_if(registry().begin(), registry().end(), [&](const Entry& e) { return e.info.id == id; });
    if (it == registry().end()) throw Error(ErrorKind::ConfigError, "/checks: unknown check '" + id + "'");
    chosen.push_back(&*it);
  }
  ValidationReport report;
  for (const Entry* e : chosen) {
    const auto t0 = Clock::now();
    CheckResult r;
    try {
      r = e->run(hooks);
    } catch (const std::exception& ex) {
      r.passed = false;
      r.metrics = {{"exception", ex.what()}};
    }
    r.id = e->info.id;
    r.description = e->info.description;
    r.seconds = seconds_since(t0);
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace ecsym::scan
