#include "ecsym/scan/scan.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "ecsym/dicke_lattice.hpp"
#include "ecsym/dicke_model.hpp"
#include "ecsym/error.hpp"
#include "ecsym/landau_mf.hpp"
#include "ecsym/lmg_model.hpp"
#include "ecsym/quadratic_boson.hpp"

namespace ecsym::scan {

using nlohmann::json;

namespace {

CellRecord flagged(std::string phase, std::string symmetry) {
  CellRecord r;
  r.phase = std::move(phase);
  r.symmetry = std::move(symmetry);
  r.boundary = true;
  return r;
}

bool recoverable(ErrorKind k) {
  return k == ErrorKind::OnBoundary || k == ErrorKind::Unstable || k == ErrorKind::Degenerate ||
         k == ErrorKind::NotStationary;
}

std::string symmetry_label(landau::SymmetryClass s) {
  return s == landau::SymmetryClass::None ? "generic" : std::string(landau::to_string(s));
}

// Couplings measured in units of the critical coupling, so the landau
// classification applies unchanged to the lattice.
std::string dicke_symmetry(double gp, double gm, double gc, double tol) {
  if (std::max(std::abs(gp), std::abs(gm)) > gc) {
    return symmetry_label(landau::classify_symmetry({gp / gc, gm / gc}, tol));
  }
  if (std::abs(gp - gm) < tol) return "tc";
  if (std::abs(gp + gm) < tol) return "anti_tc";
  return "generic";
}

std::string branch_label(double gp, double gm, double gc, double tol) {
  const double ap = std::abs(gp);
  const double am = std::abs(gm);
  if (std::max(ap, am) <= gc) return "normal";
  if (std::abs(ap - am) <= tol) return "goldstone";
  return ap > am ? "broken_x" : "broken_p";
}

double lowest_mode(const boson::QuadraticBosonForm& f) {
  const boson::SymplecticSpectrum s = boson::diagonalize(f);
  if (!s.stable) throw Error(ErrorKind::Unstable, "fluctuation form is unstable");
  return s.mode_energies.front();
}

CellRecord landau_cell(const ScanConfig& cfg, const Params& p) {
  const Tolerances& tol = cfg.tolerances;
  const double gp = p.g_plus;
  const double gm = p.g_minus;
  const std::string phase = branch_label(gp, gm, 1.0, tol.symmetry);
  const std::string sym = dicke_symmetry(gp, gm, 1.0, tol.symmetry);
  if (std::abs(std::max(std::abs(gp), std::abs(gm)) - 1.0) <= tol.boundary || phase == "goldstone") {
    return flagged(phase, sym);
  }
  CellRecord r;
  r.phase = phase;
  r.symmetry = sym;
  const landau::MfSolution s = landau::minimize_mf(landau::CouplingPair{gp, gm});
  r.gap = std::min(s.curvature_x, s.curvature_p);
  return r;
}

std::vector<int> two_mode_partition(const ScanConfig& cfg) {
  if (cfg.partition) return *cfg.partition;
  return {0};
}

CellRecord dicke_cell(const ScanConfig& cfg, const Params& p) {
  const Tolerances& tol = cfg.tolerances;
  const double gp = p.g_plus;
  const double gm = p.g_minus;
  const std::string phase = branch_label(gp, gm, 1.0, tol.symmetry);
  const std::string sym = dicke_symmetry(gp, gm, 1.0, tol.symmetry);
  if (std::abs(std::max(std::abs(gp), std::abs(gm)) - 1.0) <= tol.boundary || phase == "goldstone") {
    return flagged(phase, sym);
  }
  const dicke::DickeParams dp = dicke::DickeParams::from_couplings(gp, gm, p.omega0, p.omega_spin);
  const boson::QuadraticBosonForm f = dicke::effective_hamiltonian(dp);
  const boson::GaussianGround g = boson::ground_state_covariance(f);
  const std::vector<int> part = two_mode_partition(cfg);
  CellRecord r;
  r.phase = phase;
  r.symmetry = sym;
  r.entropy_bits = boson::entanglement_entropy(g, part);
  r.gap = lowest_mode(f);
  return r;
}

CellRecord lattice_cell(const ScanConfig& cfg, const Params& p) {
  const Tolerances& tol = cfg.tolerances;
  lattice::LatticeParams lp;
  lp.dicke = dicke::DickeParams::from_couplings(p.g_plus, p.g_minus, p.omega0, p.omega_spin);
  lp.hop_j = p.hop_j;
  lp.geometry = cfg.geometry.build();
  const double gc = lattice::critical_coupling(lp);
  const std::string phase = branch_label(p.g_plus, p.g_minus, gc, tol.symmetry);
  const std::string sym = dicke_symmetry(p.g_plus, p.g_minus, gc, tol.symmetry);
  if (std::abs(std::max(std::abs(p.g_plus), std::abs(p.g_minus)) - gc) <= tol.boundary ||
      phase == "goldstone") {
    return flagged(phase, sym);
  }
  const boson::QuadraticBosonForm f = lattice::effective_lattice_hamiltonian(lp);
  const boson::GaussianGround g = boson::ground_state_covariance(f);
  const std::vector<int> part =
      cfg.partition ? *cfg.partition : lattice::half_lattice_partition(lp.geometry);
  CellRecord r;
  r.phase = phase;
  r.symmetry = sym;
  r.entropy_bits = boson::entanglement_entropy(g, part);
  r.gap = lowest_mode(f);
  return r;
}

CellRecord lmg_cell(const ScanConfig& cfg, const Params& p) {
  const Tolerances& tol = cfg.tolerances;
  lmg::LmgParams lp;
  lp.field_h = p.field_h;
  lp.gamma_x = p.gamma_x;
  lp.gamma_y = p.gamma_y;
  const lmg::BlochMf mf = lmg::mean_field(lp);
  const bool broken = mf.phase != lmg::BlochPhase::Polarized;
  const bool goldstone = broken && std::abs(lp.gamma_x - lp.gamma_y) <= tol.symmetry;
  std::string phase = goldstone ? "goldstone" : std::string(lmg::to_string(mf.phase));
  std::string sym = "generic";
  if (goldstone) {
    sym = "goldstone";
  } else if (broken ? std::abs(lmg::symmetry_residual(lp)) < tol.symmetry
                    : std::abs(lp.gamma_x - lp.gamma_y) < tol.symmetry) {
    sym = "tc";
  }
  const double gmax = std::max(lp.gamma_x, lp.gamma_y);
  if (std::abs(gmax - lp.field_h) <= tol.boundary || goldstone) return flagged(phase, sym);
  const boson::QuadraticBosonForm f = lmg::two_block_form(lp);
  const boson::GaussianGround g = boson::ground_state_covariance(f);
  CellRecord r;
  r.phase = phase;
  r.symmetry = sym;
  r.entropy_bits = boson::entanglement_entropy(g, two_mode_partition(cfg));
  r.gap = lowest_mode(f);
  return r;
}

Params cell_params(const ScanConfig& cfg, int i, int j) {
  Params p = cfg.params;
  p.at(cfg.axes[0].name) = cfg.axes[0].value(i);
  if (cfg.axes.size() > 1) p.at(cfg.axes[1].name) = cfg.axes[1].value(j);
  return p;
}

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::BadDataset, msg); }

}  // namespace

const CellRecord& ScanDataset::at(int i, int j) const {
  const int n2 = grid2.empty() ? 1 : static_cast<int>(grid2.size());
  return cells.at(static_cast<std::size_t>(i) * n2 + j);
}

CellRecord evaluate_cell(const ScanConfig& cfg, const Params& p) {
  CellRecord r;
  try {
    switch (cfg.model) {
      case Model::Landau: r = landau_cell(cfg, p); break;
      case Model::Dicke: r = dicke_cell(cfg, p); break;
      case Model::DickeLattice: r = lattice_cell(cfg, p); break;
      case Model::Lmg: r = lmg_cell(cfg, p); break;
    }
  } catch (const Error& e) {
    if (!recoverable(e.kind())) throw;
    // Labels are cheap to recompute; the numerical part is what failed.
    r.entropy_bits.reset();
    r.gap.reset();
    r.boundary = true;
    if (r.phase.empty()) r.phase = "boundary";
    if (r.symmetry.empty()) r.symmetry = "generic";
  }
  return r;
}

ScanDataset run_scan(const ScanConfig& cfg) {
  validate(cfg);
  ScanDataset d;
  d.model = cfg.model;
  d.axes = cfg.axes;
  d.params = cfg.params;
  if (cfg.model == Model::DickeLattice) {
    lattice::LatticeParams lp;
    lp.dicke = dicke::DickeParams::from_couplings(0.0, 0.0, cfg.params.omega0, cfg.params.omega_spin);
    lp.hop_j = cfg.params.hop_j;
    lp.geometry = cfg.geometry.build();
    d.critical_coupling = lattice::critical_coupling(lp);
  }
  for (int i = 0; i < cfg.axes[0].steps; ++i) d.grid1.push_back(cfg.axes[0].value(i));
  if (cfg.axes.size() > 1) {
    for (int j = 0; j < cfg.axes[1].steps; ++j) d.grid2.push_back(cfg.axes[1].value(j));
  }
  const int n1 = static_cast<int>(d.grid1.size());
  const int n2 = d.grid2.empty() ? 1 : static_cast<int>(d.grid2.size());
  const int total = n1 * n2;
  d.cells.resize(total);

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
      const int i = k / n2;
      const int j = k % n2;
      try {
        CellRecord r = evaluate_cell(cfg, cell_params(cfg, i, j));
        r.axis1 = d.grid1[i];
        r.axis2 = d.grid2.empty() ? 0.0 : d.grid2[j];
        d.cells[k] = std::move(r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(total);
      }
    }
  };
  const int workers = std::max(1, std::min(cfg.threads, total));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return d;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string emit_csv(const ScanDataset& d) {
  std::string out = "axis1,axis2,entropy_bits,phase,symmetry,boundary,gap\n";
  const bool two = !d.grid2.empty();
  for (const CellRecord& c : d.cells) {
    out += format_double(c.axis1);
    out += ',';
    if (two) out += format_double(c.axis2);
    out += ',';
    if (c.entropy_bits) out += format_double(*c.entropy_bits);
    out += ',';
    out += c.phase;
    out += ',';
    out += c.symmetry;
    out += ',';
    out += c.boundary ? "true" : "false";
    out += ',';
    if (c.gap) out += format_double(*c.gap);
    out += '\n';
  }
  return out;
}

json dataset_to_json(const ScanDataset& d) {
  json j;
  j["model"] = std::string(to_string(d.model));
  j["axes"] = json::array();
  for (const AxisSpec& a : d.axes) {
    j["axes"].push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}});
  }
  json p = json::object();
  for (const std::string& n : Params::names()) p[n] = d.params.at(n);
  j["params"] = p;
  j["critical_coupling"] = d.critical_coupling;
  j["cells"] = json::array();
  for (const CellRecord& c : d.cells) {
    json cell;
    cell["axis1"] = c.axis1;
    if (!d.grid2.empty()) cell["axis2"] = c.axis2;
    cell["entropy_bits"] = c.entropy_bits ? json(*c.entropy_bits) : json(nullptr);
    cell["phase"] = c.phase;
    cell["symmetry"] = c.symmetry;
    cell["boundary"] = c.boundary;
    cell["gap"] = c.gap ? json(*c.gap) : json(nullptr);
    j["cells"].push_back(cell);
  }
  return j;
}

ScanDataset dataset_from_json(const json& j) {
  if (!j.is_object()) bad("dataset must be a JSON object");
  for (const char* k : {"model", "axes", "cells"}) {
    if (!j.contains(k)) bad(std::string("dataset is missing '") + k + "'");
  }
  ScanDataset d;
  try {
    d.model = model_from_string(j["model"].get<std::string>());
    for (const json& a : j["axes"]) {
      AxisSpec s;
      s.name = a.at("name").get<std::string>();
      s.min = a.at("min").get<double>();
      s.max = a.at("max").get<double>();
      s.steps = a.at("steps").get<int>();
      if (s.steps < 2) bad("axis '" + s.name + "' has fewer than 2 steps");
      d.axes.push_back(s);
    }
    if (d.axes.empty() || d.axes.size() > 2) bad("dataset needs one or two axes");
    if (j.contains("params")) {
      for (const auto& [k, v] : j["params"].items()) d.params.at(k) = v.get<double>();
    }
    if (j.contains("critical_coupling")) d.critical_coupling = j["critical_coupling"].get<double>();
    for (int i = 0; i < d.axes[0].steps; ++i) d.grid1.push_back(d.axes[0].value(i));
    if (d.axes.size() > 1) {
      for (int i = 0; i < d.axes[1].steps; ++i) d.grid2.push_back(d.axes[1].value(i));
    }
    for (const json& c : j["cells"]) {
      CellRecord r;
      r.axis1 = c.at("axis1").get<double>();
      if (!d.grid2.empty()) r.axis2 = c.at("axis2").get<double>();
      if (c.contains("entropy_bits") && !c["entropy_bits"].is_null()) {
        r.entropy_bits = c["entropy_bits"].get<double>();
      }
      r.phase = c.at("phase").get<std::string>();
      r.symmetry = c.at("symmetry").get<std::string>();
      r.boundary = c.at("boundary").get<bool>();
      if (c.contains("gap") && !c["gap"].is_null()) r.gap = c["gap"].get<double>();
      d.cells.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    bad(std::string("malformed dataset: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BadDataset) throw;
    bad(std::string("malformed dataset: ") + e.what());
  }
  const std::size_t expected = d.grid1.size() * (d.grid2.empty() ? 1 : d.grid2.size());
  if (d.cells.size() != expected) {
    bad(fmt::format("dataset has {} cells, the axes need {}", d.cells.size(), expected));
  }
  return d;
}

json point_report(const ScanConfig& cfg) {
  const Params& p = cfg.params;
  json out;
  out["model"] = std::string(to_string(cfg.model));
  json params = json::object();
  for (const std::string& n : Params::names()) params[n] = p.at(n);
  out["params"] = params;
  const CellRecord r = evaluate_cell(cfg, p);
  out["entropy_bits"] = r.entropy_bits ? json(*r.entropy_bits) : json(nullptr);
  out["phase"] = r.phase;
  out["symmetry"] = r.symmetry;
  out["boundary"] = r.boundary;
  out["gap"] = r.gap ? json(*r.gap) : json(nullptr);

  auto add_form = [&](const boson::QuadraticBosonForm& f) {
    const boson::SymplecticSpectrum s = boson::diagonalize(f);
    out["mode_energies"] = s.mode_energies;
    out["stable"] = s.stable;
    if (s.stable && !s.degenerate) {
      out["ground_energy"] = boson::ground_state_covariance(f).ground_energy;
    }
    out["anomalous_max_abs"] = f.anomalous.cwiseAbs().maxCoeff();
  };
  try {
    switch (cfg.model) {
      case Model::Landau: {
        const landau::MfSolution s = landau::minimize_mf(landau::CouplingPair{p.g_plus, p.g_minus});
        out["mean_field"] = {{"x_bar", s.minimum.x_bar},
                             {"p_bar", s.minimum.p_bar},
                             {"energy", s.energy},
                             {"curvature_x", s.curvature_x},
                             {"curvature_p", s.curvature_p}};
        break;
      }
      case Model::Dicke: {
        const auto dp = dicke::DickeParams::from_couplings(p.g_plus, p.g_minus, p.omega0, p.omega_spin);
        const dicke::SpinBosonMf mf = dicke::mean_field(dp);
        out["mean_field"] = {{"x_bar", mf.x_bar},     {"p_bar", mf.p_bar}, {"theta", mf.theta},
                             {"phi", mf.phi},         {"energy_per_spin", mf.energy_per_spin}};
        if (!r.boundary) add_form(dicke::effective_hamiltonian(dp));
        break;
      }
      case Model::DickeLattice: {
        lattice::LatticeParams lp;
        lp.dicke = dicke::DickeParams::from_couplings(p.g_plus, p.g_minus, p.omega0, p.omega_spin);
        lp.hop_j = p.hop_j;
        lp.geometry = cfg.geometry.build();
        const landau::MfSolution s = lattice::mean_field_uniform(lp);
        out["critical_coupling"] = lattice::critical_coupling(lp);
        out["n_sites"] = lp.geometry.n_sites;
        out["coordination"] = lp.geometry.coordination;
        out["mean_field"] = {{"x_bar", s.minimum.x_bar}, {"p_bar", s.minimum.p_bar}};
        if (!r.boundary) add_form(lattice::effective_lattice_hamiltonian(lp));
        break;
      }
      case Model::Lmg: {
        lmg::LmgParams lp{p.field_h, p.gamma_x, p.gamma_y, 0};
        const lmg::BlochMf mf = lmg::mean_field(lp);
        out["mean_field"] = {{"big_x", mf.big_x},   {"big_y", mf.big_y}, {"theta0", mf.theta0},
                             {"phi0", mf.phi0},     {"energy", mf.energy}};
        if (!r.boundary) add_form(lmg::two_block_form(lp));
        break;
      }
    }
  } catch (const Error& e) {
    if (!recoverable(e.kind())) throw;
    out["note"] = e.what();
  }
  return out;
}

}  // namespace ecsym::scan
