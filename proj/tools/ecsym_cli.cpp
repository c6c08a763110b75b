// ecsym: scans, single points, ED and the validation suite from the shell.
//
// Exit codes: 0 success, 1 configuration or input error, 2 a check failed.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ecsym/dicke_lattice.hpp"
#include "ecsym/ed_oracle.hpp"
#include "ecsym/error.hpp"
#include "ecsym/scan/config.hpp"
#include "ecsym/scan/render.hpp"
#include "ecsym/scan/scan.hpp"
#include "ecsym/scan/validation.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace ecsym;

constexpr int kConfigError = 1;
constexpr int kValidationFailure = 2;

struct CommonOpts {
  std::string config;
  std::string model;
  std::string axis1;
  std::string axis2;
  std::vector<std::string> params;
  std::string partition;
  int threads = 0;
  std::string out;
};

void add_common(CLI::App* app, CommonOpts& o) {
  app->add_option("--config", o.config, "JSON scan configuration");
  app->add_option("--model", o.model, "landau | dicke | dicke_lattice | lmg");
  app->add_option("--param", o.params, "fixed parameter override, name=value (repeatable)");
  app->add_option("--partition", o.partition, "comma-separated mode indices");
  app->add_option("--out", o.out, "output path (default: stdout)");
}

scan::ScanConfig build_config(const CommonOpts& o) {
  scan::ScanConfig cfg;
  if (!o.config.empty()) {
    cfg = scan::load_config(o.config);
    if (!o.model.empty() && scan::model_from_string(o.model) != cfg.model) {
      // A different model brings its own axes and defaults; keep the fixed parameters.
      const scan::Params keep = cfg.params;
      cfg = scan::default_config(scan::model_from_string(o.model));
      cfg.params = keep;
    }
  } else {
    cfg = scan::default_config(o.model.empty() ? scan::Model::Dicke : scan::model_from_string(o.model));
  }
  for (const std::string& kv : o.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ConfigError, "/params: override '" + kv + "' must be name=value");
    }
    const std::string name = kv.substr(0, eq);
    try {
      std::size_t used = 0;
      const double v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing");
      cfg.params.at(name) = v;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ConfigError, "/params/" + name + ": cannot parse '" + kv.substr(eq + 1) + "'");
    }
  }
  if (!o.axis1.empty()) {
    const scan::AxisSpec a = scan::AxisSpec::parse(o.axis1);
    if (cfg.axes.empty()) cfg.axes.resize(1);
    cfg.axes[0] = a;
  }
  if (o.axis2 == "none") {
    cfg.axes.resize(1);
  } else if (!o.axis2.empty()) {
    const scan::AxisSpec a = scan::AxisSpec::parse(o.axis2);
    if (cfg.axes.size() < 2) cfg.axes.resize(2);
    cfg.axes[1] = a;
  }
  if (!o.partition.empty()) {
    std::vector<int> modes;
    std::stringstream ss(o.partition);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        modes.push_back(std::stoi(tok));
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::ConfigError, "/partition: cannot parse '" + tok + "'");
      }
    }
    cfg.partition = modes;
  }
  if (o.threads > 0) cfg.threads = o.threads;
  scan::validate(cfg);
  return cfg;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_scan_cmd(const CommonOpts& o, std::string format) {
  const scan::ScanConfig cfg = build_config(o);
  const scan::ScanDataset d = scan::run_scan(cfg);
  const std::string out = o.out.empty() ? cfg.output : o.out;
  if (format.empty()) {
    format = "csv";
    if (out.size() >= 5 && out.substr(out.size() - 5) == ".json") format = "json";
    if (out.size() >= 4 && out.substr(out.size() - 4) == ".svg") format = "svg";
  }
  if (format == "csv") {
    write_output(out, scan::emit_csv(d));
  } else if (format == "json") {
    write_output(out, scan::dataset_to_json(d).dump(1) + "\n");
  } else if (format == "svg") {
    write_output(out, scan::render(d, cfg.style));
  } else {
    throw Error(ErrorKind::ConfigError, "/format: must be csv, json or svg");
  }
  return 0;
}

int run_point_cmd(const CommonOpts& o) {
  const scan::ScanConfig cfg = build_config(o);
  write_output(o.out, scan::point_report(cfg).dump(2) + "\n");
  return 0;
}

int run_lattice_check(const CommonOpts& o, int starts) {
  CommonOpts copy = o;
  if (copy.model.empty() && copy.config.empty()) copy.model = "dicke_lattice";
  const scan::ScanConfig cfg = build_config(copy);
  if (cfg.model != scan::Model::DickeLattice) {
    throw Error(ErrorKind::ConfigError, "/model: lattice-check needs dicke_lattice");
  }
  lattice::LatticeParams lp;
  lp.dicke = dicke::DickeParams::from_couplings(cfg.params.g_plus, cfg.params.g_minus, cfg.params.omega0,
                                                cfg.params.omega_spin);
  lp.hop_j = cfg.params.hop_j;
  lp.geometry = cfg.geometry.build();
  json out;
  out["n_sites"] = lp.geometry.n_sites;
  out["coordination"] = lp.geometry.coordination;
  out["critical_coupling"] = lattice::critical_coupling(lp);
  out["factorization_residual"] = lattice::factorization_residual(lp);
  bool ok = true;
  if (lp.geometry.n_sites <= 16) {
    const lattice::UniformityReport u = lattice::verify_uniform_minimum(lp, starts);
    out["uniform_energy"] = u.uniform_energy;
    out["best_found_energy"] = u.best_nonuniform_energy;
    out["max_site_spread"] = u.max_site_spread;
    out["starts"] = u.starts;
    out["uniform_wins"] = u.uniform_wins();
    ok = u.uniform_wins();
  } else {
    out["uniform_wins"] = nullptr;
    out["note"] = "multi-start search skipped above 16 sites";
  }
  const scan::CellRecord cell = scan::evaluate_cell(cfg, cfg.params);
  out["entropy_bits"] = cell.entropy_bits ? json(*cell.entropy_bits) : json(nullptr);
  out["phase"] = cell.phase;
  out["symmetry"] = cell.symmetry;
  out["boundary"] = cell.boundary;
  write_output(o.out, out.dump(2) + "\n");
  return ok ? 0 : kValidationFailure;
}

int run_ed_cmd(const CommonOpts& o, int n, int cutoff) {
  const scan::ScanConfig cfg = build_config(o);
  const scan::Params& p = cfg.params;
  ed::EdResult r;
  if (cfg.model == scan::Model::Dicke) {
    ed::DickeEdOptions opts;
    opts.fock_cutoff = cutoff;
    r = ed::dicke_ed(dicke::DickeParams::from_couplings(p.g_plus, p.g_minus, p.omega0, p.omega_spin), n, opts);
  } else if (cfg.model == scan::Model::Lmg) {
    r = ed::lmg_ed(lmg::LmgParams{p.field_h, p.gamma_x, p.gamma_y, n}, n);
  } else {
    throw Error(ErrorKind::ConfigError, "/model: ed supports dicke and lmg");
  }
  json out;
  out["model"] = std::string(scan::to_string(cfg.model));
  out["n"] = n;
  out["ground_energy"] = r.ground_energy;
  out["entropy_bits"] = r.entropy_bits;
  out["product_fidelity"] = r.product_fidelity;
  out["parity_gap"] = r.parity_gap;
  out["converged"] = r.converged;
  if (cfg.model == scan::Model::Dicke) out["cutoff_used"] = r.cutoff_used;
  write_output(o.out, out.dump(2) + "\n");
  return 0;
}

int run_validate_cmd(const std::string& checks, const std::string& out, bool list) {
  if (list) {
    for (const auto& c : scan::available_checks()) std::cout << fmt::format("{:<24} {}\n", c.id, c.description);
    return 0;
  }
  std::vector<std::string> ids;
  std::stringstream ss(checks);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) ids.push_back(tok);
  }
  const scan::ValidationReport rep = scan::run_validation_suite(ids);
  for (const auto& c : rep.checks) {
    std::cerr << fmt::format("{} {} ({:.2f} s)\n", c.passed ? "PASS" : "FAIL", c.id, c.seconds);
  }
  write_output(out, rep.to_json().dump(2) + "\n");
  return rep.all_passed() ? 0 : kValidationFailure;
}

int run_render_cmd(const std::string& dataset, const std::string& out, const std::string& scale,
                   const std::string& field, double percentile) {
  json doc;
  try {
    doc = json::parse(read_file(dataset));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::BadDataset, std::string("dataset is not JSON: ") + e.what());
  }
  const scan::ScanDataset d = scan::dataset_from_json(doc);
  scan::StyleSpec style;
  if (scale == "log") {
    style.color_scale = scan::ColorScale::Log;
  } else if (scale != "linear") {
    throw Error(ErrorKind::ConfigError, "/style/color_scale: must be linear or log");
  }
  if (field != "entropy" && field != "gap") throw Error(ErrorKind::ConfigError, "/style/field: entropy or gap");
  style.field = field;
  style.saturation_percentile = percentile;
  write_output(out, scan::render(d, style));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emergent continuous symmetry scans: Dicke, Dicke lattice and LMG"};
  app.require_subcommand(1);

  CommonOpts scan_o;
  std::string format;
  auto* scan_cmd = app.add_subcommand("scan", "evaluate a parameter grid");
  add_common(scan_cmd, scan_o);
  scan_cmd->add_option("--axis1", scan_o.axis1, "name:min:max:steps");
  scan_cmd->add_option("--axis2", scan_o.axis2, "name:min:max:steps, or 'none' for a line scan");
  scan_cmd->add_option("--threads", scan_o.threads, "worker threads")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--format", format, "csv | json | svg")->check(CLI::IsMember({"csv", "json", "svg"}));

  CommonOpts point_o;
  auto* point_cmd = app.add_subcommand("point", "evaluate one parameter point, print JSON");
  add_common(point_cmd, point_o);

  CommonOpts lat_o;
  int starts = 64;
  auto* lat_cmd = app.add_subcommand("lattice-check", "uniform mean field and lattice entropy");
  add_common(lat_cmd, lat_o);
  lat_cmd->add_option("--starts", starts, "multi-start count")->check(CLI::PositiveNumber);

  CommonOpts ed_o;
  int n = 16;
  int cutoff = 0;
  auto* ed_cmd = app.add_subcommand("ed", "finite-size exact diagonalization");
  add_common(ed_cmd, ed_o);
  ed_cmd->add_option("-n,--size", n, "atoms (dicke) or spins (lmg)");
  ed_cmd->add_option("--cutoff", cutoff, "Fock cutoff for dicke, 0 = automatic");

  std::string checks = "all";
  std::string val_out;
  bool list = false;
  auto* val_cmd = app.add_subcommand("validate", "run invariant and acceptance checks");
  val_cmd->add_option("--checks", checks, "comma-separated ids, 'all' or empty")
      ->expected(0, 1);
  val_cmd->add_option("--out", val_out, "JSON report path (default: stdout)");
  val_cmd->add_flag("--list", list, "list available checks");

  std::string dataset;
  std::string render_out;
  std::string scale = "linear";
  std::string field = "entropy";
  double percentile = 99.0;
  auto* render_cmd = app.add_subcommand("render", "SVG from a JSON dataset");
  render_cmd->add_option("--dataset", dataset, "dataset written by scan --format json")->required();
  render_cmd->add_option("--out", render_out, "SVG path (default: stdout)");
  render_cmd->add_option("--color-scale", scale, "linear | log");
  render_cmd->add_option("--field", field, "entropy | gap");
  render_cmd->add_option("--saturation", percentile, "saturation percentile")->check(CLI::Range(0.0, 100.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*scan_cmd) return run_scan_cmd(scan_o, format);
    if (*point_cmd) return run_point_cmd(point_o);
    if (*lat_cmd) return run_lattice_check(lat_o, starts);
    if (*ed_cmd) return run_ed_cmd(ed_o, n, cutoff);
    if (*val_cmd) return run_validate_cmd(checks, val_out, list);
    if (*render_cmd) return run_render_cmd(dataset, render_out, scale, field, percentile);
  } catch (const Error& e) {
    std::cerr << fmt::format("error [{}]: {}\n", to_string(e.kind()), e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return 0;
}
