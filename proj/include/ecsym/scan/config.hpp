#pragma once

// Scan configuration: one JSON document, validated field by field.

#include <array>
#include "json.hpp"
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecsym/dicke_lattice.hpp"

namespace ecsym::scan {

enum class Model { Landau, Dicke, DickeLattice, Lmg };
std::string_view to_string(Model m);
/// Throws ConfigError for unknown names.
Model model_from_string(std::string_view s);

struct Params {
  double omega0 = 1.0;
  double omega_spin = 1.0;
  double hop_j = 0.0;
  double field_h = 1.0;
  double g_plus = 0.0;
  double g_minus = 0.0;
  double gamma_x = 0.0;
  double gamma_y = 0.0;

  /// Throws ConfigError for unknown names.
  double& at(std::string_view name);
  double at(std::string_view name) const;
  static const std::vector<std::string>& names();
};

struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  double value(int i) const;
  /// Parses "name:min:max:steps".
  static AxisSpec parse(std::string_view text);
};

struct GeometrySpec {
  std::string kind = "chain";  // chain | torus | hypercubic | triangle | edges
  std::vector<int> dims{8};    // chain: {n}; torus: {lx, ly}; hypercubic: {l, d}
  int n_sites = 0;             // edges only
  std::vector<std::array<int, 2>> edges;

  lattice::LatticeGeometry build() const;
};

struct Tolerances {
  double boundary = 1e-9;
  double symmetry = 1e-9;
  double zero_entropy = 1e-6;
};

enum class ColorScale { Linear, Log };

struct StyleSpec {
  ColorScale color_scale = ColorScale::Linear;
  std::string field = "entropy";  // entropy | gap
  double saturation_percentile = 99.0;
};

struct ScanConfig {
  Model model = Model::Dicke;
  Params params;
  std::vector<AxisSpec> axes;
  std::optional<std::vector<int>> partition;  // mode indices; empty optional = model default
  GeometrySpec geometry;
  Tolerances tolerances;
  int threads = 1;
  std::string output;
  StyleSpec style;
};

/// Defaults per model: Dicke and lattice scan g+ and g- over [-3, 3] with 61
/// steps, LMG scans gamma_x and gamma_y over [0, 2] with h = 1, Landau like Dicke.
ScanConfig default_config(Model m);

/// Parses and validates. Missing fields take the model defaults. Errors are
/// ConfigError with a JSON-pointer style path, e.g. "/axes/0/steps: must be >= 2".
ScanConfig parse_config(const nlohmann::json& doc);
ScanConfig parse_config_text(std::string_view text);
ScanConfig load_config(const std::string& path);

nlohmann::json to_json(const ScanConfig& cfg);

/// Checks everything parse_config checks; usable after CLI overrides.
void validate(const ScanConfig& cfg);

}  // namespace ecsym::scan
