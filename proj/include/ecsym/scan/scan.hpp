#pragma once

// Parameter-grid scans. Cells are evaluated independently and written into
// pre-indexed slots, so the output never depends on the thread schedule.

#include <optional>
#include <string>
#include <vector>

#include "ecsym/scan/config.hpp"
#include "json.hpp"

namespace ecsym::scan {

struct CellRecord {
  double axis1 = 0.0;
  double axis2 = 0.0;                   // unused for one-axis scans
  std::optional<double> entropy_bits;   // empty for boundary cells and for landau
  std::string phase;                    // normal | broken_x | broken_p | goldstone | polarized | broken_y
  std::string symmetry;                 // generic | tc | anti_tc | goldstone
  bool boundary = false;
  std::optional<double> gap;            // lowest fluctuation frequency (landau: smallest curvature)

  bool operator==(const CellRecord&) const = default;
};

struct ScanDataset {
  Model model = Model::Dicke;
  std::vector<AxisSpec> axes;
  std::vector<double> grid1;
  std::vector<double> grid2;  // empty for one-axis scans
  Params params;
  double critical_coupling = 1.0;  // lattice: sqrt(1 + J z / omega0)
  std::vector<CellRecord> cells;  // axis1 outer, axis2 inner

  int n_axes() const { return static_cast<int>(axes.size()); }
  const CellRecord& at(int i, int j) const;
};

/// Evaluates one parameter point of `cfg.model`. Boundary and Goldstone points
/// come back flagged with empty entropy and gap; they never throw.
CellRecord evaluate_cell(const ScanConfig& cfg, const Params& p);

/// Validates, then evaluates every cell on cfg.threads workers.
ScanDataset run_scan(const ScanConfig& cfg);

/// Header `axis1,axis2,entropy_bits,phase,symmetry,boundary,gap`, 17
/// significant digits, LF line endings.
std::string emit_csv(const ScanDataset& d);

nlohmann::json dataset_to_json(const ScanDataset& d);
/// Throws BadDataset on malformed input.
ScanDataset dataset_from_json(const nlohmann::json& j);

/// Single-point evaluation with model details (mean field, mode energies,
/// ground energy), for the `point` subcommand.
nlohmann::json point_report(const ScanConfig& cfg);

/// 17 significant digits, enough for an exact round trip.
std::string format_double(double v);

}  // namespace ecsym::scan
