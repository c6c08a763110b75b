#pragma once

// Invariant and acceptance checks runnable from the CLI. Each check reports
// its measured values so a failure can be read off the JSON report.

#include <functional>
#include <string>
#include <vector>

#include "ecsym/dicke_model.hpp"
#include "ecsym/quadratic_boson.hpp"
#include "json.hpp"

namespace ecsym::scan {

struct CheckResult {
  std::string id;
  std::string description;
  bool passed = false;
  nlohmann::json metrics = nlohmann::json::object();
  double seconds = 0.0;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  nlohmann::json to_json() const;
};

/// Injection points so tests can swap in deliberately broken components.
struct ValidationHooks {
  std::function<boson::QuadraticBosonForm(const dicke::DickeParams&)> dicke_form =
      dicke::effective_hamiltonian;
};

struct CheckInfo {
  std::string id;
  std::string description;
};

std::vector<CheckInfo> available_checks();

/// Runs the selected checks in the order given. "all" expands to every check;
/// an empty selection gives an empty report. Unknown ids throw ConfigError.
ValidationReport run_validation_suite(const std::vector<std::string>& selection,
                                      const ValidationHooks& hooks = {});

}  // namespace ecsym::scan
