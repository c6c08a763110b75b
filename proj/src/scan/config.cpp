#include "ecsym/scan/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ecsym/error.hpp"

namespace ecsym::scan {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, (path.empty() ? std::string("/") : path) + ": " + msg);
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

int integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

void require_object(const json& j, const std::string& path, const std::set<std::string>& keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) fail(path + "/" + k, "unknown field");
  }
}

const std::vector<std::string>& axis_names(Model m) {
  static const std::vector<std::string> landau{"g_plus", "g_minus"};
  static const std::vector<std::string> dicke{"g_plus", "g_minus", "omega0", "omega_spin"};
  static const std::vector<std::string> lattice{"g_plus", "g_minus", "omega0", "omega_spin",
                                                "hop_j"};
  static const std::vector<std::string> lmg{"gamma_x", "gamma_y", "field_h"};
  switch (m) {
    case Model::Landau: return landau;
    case Model::Dicke: return dicke;
    case Model::DickeLattice: return lattice;
    case Model::Lmg: return lmg;
  }
  return landau;
}

}  // namespace

std::string_view to_string(Model m) {
  switch (m) {
    case Model::Landau: return "landau";
    case Model::Dicke: return "dicke";
    case Model::DickeLattice: return "dicke_lattice";
    case Model::Lmg: return "lmg";
  }
  return "unknown";
}

Model model_from_string(std::string_view s) {
  for (Model m : {Model::Landau, Model::Dicke, Model::DickeLattice, Model::Lmg}) {
    if (to_string(m) == s) return m;
  }
  fail("/model", "unknown model '" + std::string(s) + "' (landau, dicke, dicke_lattice, lmg)");
}

const std::vector<std::string>& Params::names() {
  static const std::vector<std::string> n{"omega0", "omega_spin", "hop_j", "field_h",
                                          "g_plus", "g_minus", "gamma_x", "gamma_y"};
  return n;
}

double& Params::at(std::string_view name) {
  if (name == "omega0") return omega0;
  if (name == "omega_spin") return omega_spin;
  if (name == "hop_j") return hop_j;
  if (name == "field_h") return field_h;
  if (name == "g_plus") return g_plus;
  if (name == "g_minus") return g_minus;
  if (name == "gamma_x") return gamma_x;
  if (name == "gamma_y") return gamma_y;
  fail("/params/" + std::string(name), "unknown parameter");
}

double Params::at(std::string_view name) const { return const_cast<Params*>(this)->at(name); }

double AxisSpec::value(int i) const {
  if (i == steps - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

AxisSpec AxisSpec::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) fail("/axes", "axis override must be name:min:max:steps");
  AxisSpec a;
  a.name = parts[0];
  try {
    std::size_t used = 0;
    a.min = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("trailing");
    a.max = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("trailing");
    a.steps = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("trailing");
  } catch (const std::logic_error&) {
    fail("/axes", "cannot parse axis override '" + std::string(text) + "'");
  }
  return a;
}

lattice::LatticeGeometry GeometrySpec::build() const {
  auto dim = [&](std::size_t k) {
    if (k >= dims.size()) fail("/geometry/dims", "too few entries for kind '" + kind + "'");
    return dims[k];
  };
  try {
    if (kind == "chain") return lattice::LatticeGeometry::chain(dim(0));
    if (kind == "torus") return lattice::LatticeGeometry::torus(dim(0), dim(1));
    if (kind == "hypercubic") return lattice::LatticeGeometry::hypercubic(dim(0), dim(1));
    if (kind == "triangle") return lattice::LatticeGeometry::triangle();
    if (kind == "edges") {
      std::vector<std::pair<int, int>> e;
      for (const auto& [a, b] : edges) e.emplace_back(a, b);
      return lattice::LatticeGeometry::from_edges(n_sites, e);
    }
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::ConfigError) throw;
    fail("/geometry", err.what());
  }
  fail("/geometry/kind", "unknown geometry '" + kind + "' (chain, torus, hypercubic, triangle, edges)");
}

ScanConfig default_config(Model m) {
  ScanConfig c;
  c.model = m;
  switch (m) {
    case Model::Landau:
    case Model::Dicke:
      c.axes = {{"g_plus", -3.0, 3.0, 61}, {"g_minus", -3.0, 3.0, 61}};
      break;
    case Model::DickeLattice:
      c.params.hop_j = -0.2;
      c.geometry = {"chain", {8}, 0, {}};
      c.axes = {{"g_plus", -3.0, 3.0, 61}, {"g_minus", -3.0, 3.0, 61}};
      break;
    case Model::Lmg:
      c.params.field_h = 1.0;
      c.axes = {{"gamma_x", 0.0, 2.0, 61}, {"gamma_y", 0.0, 2.0, 61}};
      break;
  }
  if (m == Model::Landau) c.style.field = "gap";
  return c;
}

void validate(const ScanConfig& c) {
  const Params& p = c.params;
  if (c.model != Model::Lmg && c.model != Model::Landau) {
    if (!(p.omega0 > 0.0)) fail("/params/omega0", "must be positive");
    if (!(p.omega_spin > 0.0)) fail("/params/omega_spin", "must be positive");
  }
  if (c.model == Model::Lmg && !(p.field_h > 0.0)) fail("/params/field_h", "must be positive");
  if (c.axes.empty() || c.axes.size() > 2) fail("/axes", "need one or two axes");
  const auto& allowed = axis_names(c.model);
  for (std::size_t k = 0; k < c.axes.size(); ++k) {
    const AxisSpec& a = c.axes[k];
    const std::string path = "/axes/" + std::to_string(k);
    if (std::find(allowed.begin(), allowed.end(), a.name) == allowed.end()) {
      fail(path + "/name", "'" + a.name + "' is not a parameter of model " +
                               std::string(to_string(c.model)));
    }
    if (!std::isfinite(a.min)) fail(path + "/min", "must be finite");
    if (!std::isfinite(a.max)) fail(path + "/max", "must be finite");
    if (a.steps < 2) fail(path + "/steps", "must be >= 2");
    if (a.steps > 100000) fail(path + "/steps", "must be <= 100000");
    const double lo = std::min(a.min, a.max);
    const double hi = std::max(a.min, a.max);
    if ((a.name == "omega0" || a.name == "omega_spin" || a.name == "field_h") && !(lo > 0.0)) {
      fail(path + "/min", a.name + " must stay positive");
    }
    if (a.name == "hop_j" && hi > 0.0) fail(path + "/max", "hop_j must stay <= 0");
  }
  if (c.axes.size() == 2 && c.axes[0].name == c.axes[1].name) {
    fail("/axes/1/name", "duplicate axis '" + c.axes[1].name + "'");
  }
  if (c.threads < 1) fail("/threads", "must be >= 1");
  if (!(c.tolerances.boundary > 0.0)) fail("/tolerances/boundary", "must be positive");
  if (!(c.tolerances.symmetry > 0.0)) fail("/tolerances/symmetry", "must be positive");
  if (!(c.tolerances.zero_entropy > 0.0)) fail("/tolerances/zero_entropy", "must be positive");
  if (c.style.field != "entropy" && c.style.field != "gap") {
    fail("/style/field", "must be 'entropy' or 'gap'");
  }
  if (!(c.style.saturation_percentile > 0.0 && c.style.saturation_percentile <= 100.0)) {
    fail("/style/saturation_percentile", "must be in (0, 100]");
  }
  if (c.model == Model::DickeLattice) {
    const lattice::LatticeGeometry g = c.geometry.build();
    if (p.hop_j > 0.0) fail("/params/hop_j", "must be <= 0");
    double jmin = p.hop_j;
    double wmin = p.omega0;
    for (const AxisSpec& a : c.axes) {
      if (a.name == "hop_j") jmin = std::min(a.min, a.max);
      if (a.name == "omega0") wmin = std::min(a.min, a.max);
    }
    if (!(1.0 + g.coordination * jmin / wmin > 0.0)) {
      fail("/params/hop_j", "1 + J z / omega0 must stay positive");
    }
    if (c.partition) {
      for (std::size_t k = 0; k < c.partition->size(); ++k) {
        const int m = (*c.partition)[k];
        if (m < 0 || m >= 2 * g.n_sites) {
          fail("/partition/" + std::to_string(k), "mode index out of range");
        }
      }
    }
  }
  if (c.partition) {
    if (c.partition->empty()) fail("/partition", "must not be empty");
    std::set<int> seen;
    for (std::size_t k = 0; k < c.partition->size(); ++k) {
      const int m = (*c.partition)[k];
      const std::string path = "/partition/" + std::to_string(k);
      if (m < 0) fail(path, "mode index must be >= 0");
      if (!seen.insert(m).second) fail(path, "duplicate mode index");
      if (c.model != Model::DickeLattice && m > 1) fail(path, "mode index must be 0 or 1");
    }
    if (c.model != Model::DickeLattice && c.partition->size() != 1) {
      fail("/partition", "two-mode models take a single mode index");
    }
  }
}

ScanConfig parse_config(const json& doc) {
  require_object(doc, "", {"model", "params", "axes", "partition", "geometry", "tolerances",
                           "threads", "output", "style"});
  if (!doc.contains("model")) fail("/model", "required field missing");
  ScanConfig c = default_config(model_from_string(string_at(doc["model"], "/model")));

  if (doc.contains("params")) {
    const json& p = doc["params"];
    if (!p.is_object()) fail("/params", "expected an object");
    for (const auto& [k, v] : p.items()) {
      const auto& names = Params::names();
      if (std::find(names.begin(), names.end(), k) == names.end()) {
        fail("/params/" + k, "unknown parameter");
      }
      c.params.at(k) = number_at(v, "/params/" + k);
    }
  }
  if (doc.contains("axes")) {
    const json& axes = doc["axes"];
    if (!axes.is_array()) fail("/axes", "expected an array");
    c.axes.clear();
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const std::string path = "/axes/" + std::to_string(k);
      require_object(axes[k], path, {"name", "min", "max", "steps"});
      for (const char* key : {"name", "min", "max", "steps"}) {
        if (!axes[k].contains(key)) fail(path + "/" + key, "required field missing");
      }
      AxisSpec a;
      a.name = string_at(axes[k]["name"], path + "/name");
      a.min = number_at(axes[k]["min"], path + "/min");
      a.max = number_at(axes[k]["max"], path + "/max");
      a.steps = integer_at(axes[k]["steps"], path + "/steps");
      c.axes.push_back(a);
    }
  }
  if (doc.contains("partition")) {
    const json& p = doc["partition"];
    if (p.is_string()) {
      if (p.get<std::string>() != "default") fail("/partition", "expected \"default\" or an array");
      c.partition.reset();
    } else if (p.is_array()) {
      std::vector<int> modes;
      for (std::size_t k = 0; k < p.size(); ++k) {
        modes.push_back(integer_at(p[k], "/partition/" + std::to_string(k)));
      }
      c.partition = modes;
    } else {
      fail("/partition", "expected \"default\" or an array");
    }
  }
  if (doc.contains("geometry")) {
    const json& g = doc["geometry"];
    require_object(g, "/geometry", {"kind", "dims", "n_sites", "edges"});
    if (g.contains("kind")) c.geometry.kind = string_at(g["kind"], "/geometry/kind");
    if (g.contains("dims")) {
      if (!g["dims"].is_array()) fail("/geometry/dims", "expected an array");
      c.geometry.dims.clear();
      for (std::size_t k = 0; k < g["dims"].size(); ++k) {
        c.geometry.dims.push_back(integer_at(g["dims"][k], "/geometry/dims/" + std::to_string(k)));
      }
    }
    if (g.contains("n_sites")) c.geometry.n_sites = integer_at(g["n_sites"], "/geometry/n_sites");
    if (g.contains("edges")) {
      if (!g["edges"].is_array()) fail("/geometry/edges", "expected an array");
      c.geometry.edges.clear();
      for (std::size_t k = 0; k < g["edges"].size(); ++k) {
        const std::string path = "/geometry/edges/" + std::to_string(k);
        const json& e = g["edges"][k];
        if (!e.is_array() || e.size() != 2) fail(path, "expected a pair of site indices");
        c.geometry.edges.push_back({integer_at(e[0], path + "/0"), integer_at(e[1], path + "/1")});
      }
    }
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    require_object(t, "/tolerances", {"boundary", "symmetry", "zero_entropy"});
    if (t.contains("boundary")) c.tolerances.boundary = number_at(t["boundary"], "/tolerances/boundary");
    if (t.contains("symmetry")) c.tolerances.symmetry = number_at(t["symmetry"], "/tolerances/symmetry");
    if (t.contains("zero_entropy")) {
      c.tolerances.zero_entropy = number_at(t["zero_entropy"], "/tolerances/zero_entropy");
    }
  }
  if (doc.contains("threads")) c.threads = integer_at(doc["threads"], "/threads");
  if (doc.contains("output")) c.output = string_at(doc["output"], "/output");
  if (doc.contains("style")) {
    const json& s = doc["style"];
    require_object(s, "/style", {"color_scale", "field", "saturation_percentile"});
    if (s.contains("color_scale")) {
      const std::string cs = string_at(s["color_scale"], "/style/color_scale");
      if (cs == "linear") {
        c.style.color_scale = ColorScale::Linear;
      } else if (cs == "log") {
        c.style.color_scale = ColorScale::Log;
      } else {
        fail("/style/color_scale", "must be 'linear' or 'log'");
      }
    }
    if (s.contains("field")) c.style.field = string_at(s["field"], "/style/field");
    if (s.contains("saturation_percentile")) {
      c.style.saturation_percentile =
          number_at(s["saturation_percentile"], "/style/saturation_percentile");
    }
  }
  validate(c);
  return c;
}

ScanConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ScanConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("", "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const ScanConfig& c) {
  json j;
  j["model"] = std::string(to_string(c.model));
  json p = json::object();
  for (const std::string& n : Params::names()) p[n] = c.params.at(n);
  j["params"] = p;
  j["axes"] = json::array();
  for (const AxisSpec& a : c.axes) {
    j["axes"].push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}});
  }
  if (c.partition) {
    j["partition"] = *c.partition;
  } else {
    j["partition"] = "default";
  }
  json g;
  g["kind"] = c.geometry.kind;
  g["dims"] = c.geometry.dims;
  g["n_sites"] = c.geometry.n_sites;
  g["edges"] = json::array();
  for (const auto& e : c.geometry.edges) g["edges"].push_back({e[0], e[1]});
  j["geometry"] = g;
  j["tolerances"] = {{"boundary", c.tolerances.boundary},
                     {"symmetry", c.tolerances.symmetry},
                     {"zero_entropy", c.tolerances.zero_entropy}};
  j["threads"] = c.threads;
  j["output"] = c.output;
  j["style"] = {{"color_scale", c.style.color_scale == ColorScale::Log ? "log" : "linear"},
                {"field", c.style.field},
                {"saturation_percentile", c.style.saturation_percentile}};
  return j;
}

}  // namespace ecsym::scan
