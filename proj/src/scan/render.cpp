#include "ecsym/scan/render.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ecsym/error.hpp"

namespace ecsym::scan {

namespace {

constexpr double kLeft = 90.0;
constexpr double kTop = 40.0;
constexpr double kPlot = 480.0;
constexpr double kBarX = kLeft + kPlot + 40.0;
constexpr double kBarW = 22.0;
constexpr double kWidth = kBarX + kBarW + 90.0;
constexpr double kHeight = kTop + kPlot + 70.0;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::BadDataset, msg); }

std::string px(double v) { return fmt::format("{:.2f}", v); }

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  if (a >= 1e4 || a < 1e-3) return fmt::format("{:.2e}", v);
  return fmt::format("{:.3g}", v);
}

std::optional<double> field_value(const CellRecord& c, const std::string& field) {
  return field == "gap" ? c.gap : c.entropy_bits;
}

struct Scale {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  double unit(double v) const {
    if (log) v = std::log10(std::max(v, std::pow(10.0, lo)));
    if (hi <= lo) return 0.0;
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  }
  double value_at(double t) const {
    const double v = lo + t * (hi - lo);
    return log ? std::pow(10.0, v) : v;
  }
};

Scale make_scale(const ScanDataset& d, const StyleSpec& style) {
  std::vector<double> vals;
  for (const CellRecord& c : d.cells) {
    if (auto v = field_value(c, style.field); v && std::isfinite(*v)) vals.push_back(*v);
  }
  Scale s;
  s.log = style.color_scale == ColorScale::Log;
  if (vals.empty()) return s;
  std::sort(vals.begin(), vals.end());
  const double q = std::clamp(style.saturation_percentile, 0.0, 100.0) / 100.0;
  const std::size_t idx =
      std::min(vals.size() - 1, static_cast<std::size_t>(std::max(0.0, std::ceil(q * vals.size()) - 1)));
  const double top = vals[idx];
  if (s.log) {
    double floor_v = 0.0;
    for (double v : vals) {
      if (v > 0.0) {
        floor_v = v;
        break;
      }
    }
    if (top <= 0.0 || floor_v <= 0.0) {
      s.lo = -12.0;
      s.hi = -12.0;
      return s;
    }
    s.hi = std::log10(top);
    s.lo = std::max(std::log10(floor_v), s.hi - 8.0);
  } else {
    s.lo = std::min(0.0, vals.front());
    s.hi = top;
  }
  return s;
}

std::string hex(const std::array<int, 3>& c) { return fmt::format("#{:02x}{:02x}{:02x}", c[0], c[1], c[2]); }

std::string header(double w, double h) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n",
      px(w), px(h));
}

double axis_span(const AxisSpec& a) { return a.max == a.min ? 1.0 : a.max - a.min; }

void axis_ticks(std::string& out, const AxisSpec& a, bool horizontal) {
  for (int k = 0; k <= 4; ++k) {
    const double v = a.min + (a.max - a.min) * k / 4.0;
    const double pos = kPlot * k / 4.0;
    if (horizontal) {
      const double x = kLeft + pos;
      out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000000\"/>\n", px(x),
                         px(kTop + kPlot), px(kTop + kPlot + 5));
      out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", px(x),
                         px(kTop + kPlot + 19), tick_label(v));
    } else {
      const double y = kTop + kPlot - pos;
      out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#000000\"/>\n",
                         px(kLeft - 5), px(y), px(kLeft));
      out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", px(kLeft - 8),
                         px(y + 4), tick_label(v));
    }
  }
}

void frame(std::string& out, const std::string& xlabel, const std::string& ylabel) {
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\"/>\n",
      px(kLeft), px(kTop), px(kPlot), px(kPlot));
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     px(kLeft + kPlot / 2), px(kTop + kPlot + 42), xlabel);
  out += fmt::format(
      "<text x=\"{0}\" y=\"{1}\" text-anchor=\"middle\" font-size=\"14\" "
      "transform=\"rotate(-90 {0} {1})\">{2}</text>\n",
      px(kLeft - 55), px(kTop + kPlot / 2), ylabel);
}

using Curve = std::function<double(double)>;

// Samples y = f(x) across the x axis; the path breaks where the curve leaves
// a generous band around the plot, the clip path does the rest.
std::string curve_path(const AxisSpec& ax, const AxisSpec& ay, const Curve& f, double x_lo, double x_hi) {
  const double xmin = std::max(std::min(ax.min, ax.max), x_lo);
  const double xmax = std::min(std::max(ax.min, ax.max), x_hi);
  if (!(xmax > xmin)) return {};
  const double band = 2.0 * std::abs(axis_span(ay));
  const double ylo = std::min(ay.min, ay.max) - band;
  const double yhi = std::max(ay.min, ay.max) + band;
  std::string path;
  bool pen = false;
  constexpr int kSamples = 600;
  for (int k = 0; k <= kSamples; ++k) {
    const double x = xmin + (xmax - xmin) * k / kSamples;
    const double y = f(x);
    if (!std::isfinite(y) || y < ylo || y > yhi) {
      pen = false;
      continue;
    }
    const double sx = kLeft + (x - ax.min) / axis_span(ax) * kPlot;
    const double sy = kTop + kPlot - (y - ay.min) / axis_span(ay) * kPlot;
    path += fmt::format("{}{} {} ", pen ? "L" : "M", px(sx), px(sy));
    pen = true;
  }
  if (!path.empty()) path.pop_back();
  return path;
}

struct Overlay {
  Curve f;
  double x_lo;
  double x_hi;
  std::string color;
  std::string label;
};

void add_overlays(std::string& out, const ScanDataset& d, double gc) {
  const AxisSpec& a1 = d.axes[0];
  const AxisSpec& a2 = d.axes[1];
  std::vector<Overlay> lines;
  const double inf = std::numeric_limits<double>::infinity();
  auto hyperbola = [](double c) -> Curve { return [c](double x) { return c / x; }; };
  const bool dicke_axes = (a1.name == "g_plus" && a2.name == "g_minus") ||
                          (a1.name == "g_minus" && a2.name == "g_plus");
  const bool lmg_axes = (a1.name == "gamma_x" && a2.name == "gamma_y") ||
                        (a1.name == "gamma_y" && a2.name == "gamma_x");
  if (d.model != Model::Lmg && dicke_axes) {
    const double g2 = gc * gc;
    const std::string rhs = d.model == Model::DickeLattice ? "g_c^2" : "1";
    lines.push_back({hyperbola(g2), -inf, inf, "#ff00ff", "g+ g- = " + rhs});
    lines.push_back({hyperbola(-g2), -inf, inf, "#ff8c00", "g+ g- = -" + rhs});
    lines.push_back({[](double x) { return x; }, -gc, gc, "#ffffff", "g+ = g-"});
  } else if (d.model == Model::Lmg && lmg_axes) {
    const double h = d.params.field_h;
    lines.push_back({hyperbola(h * h), 0.0, inf, "#ff00ff", "gamma_x gamma_y = h^2"});
  }
  if (lines.empty()) return;
  out += "<g clip-path=\"url(#plot-clip)\" fill=\"none\" stroke-width=\"1.6\" stroke-dasharray=\"6 4\">\n";
  for (const Overlay& l : lines) {
    const std::string path = curve_path(a1, a2, l.f, l.x_lo, l.x_hi);
    if (path.empty()) continue;
    out += fmt::format("<path d=\"{}\" stroke=\"{}\"><title>{}</title></path>\n", path, l.color, l.label);
  }
  out += "</g>\n";
}

void check_cells(const ScanDataset& d) {
  if (d.cells.empty()) bad("dataset has no cells");
  const std::size_t expected = d.grid1.size() * (d.grid2.empty() ? 1 : d.grid2.size());
  if (d.cells.size() != expected) {
    bad(fmt::format("dataset has {} cells, the axes need {}", d.cells.size(), expected));
  }
}

std::string heatmap_impl(const ScanDataset& d, const StyleSpec& style) {
  if (d.axes.size() != 2 || d.grid2.empty()) bad("heatmap needs a two-axis dataset");
  check_cells(d);
  const Scale scale = make_scale(d, style);
  const AxisSpec& a1 = d.axes[0];
  const AxisSpec& a2 = d.axes[1];
  const int n1 = static_cast<int>(d.grid1.size());
  const int n2 = static_cast<int>(d.grid2.size());
  const double cw = kPlot / n1;
  const double ch = kPlot / n2;

  std::string out = header(kWidth, kHeight);
  out += "<defs>\n";
  out += "<pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\" "
         "patternTransform=\"rotate(45)\">\n"
         "<rect width=\"6\" height=\"6\" fill=\"#d0d0d0\"/>\n"
         "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#555555\" stroke-width=\"2\"/>\n"
         "</pattern>\n";
  out += fmt::format("<clipPath id=\"plot-clip\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></clipPath>\n",
                     px(kLeft), px(kTop), px(kPlot), px(kPlot));
  out += "</defs>\n";
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"15\">{}: {}</text>\n",
                     px(kLeft + kPlot / 2), px(kTop - 14), to_string(d.model), style.field);

  // The grid values are cell centres; cells are drawn edge to edge.
  out += "<g shape-rendering=\"crispEdges\">\n";
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const CellRecord& c = d.at(i, j);
      const double x = kLeft + i * cw;
      const double y = kTop + kPlot - (j + 1) * ch;
      std::string fill;
      if (c.boundary) {
        fill = "url(#hatch)";
      } else {
        const auto v = field_value(c, style.field);
        fill = hex(viridis(v ? scale.unit(*v) : 0.0));
      }
      out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", px(x), px(y),
                         px(cw + 0.01), px(ch + 0.01), fill);
    }
  }
  out += "</g>\n";

  // Overlay lines use value coordinates spanning cell centres.
  ScanDataset shifted = d;
  const double hx = axis_span(a1) / (2.0 * (n1 - 1));
  const double hy = axis_span(a2) / (2.0 * (n2 - 1));
  shifted.axes[0].min = a1.min - hx;
  shifted.axes[0].max = a1.max + hx;
  shifted.axes[1].min = a2.min - hy;
  shifted.axes[1].max = a2.max + hy;
  add_overlays(out, shifted, d.critical_coupling);

  frame(out, a1.name, a2.name);
  axis_ticks(out, shifted.axes[0], true);
  axis_ticks(out, shifted.axes[1], false);

  // Colorbar.
  constexpr int kSlices = 64;
  const double sh = kPlot / kSlices;
  out += "<g shape-rendering=\"crispEdges\">\n";
  for (int k = 0; k < kSlices; ++k) {
    const double t = (k + 0.5) / kSlices;
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", px(kBarX),
                       px(kTop + kPlot - (k + 1) * sh), px(kBarW), px(sh + 0.01), hex(viridis(t)));
  }
  out += "</g>\n";
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\"/>\n",
                     px(kBarX), px(kTop), px(kBarW), px(kPlot));
  for (int k = 0; k <= 4; ++k) {
    const double t = k / 4.0;
    const double y = kTop + kPlot - t * kPlot;
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#000000\"/>\n",
                       px(kBarX + kBarW), px(y), px(kBarX + kBarW + 5));
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", px(kBarX + kBarW + 8), px(y + 4),
                       tick_label(scale.value_at(t)));
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}{}</text>\n", px(kBarX + kBarW / 2),
                     px(kTop - 14), style.field == "gap" ? "gap" : "S [bits]",
                     scale.log ? " (log)" : "");
  out += "</svg>\n";
  return out;
}

}  // namespace

std::array<int, 3> viridis(double t) {
  static constexpr std::array<std::array<int, 3>, 9> kStops{{{68, 1, 84},
                                                             {72, 40, 120},
                                                             {62, 73, 137},
                                                             {49, 104, 142},
                                                             {38, 130, 142},
                                                             {31, 158, 137},
                                                             {53, 183, 121},
                                                             {110, 206, 88},
                                                             {253, 231, 37}}};
  if (!std::isfinite(t)) t = 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double s = t * 8.0;
  const int k = std::min(7, static_cast<int>(s));
  const double f = s - k;
  std::array<int, 3> c{};
  for (int ch = 0; ch < 3; ++ch) {
    c[ch] = static_cast<int>(std::lround(kStops[k][ch] + f * (kStops[k + 1][ch] - kStops[k][ch])));
  }
  return c;
}

std::string render_heatmap(const ScanDataset& d, const StyleSpec& style) {
  return heatmap_impl(d, style);
}

std::string render_line_plot(const ScanDataset& d, const StyleSpec& style) {
  if (d.axes.size() != 1 || !d.grid2.empty()) bad("line plot needs a one-axis dataset");
  check_cells(d);
  const AxisSpec& a = d.axes[0];
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const CellRecord& c : d.cells) {
    if (auto v = field_value(c, style.field); v && std::isfinite(*v)) {
      lo = any ? std::min(lo, *v) : std::min(0.0, *v);
      hi = any ? std::max(hi, *v) : *v;
      any = true;
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  AxisSpec ay{style.field, lo, hi + 0.05 * (hi - lo), 2};

  std::string out = header(kLeft + kPlot + 40.0, kHeight);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"15\">{}: {}</text>\n",
                     px(kLeft + kPlot / 2), px(kTop - 14), to_string(d.model), style.field);
  auto sx = [&](double x) { return kLeft + (x - a.min) / axis_span(a) * kPlot; };
  auto sy = [&](double y) { return kTop + kPlot - (y - ay.min) / axis_span(ay) * kPlot; };
  std::string path;
  bool pen = false;
  std::string marks;
  for (const CellRecord& c : d.cells) {
    const auto v = field_value(c, style.field);
    if (c.boundary || !v || !std::isfinite(*v)) {
      pen = false;
      if (c.boundary) {
        const double x = sx(c.axis1);
        const double y = kTop + kPlot - 8.0;
        marks += fmt::format("<path d=\"M{} {} L{} {} M{} {} L{} {}\" stroke=\"#c00000\"/>\n", px(x - 4),
                             px(y - 4), px(x + 4), px(y + 4), px(x - 4), px(y + 4), px(x + 4), px(y - 4));
      }
      continue;
    }
    path += fmt::format("{}{} {} ", pen ? "L" : "M", px(sx(c.axis1)), px(sy(*v)));
    pen = true;
  }
  if (!path.empty()) {
    path.pop_back();
    out += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"/>\n", path,
                       hex(viridis(0.25)));
  }
  out += marks;
  frame(out, a.name, style.field == "gap" ? "gap" : "S [bits]");
  axis_ticks(out, a, true);
  axis_ticks(out, ay, false);
  out += "</svg>\n";
  return out;
}

std::string render(const ScanDataset& d, const StyleSpec& style) {
  return d.axes.size() == 1 ? render_line_plot(d, style) : render_heatmap(d, style);
}

}  // namespace ecsym::scan
