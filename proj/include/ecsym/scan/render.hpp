#pragma once

// Self-contained SVG output for scan datasets. Same input, same bytes.

#include <array>
#include <string>

#include "ecsym/scan/config.hpp"
#include "ecsym/scan/scan.hpp"

namespace ecsym::scan {

/// Viridis, t clamped to [0, 1].
std::array<int, 3> viridis(double t);

/// Heatmap of style.field over a two-axis dataset, with colorbar, axis labels,
/// hatched boundary cells and the model's analytic lines. Throws BadDataset for
/// one-axis or incomplete datasets.
std::string render_heatmap(const ScanDataset& d, const StyleSpec& style);

/// Line plot for one-axis datasets; boundary points drawn as crosses.
std::string render_line_plot(const ScanDataset& d, const StyleSpec& style);

/// Picks the heatmap or the line plot from the number of axes.
std::string render(const ScanDataset& d, const StyleSpec& style);

}  // namespace ecsym::scan
