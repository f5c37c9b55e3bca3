#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eigenlab/scaling.hpp"
#include "eigenlab/sweep.hpp"

namespace eigenlab {

struct PlotSeries {
  std::string label;
  std::vector<FitPoint> points;
  /// Least squares line, drawn when there are enough points.
  std::optional<LinearFit> fit;
  /// Slope of the dashed guide line, anchored at the data's centroid.
  std::optional<double> reference;
};

/// Self-contained log-log plot (inline styles, log10 axes). Fitted and
/// reference slopes appear in the legend with three decimals.
std::string svg_loglog(const std::string& title, const std::vector<PlotSeries>& series);

struct PlotFile {
  std::string name;  // e.g. "lp_p_inf.svg"
  std::string svg;
};

/// One plot per (functional, parameter), one series per (sweep, family label).
/// Rows with nonpositive or non-finite values are left out.
std::vector<PlotFile> plot_table(const SweepTable& table);

}  // namespace eigenlab
