#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/geometry.hpp"

namespace eigenlab {

struct NodalOptions {
  /// Relative change between the last two estimates that ends the halving.
  double rtol = 0.01;
  int max_halvings = 4;
};

struct NodalEstimate {
  double length = 0.0;
  /// Mesh edge bound of the accepted estimate.
  double h = 0.0;
  /// (h, length) for every mesh tried, coarsest first.
  std::vector<std::pair<double, double>> history;
  /// Sign-changing triangles in the accepted mesh.
  std::size_t crossings = 0;
  /// Vertices that evaluated to exactly zero and were nudged upward.
  std::size_t nudged = 0;
};

/// Length of the zero set from linear interpolation on a triangulation with
/// edges at most h: a subdivided icosahedron on S^2, the diagonally split
/// square grid on T^2. h <= 0 selects 0.5 / max(lambda, 1).
/// Throws DomainError when h exceeds 0.5 / max(lambda, 1) and ConvergenceError
/// when the halving cap is reached.
NodalEstimate nodal_length(const Eigenfunction& e, double h = 0.0, const NodalOptions& opts = {});

/// One estimate on a single mesh, no refinement.
NodalEstimate nodal_length_at(const Eigenfunction& e, double h);

/// Icosphere subdivision count giving edges of at most h.
int icosphere_frequency(double h);

struct BandOptions {
  /// Relative change between successive cell sizes that ends the refinement.
  double rtol = 0.02;
  int max_halvings = 5;
  /// Initial cell size; <= 0 selects 0.5 / max(lambda, 1).
  double cell = 0.0;
};

struct LevelBandMeasure {
  /// "manifold" or a tube description.
  std::string region;
  double region_volume = 0.0;
  double a = 0.0;
  double b = 0.0;
  double volume = 0.0;
  double cell = 0.0;
  /// (cell size, volume) for every grid tried.
  std::vector<std::pair<double, double>> history;
  /// Cells split into 4 x 4 samples because their corners straddle a threshold.
  std::size_t split_cells = 0;
};

/// Area of {x in region : a <= |e(x)| <= b}. The region is the tube when given,
/// else the whole manifold. b may be +inf. Throws DomainError unless
/// 0 <= a <= b and ConvergenceError when the halving cap is reached.
LevelBandMeasure level_band_volume(const Eigenfunction& e, const std::optional<Tube>& region, double a, double b,
                                   const BandOptions& opts = {});

}  // namespace eigenlab
