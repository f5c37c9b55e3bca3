#pragma once

#include <cstddef>
#include <vector>

#include "eigenlab/eigenfunction.hpp"

namespace eigenlab {

/// Eigenfunction values on a uniform angle grid, used to screen candidates
/// before accurate local searches.
///
/// Sphere: rows at theta = pi i / (rows - 1) (both poles included), columns at
/// phi = 2 pi j / cols. Torus: rows at u = 2 pi i / rows, columns at v.
class SampledField {
 public:
  /// Grid spacing at most `spacing` radians in both directions.
  static SampledField sample(const Eigenfunction& e, double spacing);

  /// Box average of |e|^2 over a window of about +-radius around each node of a
  /// grid with spacing radius / 2. The result stores densities, not values.
  SampledField smoothed_energy(double radius) const;

  Manifold manifold() const { return manifold_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double spacing() const { return spacing_; }
  float at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Point node(std::size_t i, std::size_t j) const;

  /// Bilinear interpolation in the angle coordinates.
  double interpolate(const Point& x) const;
  double interpolate_sphere(const Vec3& x) const;
  double interpolate_torus(double u, double v) const;

  /// Nodes that are local maxima of |value| over their 8 neighbours, ordered by
  /// decreasing |value| then grid order; plateaus keep their first node.
  std::vector<Point> top_local_maxima(std::size_t count) const;

 private:
  double lookup(double row, double col) const;

  Manifold manifold_ = Manifold::sphere;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  double spacing_ = 0.0;
  double row_step_ = 0.0;
  double col_step_ = 0.0;
  std::vector<float> data_;
};

}  // namespace eigenlab
