#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eigenlab/geometry.hpp"

namespace eigenlab {

/// Ring-structured product grid. Node index i = ring * azimuth_count + j.
///
/// Sphere: rings at t = cos(theta) = ring_coord[ring] (Gauss-Legendre), nodes at
/// phi = 2 pi j / azimuth_count. Torus: rings at u = ring_coord[ring], nodes at
/// v = 2 pi j / azimuth_count.
struct QuadratureGrid {
  Manifold manifold = Manifold::sphere;
  /// Highest total polynomial degree integrated exactly (sphere); for the torus
  /// the highest trigonometric frequency per axis integrated exactly.
  int exact_degree = 0;
  /// Largest distance between neighbouring nodes along a ring or across rings.
  double cell_size = 0.0;
  std::vector<double> ring_coord;
  /// Weight of every node on the ring (Gauss weight times 2pi / azimuth_count).
  std::vector<double> ring_weight;
  std::size_t azimuth_count = 0;

  std::size_t size() const { return ring_coord.size() * azimuth_count; }
  std::size_t ring_count() const { return ring_coord.size(); }
  double azimuth(std::size_t j) const;
  Point node(std::size_t i) const;
  double weight(std::size_t i) const { return ring_weight[i / azimuth_count]; }

  std::vector<Point> nodes() const;
  std::vector<double> weights() const;

  /// Sum of weight * value with deterministic pairwise accumulation per ring.
  double integrate(std::span<const double> values) const;
};

/// Smallest integer >= n of the form 2^a 3^b 5^c.
std::size_t fft_friendly_size(std::size_t n);

/// Gauss-Legendre in cos(theta) times uniform in phi; integrates every
/// polynomial of total degree <= exact_degree exactly. Throws ResourceError
/// when the node count exceeds the configured cap.
QuadratureGrid sphere_quadrature(int exact_degree);

/// Uniform (2 pi / cells)^2 grid; exact for trigonometric polynomials with
/// frequency < cells_per_axis in each variable.
QuadratureGrid torus_quadrature(int cells_per_axis);

}  // namespace eigenlab
