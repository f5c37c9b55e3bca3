#include "eigenlab/quadrature.hpp"

#include <cmath>
#include <string>

#include "eigenlab/errors.hpp"
#include "eigenlab/legendre.hpp"
#include "eigenlab/parallel.hpp"

namespace eigenlab {

double QuadratureGrid::azimuth(std::size_t j) const {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(azimuth_count);
}

Point QuadratureGrid::node(std::size_t i) const {
  const std::size_t r = i / azimuth_count, j = i % azimuth_count;
  if (manifold == Manifold::torus) return TorusPoint(ring_coord[r], azimuth(j));
  const double t = ring_coord[r];
  const double s = std::sqrt((1.0 - t) * (1.0 + t));
  const double phi = azimuth(j);
  return SpherePoint{{s * std::cos(phi), s * std::sin(phi), t}};
}

std::vector<Point> QuadratureGrid::nodes() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(node(i));
  return out;
}

std::vector<double> QuadratureGrid::weights() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = weight(i);
  return out;
}

double QuadratureGrid::integrate(std::span<const double> values) const {
  if (values.size() != size()) throw UsageError("QuadratureGrid::integrate: value count does not match the grid");
  std::vector<double> rings(ring_count());
  for (std::size_t r = 0; r < ring_count(); ++r) {
    rings[r] = ring_weight[r] * pairwise_sum(values.subspan(r * azimuth_count, azimuth_count));
  }
  return pairwise_sum(rings);
}

std::size_t fft_friendly_size(std::size_t n) {
  if (n <= 1) return 1;
  std::size_t best = 1;
  while (best < n) best *= 2;
  for (std::size_t p5 = 1; p5 < best; p5 *= 5) {
    for (std::size_t p3 = p5; p3 < best; p3 *= 3) {
      std::size_t v = p3;
      while (v < n) v *= 2;
      if (v < best) best = v;
    }
  }
  return best;
}

namespace {

void check_cap(std::size_t nodes, const char* what) {
  if (nodes > runtime_limits().grid_cap) {
    throw ResourceError(std::string(what) + " needs " + std::to_string(nodes) +
                        " nodes, above the grid cap of " + std::to_string(runtime_limits().grid_cap));
  }
}

}  // namespace

QuadratureGrid sphere_quadrature(int exact_degree) {
  if (exact_degree < 0) throw DomainError("sphere_quadrature: exact_degree must be >= 0");
  const std::size_t rings = static_cast<std::size_t>(exact_degree) / 2 + 1;
  const std::size_t az = fft_friendly_size(static_cast<std::size_t>(exact_degree) + 1);
  if (rings > static_cast<std::size_t>(runtime_limits().grid_cap) / az) {
    check_cap(runtime_limits().grid_cap + 1, "sphere quadrature");
  }
  check_cap(rings * az, "sphere quadrature");
  const auto rule = gauss_legendre(static_cast<int>(rings));
  QuadratureGrid g;
  g.manifold = Manifold::sphere;
  g.exact_degree = exact_degree;
  g.azimuth_count = az;
  g.ring_coord = rule->nodes;
  g.ring_weight.resize(rings);
  const double dphi = kTwoPi / static_cast<double>(az);
  double max_gap = 0.0;
  for (std::size_t r = 0; r < rings; ++r) {
    g.ring_weight[r] = rule->weights[r] * dphi;
    if (r > 0) max_gap = std::max(max_gap, std::acos(rule->nodes[r - 1]) - std::acos(rule->nodes[r]));
  }
  max_gap = std::max(max_gap, std::acos(rule->nodes.back()) * 2.0);
  g.cell_size = std::max(max_gap, dphi);
  return g;
}

QuadratureGrid torus_quadrature(int cells_per_axis) {
  if (cells_per_axis < 1) throw DomainError("torus_quadrature: cells_per_axis must be >= 1");
  const auto m = static_cast<std::size_t>(cells_per_axis);
  check_cap(m * m, "torus quadrature");
  QuadratureGrid g;
  g.manifold = Manifold::torus;
  g.exact_degree = cells_per_axis - 1;
  g.azimuth_count = m;
  const double h = kTwoPi / static_cast<double>(m);
  g.cell_size = h;
  g.ring_coord.resize(m);
  g.ring_weight.assign(m, h * h);
  for (std::size_t r = 0; r < m; ++r) g.ring_coord[r] = h * static_cast<double>(r);
  return g;
}

}  // namespace eigenlab
