#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eigenlab/geometry.hpp"
#include "eigenlab/quadrature.hpp"

namespace eigenlab {

enum class Family { zonal, highest_weight, random_harmonic, torus };

const char* to_string(Family f);
/// Accepts "zonal", "highest_weight", "highest-weight", "random_harmonic",
/// "random-harmonic", "random", "torus". Throws UsageError otherwise.
Family parse_family(const std::string& name);

/// sqrt(k (k + n - 1)).
double lambda_of_degree(int k, int n = 2);

/// Integer points on the circle of radius sqrt(N).
struct LatticeShell {
  long long N = 0;
  std::vector<std::array<int, 2>> points;
};

LatticeShell lattice_shell(long long N);

/// One torus mode a cos<m,x> + b sin<m,x>.
struct TorusMode {
  int m1 = 0;
  int m2 = 0;
  double a = 0.0;
  double b = 0.0;
};

/// L2-normalized Laplace eigenfunction on S^2 or T^2.
///
/// Sphere families carry their expansion in the real orthonormal basis of
/// degree k (cos_coef[m], sin_coef[m], m = 0..k); this drives ring evaluation.
/// Pointwise evaluation uses the closed form for zonal and highest-weight
/// functions.
class Eigenfunction {
 public:
  Family family() const { return family_; }
  Manifold manifold() const { return family_ == Family::torus ? Manifold::torus : Manifold::sphere; }
  int degree() const { return degree_; }
  long long frequency_norm_sq() const { return n_sq_; }
  double lambda() const { return lambda_; }
  const SpherePoint& pole() const { return pole_; }
  std::uint64_t seed() const { return seed_; }
  double normalization() const { return normalization_; }
  const std::vector<double>& cos_coef() const { return cos_coef_; }
  const std::vector<double>& sin_coef() const { return sin_coef_; }
  /// Torus modes, already multiplied by the normalization constant.
  const std::vector<TorusMode>& modes() const { return modes_; }
  /// Largest |m1| or |m2| among the torus modes.
  int max_axis_frequency() const;

  /// Short label such as "zonal", "random_harmonic/seed=3".
  std::string label() const;

  /// Throws UsageError for a point on the wrong manifold.
  double operator()(const Point& x) const;
  double at_sphere(const Vec3& x) const;
  double at_torus(double u, double v) const;

  friend Eigenfunction zonal(int k, const SpherePoint& pole);
  friend Eigenfunction highest_weight(int k);
  friend Eigenfunction random_harmonic(int k, std::uint64_t seed);
  friend Eigenfunction torus_eigenfunction(long long N, std::span<const TorusMode> coefficients);
  friend Eigenfunction torus_eigenfunction(long long N, std::uint64_t seed);

 private:
  Family family_ = Family::zonal;
  int degree_ = 0;
  long long n_sq_ = 0;
  double lambda_ = 0.0;
  SpherePoint pole_;
  std::uint64_t seed_ = 0;
  double normalization_ = 1.0;
  double log_norm_ = 0.0;
  std::vector<double> cos_coef_;
  std::vector<double> sin_coef_;
  std::vector<TorusMode> modes_;
};

/// sqrt((2k+1)/4pi) P_k(<x, pole>).
Eigenfunction zonal(int k, const SpherePoint& pole = SpherePoint{});
/// c_k sin^k(theta) cos(k phi).
Eigenfunction highest_weight(int k);
/// Normalized Gaussian combination of the 2k+1 real basis functions.
Eigenfunction random_harmonic(int k, std::uint64_t seed);
/// Normalized sum over lattice_shell(N); modes may be given at any shell point.
/// Throws DomainError when the shell is empty.
Eigenfunction torus_eigenfunction(long long N, std::span<const TorusMode> coefficients);
/// Gaussian coefficients on the half-shell representatives.
Eigenfunction torus_eigenfunction(long long N, std::uint64_t seed);

/// Normalization constant of the highest-weight harmonic of degree k.
double highest_weight_constant(int k);
double log_highest_weight_constant(int k);

/// Real orthonormal basis functions of degree k at x, ordered as
/// Y_{k,0}, Y^c_{k,1}, Y^s_{k,1}, ..., Y^c_{k,k}, Y^s_{k,k}.
std::vector<double> real_harmonics(int k, const Vec3& x);

/// Values at every grid node, node order of the grid.
std::vector<double> evaluate_batch(const Eigenfunction& e, const QuadratureGrid& grid);

/// Values on a uniform ring of `count` azimuths at cos(theta) = t (sphere), or
/// along v at fixed u (torus, `t` is u). Output has `count` entries.
void evaluate_ring(const Eigenfunction& e, double t, std::size_t count, std::span<double> out);

}  // namespace eigenlab
