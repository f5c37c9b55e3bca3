#pragma once

#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

#include "eigenlab/vec3.hpp"

namespace eigenlab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Manifold { sphere, torus };

const char* to_string(Manifold m);

/// Unit vector in R^3.
struct SpherePoint {
  Vec3 coords{0.0, 0.0, 1.0};

  /// Normalizes `v`; throws DomainError for the zero vector.
  static SpherePoint from_vector(const Vec3& v);
  /// Colatitude theta from +z, longitude phi from +x.
  static SpherePoint from_angles(double theta, double phi);

  double theta() const;
  double phi() const;
};

/// Point of the flat torus [0, 2pi)^2.
struct TorusPoint {
  double u = 0.0;
  double v = 0.0;

  TorusPoint() = default;
  /// Coordinates are reduced modulo 2pi.
  TorusPoint(double u, double v);
};

using Point = std::variant<SpherePoint, TorusPoint>;

Manifold manifold_of(const Point& p);

/// Reduces an angle to [0, 2pi).
double wrap_angle(double a);

double manifold_area(Manifold m);
double injectivity_radius(Manifold m);

/// Geodesic segment parametrized by arc length s in [0, length].
///
/// Sphere: arc of the great circle orthogonal to `axis`, starting at angle
/// `start_phase` measured in the frame returned by great_circle_frame(axis).
/// Torus: straight segment from `base` with unit direction (dir_u, dir_v).
class Geodesic {
 public:
  static Geodesic sphere(const Vec3& axis, double start_phase, double length = 1.0);
  /// Full great circle orthogonal to `axis`.
  static Geodesic great_circle(const Vec3& axis);
  /// `angle` is the direction angle measured from the u axis.
  static Geodesic torus(const TorusPoint& base, double angle, double length = 1.0);
  /// Closed geodesic of primitive integer direction (p, q) through `base`.
  static Geodesic torus_closed(const TorusPoint& base, int p, int q);

  Manifold manifold() const { return manifold_; }
  double length() const { return length_; }
  bool closed() const { return closed_; }

  const Vec3& axis() const { return axis_; }
  double start_phase() const { return start_phase_; }
  const TorusPoint& base() const { return base_; }
  double dir_u() const { return dir_u_; }
  double dir_v() const { return dir_v_; }

  /// Point at arc length s (any real s; wraps around closed curves).
  Point at(double s) const;

  /// Sphere only: orthonormal e1, e2 spanning the plane of the circle.
  void frame(Vec3& e1, Vec3& e2) const;

 private:
  Manifold manifold_ = Manifold::sphere;
  Vec3 axis_{0.0, 0.0, 1.0};
  double start_phase_ = 0.0;
  TorusPoint base_;
  double dir_u_ = 1.0;
  double dir_v_ = 0.0;
  double length_ = 1.0;
  bool closed_ = false;
};

/// Orthonormal frame (e1, e2) of the plane orthogonal to `axis`; for the
/// +z axis it is (x, y).
void great_circle_frame(const Vec3& axis, Vec3& e1, Vec3& e2);

/// Set of points within half_width of a geodesic segment (endpoint-clamped).
struct Tube {
  Geodesic geodesic;
  double half_width = 0.0;

  /// Validates that the tube is embedded: on S^2 half_width <= pi/2 and the two
  /// end caps do not meet; on T^2 no lattice translate overlaps the tube.
  static Tube make(const Geodesic& g, double half_width);

  double area() const;
  bool contains(const Point& x) const;
};

struct GeodesicBall {
  Point center;
  double radius = 0.0;

  static GeodesicBall make(const Point& center, double radius);

  double area() const;
  bool contains(const Point& x) const;
};

/// Throws UsageError when the points live on different manifolds.
double geodesic_distance(const Point& p, const Point& q);

double distance_to_geodesic(const Point& x, const Geodesic& g);

struct GeodesicFamilyOptions {
  double density_factor = 1.0;
  /// Restrict to closed geodesics (full great circles, closed torus loops).
  bool closed_only = false;
};

/// Discretization of the space of unit-length geodesics with parameter spacing
/// at most density_factor * lambda^{-1/2}.
std::vector<Geodesic> geodesic_family(Manifold m, double lambda, const GeodesicFamilyOptions& opts);

/// Quasi-uniform spherical Fibonacci point set of size n.
std::vector<Vec3> fibonacci_sphere(std::size_t n);

}  // namespace eigenlab
