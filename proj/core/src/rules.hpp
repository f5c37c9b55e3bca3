#pragma once

// Integration rules shared by the norm and search code.

#include <functional>
#include <vector>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/geometry.hpp"

namespace eigenlab::detail {

inline constexpr int kPanelOrder = 8;

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

/// `panels` Gauss panels of kPanelOrder nodes on [a, b].
Rule1D composite_gauss(double a, double b, int panels);

/// Panels needed for at least 10 nodes per wavelength 2pi/(lambda+1) on a length.
int panels_for(double length, double lambda);

/// Integral of |e|^2 over the tube using panel counts scaled by 2^level.
double tube_integral(const Eigenfunction& e, const Tube& tube, int level);

/// Integral of |e|^2 along the geodesic at refinement level `level`.
double restriction_integral(const Eigenfunction& e, const Geodesic& g, int level);

/// Integral of |e|^2 over the ball at refinement level `level`.
double ball_integral(const Eigenfunction& e, const GeodesicBall& ball, int level);

/// Evaluates at a sphere or torus point given in ambient/angle coordinates.
double eval_point(const Eigenfunction& e, const Point& x);

/// Doubles the refinement level until two successive values agree to rtol.
struct Refined {
  double value = 0.0;
  double previous = 0.0;
  int level = 0;
};
Refined refine(const std::function<double(int)>& at_level, double rtol, int max_doublings, const char* what);

/// Point at distance rho from `p` in direction cos(a) t + sin(a) n, where t and n
/// are orthonormal tangents at p (sphere) or unit vectors (torus).
Vec3 sphere_exp(const Vec3& p, const Vec3& t, const Vec3& n, double rho, double a);

}  // namespace eigenlab::detail
