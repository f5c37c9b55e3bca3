#include "eigenlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eigenlab/errors.hpp"
#include "eigenlab/parallel.hpp"

namespace eigenlab {

const char* to_string(Manifold m) { return m == Manifold::sphere ? "sphere" : "torus"; }

SpherePoint SpherePoint::from_vector(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("sphere point needs a nonzero finite vector");
  return SpherePoint{v / n};
}

SpherePoint SpherePoint::from_angles(double theta, double phi) {
  const double s = std::sin(theta);
  return SpherePoint{{s * std::cos(phi), s * std::sin(phi), std::cos(theta)}};
}

double SpherePoint::theta() const { return std::atan2(std::hypot(coords.x, coords.y), coords.z); }

double SpherePoint::phi() const { return wrap_angle(std::atan2(coords.y, coords.x)); }

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

TorusPoint::TorusPoint(double u_, double v_) : u(wrap_angle(u_)), v(wrap_angle(v_)) {}

Manifold manifold_of(const Point& p) {
  return std::holds_alternative<SpherePoint>(p) ? Manifold::sphere : Manifold::torus;
}

double manifold_area(Manifold m) { return m == Manifold::sphere ? 4.0 * kPi : kTwoPi * kTwoPi; }

double injectivity_radius(Manifold) { return kPi; }

void great_circle_frame(const Vec3& axis, Vec3& e1, Vec3& e2) {
  const Vec3 a = normalized(axis);
  const double theta = std::acos(std::clamp(a.z, -1.0, 1.0));
  const double phi = (a.x == 0.0 && a.y == 0.0) ? 0.0 : std::atan2(a.y, a.x);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  e1 = {ct * cp, ct * sp, -st};
  e2 = {-sp, cp, 0.0};
}

Geodesic Geodesic::sphere(const Vec3& axis, double start_phase, double length) {
  const double n = norm(axis);
  if (!(n > 0.0)) throw DomainError("geodesic axis must be nonzero");
  if (!(length > 0.0) || length > kTwoPi + 1e-12) {
    throw DomainError("sphere geodesic length must lie in (0, 2pi]");
  }
  Geodesic g;
  g.manifold_ = Manifold::sphere;
  g.axis_ = axis / n;
  g.start_phase_ = wrap_angle(start_phase);
  g.length_ = std::min(length, kTwoPi);
  g.closed_ = g.length_ >= kTwoPi - 1e-12;
  if (g.closed_) g.length_ = kTwoPi;
  return g;
}

Geodesic Geodesic::great_circle(const Vec3& axis) { return sphere(axis, 0.0, kTwoPi); }

Geodesic Geodesic::torus(const TorusPoint& base, double angle, double length) {
  if (!(length > 0.0)) throw DomainError("torus geodesic length must be positive");
  Geodesic g;
  g.manifold_ = Manifold::torus;
  g.base_ = base;
  g.dir_u_ = std::cos(angle);
  g.dir_v_ = std::sin(angle);
  g.length_ = length;
  return g;
}

Geodesic Geodesic::torus_closed(const TorusPoint& base, int p, int q) {
  if ((p == 0 && q == 0) || std::gcd(p, q) != 1) {
    throw DomainError("closed torus geodesic needs a primitive integer direction");
  }
  const double len = std::hypot(static_cast<double>(p), static_cast<double>(q));
  Geodesic g = torus(base, std::atan2(static_cast<double>(q), static_cast<double>(p)), kTwoPi * len);
  g.closed_ = true;
  return g;
}

void Geodesic::frame(Vec3& e1, Vec3& e2) const {
  if (manifold_ != Manifold::sphere) throw UsageError("frame() is defined for sphere geodesics only");
  great_circle_frame(axis_, e1, e2);
}

Point Geodesic::at(double s) const {
  if (manifold_ == Manifold::sphere) {
    Vec3 e1, e2;
    great_circle_frame(axis_, e1, e2);
    const double a = start_phase_ + s;
    return SpherePoint::from_vector(std::cos(a) * e1 + std::sin(a) * e2);
  }
  return TorusPoint(base_.u + s * dir_u_, base_.v + s * dir_v_);
}

namespace {

double sphere_distance(const SpherePoint& p, const SpherePoint& q) { return angle_between(p.coords, q.coords); }

double periodic_gap(double a, double b) {
  const double d = std::fabs(a - b);
  const double r = std::fmod(d, kTwoPi);
  return std::min(r, kTwoPi - r);
}

double torus_distance(const TorusPoint& p, const TorusPoint& q) {
  return std::hypot(periodic_gap(p.u, q.u), periodic_gap(p.v, q.v));
}

double point_segment_distance(double px, double py, double dx, double dy, double len) {
  const double s = std::clamp(px * dx + py * dy, 0.0, len);
  return std::hypot(px - s * dx, py - s * dy);
}

}  // namespace

double geodesic_distance(const Point& p, const Point& q) {
  if (p.index() != q.index()) throw UsageError("geodesic_distance: points lie on different manifolds");
  if (const auto* ps = std::get_if<SpherePoint>(&p)) return sphere_distance(*ps, std::get<SpherePoint>(q));
  return torus_distance(std::get<TorusPoint>(p), std::get<TorusPoint>(q));
}

double distance_to_geodesic(const Point& x, const Geodesic& g) {
  if (manifold_of(x) != g.manifold()) throw UsageError("distance_to_geodesic: point and geodesic on different manifolds");
  if (g.manifold() == Manifold::sphere) {
    const Vec3& p = std::get<SpherePoint>(x).coords;
    Vec3 e1, e2;
    g.frame(e1, e2);
    const double c1 = dot(p, e1), c2 = dot(p, e2), ca = dot(p, g.axis());
    const double planar = std::hypot(c1, c2);
    const double psi = wrap_angle(std::atan2(c2, c1) - g.start_phase());
    if (g.closed() || psi <= g.length()) return std::atan2(std::fabs(ca), planar);
    return std::min(geodesic_distance(x, g.at(0.0)), geodesic_distance(x, g.at(g.length())));
  }
  const TorusPoint& p = std::get<TorusPoint>(x);
  const TorusPoint& b = g.base();
  const int reach = 1 + static_cast<int>(std::ceil(g.length() / kTwoPi));
  double best = std::numeric_limits<double>::infinity();
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -reach; j <= reach; ++j) {
      const double px = p.u + kTwoPi * i - b.u;
      const double py = p.v + kTwoPi * j - b.v;
      best = std::min(best, point_segment_distance(px, py, g.dir_u(), g.dir_v(), g.length()));
    }
  }
  return best;
}

Tube Tube::make(const Geodesic& g, double half_width) {
  if (!(half_width > 0.0)) throw DomainError("tube half_width must be positive");
  if (g.manifold() == Manifold::sphere) {
    if (half_width > kPi / 2 + 1e-15) throw DomainError("sphere tube half_width must not exceed pi/2");
    if (!g.closed() && g.length() + 2.0 * half_width > kTwoPi) {
      throw DomainError("sphere tube end caps overlap; shorten the segment or the width");
    }
  } else if (g.closed()) {
    if (half_width * g.length() > kPi * kTwoPi + 1e-12) {
      throw DomainError("closed torus tube wraps onto itself");
    }
  } else {
    const double l = g.length() + 2.0 * half_width;
    if (std::hypot(l, 2.0 * half_width) >= kTwoPi) throw DomainError("torus tube overlaps its own translate");
  }
  return Tube{g, half_width};
}

double Tube::area() const {
  const double w = half_width, l = geodesic.length();
  if (geodesic.manifold() == Manifold::sphere) {
    const double strip = 2.0 * l * std::sin(w);
    return geodesic.closed() ? strip : strip + kTwoPi * (1.0 - std::cos(w));
  }
  return geodesic.closed() ? 2.0 * w * l : 2.0 * w * l + kPi * w * w;
}

bool Tube::contains(const Point& x) const { return distance_to_geodesic(x, geodesic) <= half_width; }

GeodesicBall GeodesicBall::make(const Point& center, double radius) {
  if (!(radius > 0.0) || radius > injectivity_radius(manifold_of(center)) + 1e-15) {
    throw DomainError("ball radius must lie in (0, injectivity radius]");
  }
  return GeodesicBall{center, radius};
}

double GeodesicBall::area() const {
  if (manifold_of(center) == Manifold::sphere) return kTwoPi * (1.0 - std::cos(radius));
  return kPi * radius * radius;
}

bool GeodesicBall::contains(const Point& x) const { return geodesic_distance(center, x) <= radius; }

std::vector<Vec3> fibonacci_sphere(std::size_t n) {
  std::vector<Vec3> pts(n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    pts[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return pts;
}

namespace {

void check_family_size(double estimate) {
  if (estimate > static_cast<double>(runtime_limits().grid_cap)) {
    throw ResourceError("geodesic family of about " + std::to_string(static_cast<long long>(estimate)) +
                        " members exceeds the grid cap; raise density_factor or --grid-cap");
  }
}

}  // namespace

std::vector<Geodesic> geodesic_family(Manifold m, double lambda, const GeodesicFamilyOptions& opts) {
  if (!(lambda >= 1.0)) throw DomainError("geodesic_family needs lambda >= 1");
  if (!(opts.density_factor > 0.0)) throw DomainError("density_factor must be positive");
  const double delta = opts.density_factor / std::sqrt(lambda);
  std::vector<Geodesic> out;

  if (m == Manifold::sphere) {
    const double n_axes = std::ceil(4.0 * kPi / (delta * delta));
    const double n_phase = opts.closed_only ? 1.0 : std::ceil(kTwoPi / delta);
    check_family_size(n_axes * n_phase / 2.0);
    for (const Vec3& a : fibonacci_sphere(static_cast<std::size_t>(n_axes))) {
      // Opposite axes give the same great circle.
      if (a.z < 0.0) continue;
      if (opts.closed_only) {
        out.push_back(Geodesic::great_circle(a));
        continue;
      }
      for (int j = 0; j < static_cast<int>(n_phase); ++j) {
        out.push_back(Geodesic::sphere(a, kTwoPi * j / n_phase, 1.0));
      }
    }
    return out;
  }

  if (opts.closed_only) {
    for (int p = 0; p <= 2; ++p) {
      for (int q = -2; q <= 2; ++q) {
        if (p * p + q * q > 5 || std::gcd(p, q) != 1 || (p == 0 && q != 1)) continue;
        const double spacing = kTwoPi / std::hypot(p, q);
        const int n_off = static_cast<int>(std::ceil(spacing / delta));
        // Offsets along the unit normal (-q, p)/|(p,q)| sweep all parallel loops.
        const double nu = -q / std::hypot(p, q), nv = p / std::hypot(p, q);
        for (int i = 0; i < n_off; ++i) {
          const double o = spacing * i / n_off;
          out.push_back(Geodesic::torus_closed(TorusPoint(o * nu, o * nv), p, q));
        }
      }
    }
    return out;
  }
  const double n_base = std::ceil(kTwoPi / delta);
  const double n_dir = std::ceil(kPi / delta);
  check_family_size(n_base * n_base * n_dir);
  const int nb = static_cast<int>(n_base), nd = static_cast<int>(n_dir);
  out.reserve(static_cast<std::size_t>(nb) * nb * nd);
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) {
      for (int d = 0; d < nd; ++d) {
        out.push_back(Geodesic::torus(TorusPoint(kTwoPi * i / nb, kTwoPi * j / nb), kPi * d / nd, 1.0));
      }
    }
  }
  return out;
}

}  // namespace eigenlab
