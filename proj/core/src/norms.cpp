#include "eigenlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eigenlab/errors.hpp"
#include "eigenlab/format.hpp"
#include "eigenlab/legendre.hpp"
#include "eigenlab/parallel.hpp"
#include "eigenlab/quadrature.hpp"
#include "rules.hpp"

namespace eigenlab {

namespace detail {

Rule1D composite_gauss(double a, double b, int panels) {
  const auto g = gauss_legendre(kPanelOrder);
  Rule1D r;
  r.x.reserve(static_cast<std::size_t>(panels) * kPanelOrder);
  r.w.reserve(r.x.capacity());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + h * p;
    for (int i = 0; i < kPanelOrder; ++i) {
      r.x.push_back(lo + 0.5 * h * (g->nodes[i] + 1.0));
      r.w.push_back(0.5 * h * g->weights[i]);
    }
  }
  return r;
}

int panels_for(double length, double lambda) {
  const double nodes = 10.0 * length * (lambda + 1.0) / kTwoPi;
  return std::max(1, static_cast<int>(std::ceil(nodes / kPanelOrder)));
}

double eval_point(const Eigenfunction& e, const Point& x) { return e(x); }

Vec3 sphere_exp(const Vec3& p, const Vec3& t, const Vec3& n, double rho, double a) {
  return std::cos(rho) * p + std::sin(rho) * (std::cos(a) * t + std::sin(a) * n);
}

Refined refine(const std::function<double(int)>& at_level, double rtol, int max_doublings, const char* what) {
  double prev = at_level(0);
  for (int level = 1; level <= max_doublings; ++level) {
    const double cur = at_level(level);
    if (std::fabs(cur - prev) <= rtol * std::max(std::fabs(cur), 1e-300)) return {cur, prev, level};
    if (level == max_doublings) {
      throw ConvergenceError(std::string(what) + " did not converge within " + std::to_string(max_doublings) +
                                 " doublings",
                             prev, cur);
    }
    prev = cur;
  }
  return {prev, prev, 0};
}

namespace {

/// Sum over rows of f(row) computed in parallel, reduced pairwise.
double parallel_rows(std::size_t rows, const std::function<double(std::size_t)>& f) {
  std::vector<double> part(rows);
  parallel_for(rows, [&](std::size_t i) { part[i] = f(i); });
  return pairwise_sum(part);
}

double sphere_half_disk(const Eigenfunction& e, const Vec3& p, const Vec3& out, const Vec3& side, double w,
                        int level) {
  const double lam = e.lambda();
  const Rule1D rho = composite_gauss(0.0, w, panels_for(w, lam) << level);
  const Rule1D ang = composite_gauss(-kPi / 2, kPi / 2, panels_for(kPi * std::sin(w), lam) << level);
  std::vector<Vec3> dirs(ang.x.size());
  for (std::size_t j = 0; j < dirs.size(); ++j) dirs[j] = std::cos(ang.x[j]) * out + std::sin(ang.x[j]) * side;
  return parallel_rows(rho.x.size(), [&](std::size_t i) {
    const double cr = std::cos(rho.x[i]), sr = std::sin(rho.x[i]);
    double acc = 0.0;
    for (std::size_t j = 0; j < ang.x.size(); ++j) {
      const double v = e.at_sphere(cr * p + sr * dirs[j]);
      acc += ang.w[j] * v * v;
    }
    return acc * rho.w[i] * sr;
  });
}

double torus_half_disk(const Eigenfunction& e, double pu, double pv, double ou, double ov, double w, int level) {
  const double lam = e.lambda();
  const Rule1D rho = composite_gauss(0.0, w, panels_for(w, lam) << level);
  const Rule1D ang = composite_gauss(-kPi / 2, kPi / 2, panels_for(kPi * w, lam) << level);
  // Side direction is the outward direction rotated by +90 degrees.
  const double su = -ov, sv = ou;
  return parallel_rows(rho.x.size(), [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < ang.x.size(); ++j) {
      const double c = std::cos(ang.x[j]), s = std::sin(ang.x[j]);
      const double v = e.at_torus(pu + rho.x[i] * (c * ou + s * su), pv + rho.x[i] * (c * ov + s * sv));
      acc += ang.w[j] * v * v;
    }
    return acc * rho.w[i] * rho.x[i];
  });
}

}  // namespace

double tube_integral(const Eigenfunction& e, const Tube& tube, int level) {
  const Geodesic& g = tube.geodesic;
  if (g.manifold() != e.manifold()) throw UsageError("tube and eigenfunction on different manifolds");
  const double w = tube.half_width, len = g.length(), lam = e.lambda();
  const Rule1D s = composite_gauss(0.0, len, panels_for(len, lam) << level);
  const Rule1D r = composite_gauss(-w, w, panels_for(2.0 * w, lam) << level);

  if (g.manifold() == Manifold::sphere) {
    Vec3 e1, e2;
    g.frame(e1, e2);
    const Vec3 a = g.axis();
    const double phi0 = g.start_phase();
    std::vector<double> cr(r.x.size()), sr(r.x.size());
    for (std::size_t j = 0; j < r.x.size(); ++j) {
      cr[j] = std::cos(r.x[j]);
      sr[j] = std::sin(r.x[j]);
    }
    double total = parallel_rows(s.x.size(), [&](std::size_t i) {
      const double ph = phi0 + s.x[i];
      const Vec3 gam = std::cos(ph) * e1 + std::sin(ph) * e2;
      double acc = 0.0;
      for (std::size_t j = 0; j < r.x.size(); ++j) {
        const double v = e.at_sphere(cr[j] * gam + sr[j] * a);
        acc += r.w[j] * cr[j] * v * v;
      }
      return acc * s.w[i];
    });
    if (!g.closed()) {
      const Vec3 p0 = std::cos(phi0) * e1 + std::sin(phi0) * e2;
      const Vec3 t0 = std::sin(phi0) * e1 - std::cos(phi0) * e2;
      const double ph1 = phi0 + len;
      const Vec3 p1 = std::cos(ph1) * e1 + std::sin(ph1) * e2;
      const Vec3 t1 = -std::sin(ph1) * e1 + std::cos(ph1) * e2;
      total += sphere_half_disk(e, p0, t0, a, w, level) + sphere_half_disk(e, p1, t1, a, w, level);
    }
    return total;
  }

  const double du = g.dir_u(), dv = g.dir_v(), nu = -dv, nv = du;
  const double bu = g.base().u, bv = g.base().v;
  double total = parallel_rows(s.x.size(), [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < r.x.size(); ++j) {
      const double v = e.at_torus(bu + s.x[i] * du + r.x[j] * nu, bv + s.x[i] * dv + r.x[j] * nv);
      acc += r.w[j] * v * v;
    }
    return acc * s.w[i];
  });
  if (!g.closed()) {
    total += torus_half_disk(e, bu, bv, -du, -dv, w, level) +
             torus_half_disk(e, bu + len * du, bv + len * dv, du, dv, w, level);
  }
  return total;
}

double restriction_integral(const Eigenfunction& e, const Geodesic& g, int level) {
  if (g.manifold() != e.manifold()) throw UsageError("geodesic and eigenfunction on different manifolds");
  const Rule1D s = composite_gauss(0.0, g.length(), panels_for(g.length(), e.lambda()) << level);
  std::vector<double> part(s.x.size());
  if (g.manifold() == Manifold::sphere) {
    Vec3 e1, e2;
    g.frame(e1, e2);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double ph = g.start_phase() + s.x[i];
      const double v = e.at_sphere(std::cos(ph) * e1 + std::sin(ph) * e2);
      part[i] = s.w[i] * v * v;
    }
  } else {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double v = e.at_torus(g.base().u + s.x[i] * g.dir_u(), g.base().v + s.x[i] * g.dir_v());
      part[i] = s.w[i] * v * v;
    }
  }
  return pairwise_sum(part);
}

double ball_integral(const Eigenfunction& e, const GeodesicBall& ball, int level) {
  if (manifold_of(ball.center) != e.manifold()) throw UsageError("ball and eigenfunction on different manifolds");
  const double r = ball.radius, lam = e.lambda();
  const Rule1D rho = composite_gauss(0.0, r, panels_for(r, lam) << level);
  const bool sphere = e.manifold() == Manifold::sphere;
  const double circ = sphere ? kTwoPi * std::sin(std::min(r, kPi / 2)) : kTwoPi * r;
  const int n_ang = std::max(16, static_cast<int>(std::ceil(10.0 * circ * (lam + 1.0) / kTwoPi))) << level;
  const double dang = kTwoPi / n_ang;
  if (sphere) {
    const Vec3 c = std::get<SpherePoint>(ball.center).coords;
    Vec3 t, n;
    great_circle_frame(c, t, n);
    std::vector<Vec3> dirs(static_cast<std::size_t>(n_ang));
    for (int j = 0; j < n_ang; ++j) dirs[j] = std::cos(dang * j) * t + std::sin(dang * j) * n;
    return parallel_rows(rho.x.size(), [&](std::size_t i) {
      const double cr = std::cos(rho.x[i]), sr = std::sin(rho.x[i]);
      std::vector<double> ring(static_cast<std::size_t>(n_ang));
      for (int j = 0; j < n_ang; ++j) {
        const double v = e.at_sphere(cr * c + sr * dirs[j]);
        ring[static_cast<std::size_t>(j)] = v * v;
      }
      return pairwise_sum(ring) * dang * rho.w[i] * sr;
    });
  }
  const TorusPoint c = std::get<TorusPoint>(ball.center);
  return parallel_rows(rho.x.size(), [&](std::size_t i) {
    std::vector<double> ring(static_cast<std::size_t>(n_ang));
    for (int j = 0; j < n_ang; ++j) {
      const double v = e.at_torus(c.u + rho.x[i] * std::cos(dang * j), c.v + rho.x[i] * std::sin(dang * j));
      ring[static_cast<std::size_t>(j)] = v * v;
    }
    return pairwise_sum(ring) * dang * rho.w[i] * rho.x[i];
  });
}

}  // namespace detail

namespace {

using detail::composite_gauss;

bool is_even_integer(double p) { return p == std::floor(p) && std::fmod(p, 2.0) == 0.0 && p <= 64.0; }

double pow_abs(double v, double p) {
  const double a = std::fabs(v);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  if (p == 4.0) return (a * a) * (a * a);
  return std::pow(a, p);
}

std::string p_label(double p) { return "p=" + format_shortest(p); }

/// Integral of f over [a, b] after the map t = a + (b-a) S(x), with S the quintic
/// smoothstep; removes (t-a)^p and (b-t)^p end singularities.
double smooth_panel(const std::function<double(double)>& f, double a, double b, int n) {
  const auto g = gauss_legendre(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * (g->nodes[i] + 1.0);
    const double sx = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
    const double dsx = 30.0 * x * x * (1.0 - x) * (1.0 - x);
    acc += 0.5 * g->weights[i] * f(a + (b - a) * sx) * dsx;
  }
  return acc * (b - a);
}

double plain_panel(const std::function<double(double)>& f, double a, double b, int n) {
  const auto g = gauss_legendre(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += g->weights[i] * f(a + 0.5 * (b - a) * (g->nodes[i] + 1.0));
  return 0.5 * (b - a) * acc;
}

NormReport finish(NormReport r, const char* functional, std::string parameter) {
  r.functional = functional;
  r.parameter = std::move(parameter);
  return r;
}

NormReport lp_exact(const Eigenfunction& e, double p) {
  NormReport r;
  QuadratureGrid grid;
  if (e.manifold() == Manifold::sphere) {
    grid = sphere_quadrature(static_cast<int>(p) * e.degree());
  } else {
    grid = torus_quadrature(static_cast<int>(p) * e.max_axis_frequency() + 1);
  }
  const int ip = static_cast<int>(p);
  std::vector<double> ring_sum(grid.ring_count());
  parallel_for(grid.ring_count(), [&](std::size_t i) {
    std::vector<double> vals(grid.azimuth_count);
    evaluate_ring(e, grid.ring_coord[i], grid.azimuth_count, vals);
    for (double& v : vals) {
      const double v2 = v * v;
      double acc = 1.0;
      for (int k = 0; k < ip / 2; ++k) acc *= v2;
      v = acc;
    }
    ring_sum[i] = grid.ring_weight[i] * pairwise_sum(vals);
  });
  r.value = std::pow(pairwise_sum(ring_sum), 1.0 / p);
  r.exact = true;
  r.grid_meta = std::string("route=exact_grid;") + (e.manifold() == Manifold::sphere ? "degree=" : "cells=") +
                std::to_string(e.manifold() == Manifold::sphere ? grid.exact_degree : grid.exact_degree + 1) +
                ";nodes=" + std::to_string(grid.size());
  return r;
}

NormReport lp_zonal(const Eigenfunction& e, double p, const GridPolicy& policy) {
  const int k = e.degree();
  const double c = e.normalization();
  std::vector<double> cuts{-1.0};
  for (double t : legendre_roots(k)) cuts.push_back(t);
  cuts.push_back(1.0);
  const bool integral_p = p == std::floor(p);
  auto f = [&](double t) { return pow_abs(c * legendre_p(k, t), p); };
  auto at_level = [&](int level) {
    const int n = 8 << level;
    std::vector<double> part(cuts.size() - 1);
    parallel_for(part.size(), [&](std::size_t i) {
      part[i] = integral_p ? plain_panel(f, cuts[i], cuts[i + 1], n) : smooth_panel(f, cuts[i], cuts[i + 1], n);
    });
    return std::pow(kTwoPi * pairwise_sum(part), 1.0 / p);
  };
  const auto res = detail::refine(at_level, policy.lp_rtol, policy.lp_max_refinements + 3, "zonal L^p reduction");
  NormReport r;
  r.value = res.value;
  r.error_estimate = std::fabs(res.value - res.previous);
  r.refinement_steps = res.level;
  r.grid_meta = "route=zonal_1d;panels=" + std::to_string(cuts.size() - 1) +
                ";nodes_per_panel=" + std::to_string(8 << res.level);
  return r;
}

NormReport lp_highest_weight(const Eigenfunction& e, double p, const GridPolicy& policy) {
  const int k = e.degree();
  NormReport r;
  if (k == 0) {
    r.value = e.normalization() * std::pow(4.0 * kPi, 1.0 / p);
    r.exact = true;
    r.grid_meta = "route=constant";
    return r;
  }
  const double q = k * p + 1.0;
  const bool integral_p = p == std::floor(p);
  auto polar = [&](double th) { return std::exp(q * std::log(std::sin(th))); };
  auto azimuthal = [&](double u) { return pow_abs(std::cos(u), p); };
  auto at_level = [&](int level) {
    const int n = 32 << level;
    const double i1 = 2.0 * plain_panel(polar, 0.0, kPi / 2, n);
    const double i2 =
        4.0 * (integral_p ? plain_panel(azimuthal, 0.0, kPi / 2, n) : smooth_panel(azimuthal, 0.0, kPi / 2, n));
    return std::exp(log_highest_weight_constant(k) + (std::log(i1) + std::log(i2)) / p);
  };
  const auto res =
      detail::refine(at_level, policy.lp_rtol, policy.lp_max_refinements + 3, "highest-weight L^p reduction");
  r.value = res.value;
  r.error_estimate = std::fabs(res.value - res.previous);
  r.refinement_steps = res.level;
  r.grid_meta = "route=separable;nodes=" + std::to_string(32 << res.level);
  return r;
}

NormReport lp_generic(const Eigenfunction& e, double p, const GridPolicy& policy) {
  const bool sphere = e.manifold() == Manifold::sphere;
  const int base = sphere ? 4 * (e.degree() + 1) : 4 * (e.max_axis_frequency() + 1);
  std::string meta;
  auto at_level = [&](int level) {
    const int size = base << level;
    const QuadratureGrid grid = sphere ? sphere_quadrature(size) : torus_quadrature(size);
    std::vector<double> ring_sum(grid.ring_count());
    parallel_for(grid.ring_count(), [&](std::size_t i) {
      std::vector<double> vals(grid.azimuth_count);
      evaluate_ring(e, grid.ring_coord[i], grid.azimuth_count, vals);
      for (double& v : vals) v = pow_abs(v, p);
      ring_sum[i] = grid.ring_weight[i] * pairwise_sum(vals);
    });
    meta = std::string("route=product_grid;") + (sphere ? "degree=" : "cells=") + std::to_string(size) +
           ";nodes=" + std::to_string(grid.size());
    return std::pow(pairwise_sum(ring_sum), 1.0 / p);
  };
  const auto res = detail::refine(at_level, policy.lp_rtol, policy.lp_max_refinements, "L^p product-grid refinement");
  NormReport r;
  r.value = res.value;
  r.error_estimate = std::fabs(res.value - res.previous);
  r.refinement_steps = res.level;
  r.grid_meta = meta;
  return r;
}

}  // namespace

NormReport lp_norm(const Eigenfunction& e, double p, const GridPolicy& policy, SearchContext* ctx) {
  if (!(p > 0.0)) throw DomainError("lp_norm needs p > 0");
  if (std::isinf(p)) return finish(sup_norm(e, ctx), "lp", "p=inf");
  NormReport r;
  if (is_even_integer(p)) {
    r = lp_exact(e, p);
  } else if (e.family() == Family::zonal) {
    r = lp_zonal(e, p, policy);
  } else if (e.family() == Family::highest_weight) {
    r = lp_highest_weight(e, p, policy);
  } else {
    r = lp_generic(e, p, policy);
  }
  if (p < 1.0) r.grid_meta += ";quasi_norm=1";
  return finish(r, "lp", p_label(p));
}

NormReport restriction_norm(const Eigenfunction& e, const Geodesic& g, const GridPolicy& policy) {
  const auto res = detail::refine([&](int level) { return detail::restriction_integral(e, g, level); },
                                  policy.restriction_rtol, policy.max_doublings, "restriction integral");
  NormReport r;
  r.value = std::sqrt(res.value);
  r.error_estimate = std::fabs(r.value - std::sqrt(res.previous));
  r.refinement_steps = res.level;
  r.grid_meta = "route=gauss_panels;panels=" +
                std::to_string(detail::panels_for(g.length(), e.lambda()) << res.level);
  return finish(r, "restriction", "length=" + format_shortest(g.length()));
}

NormReport tube_mass(const Eigenfunction& e, const Tube& tube, const GridPolicy& policy) {
  const auto res = detail::refine([&](int level) { return detail::tube_integral(e, tube, level); }, policy.tube_rtol,
                                  policy.max_doublings, "tube mass");
  NormReport r;
  r.value = res.value;
  r.error_estimate = std::fabs(res.value - res.previous);
  r.refinement_steps = res.level;
  r.grid_meta = "route=fermi_coordinates;level=" + std::to_string(res.level);
  return finish(r, "tube_mass",
                "w=" + format_shortest(tube.half_width) + ";length=" + format_shortest(tube.geodesic.length()));
}

NormReport ball_mass(const Eigenfunction& e, const GeodesicBall& ball, const GridPolicy& policy) {
  const auto res = detail::refine([&](int level) { return detail::ball_integral(e, ball, level); }, policy.ball_rtol,
                                  policy.max_doublings, "ball mass");
  NormReport r;
  r.value = std::sqrt(res.value);
  r.error_estimate = std::fabs(r.value - std::sqrt(res.previous));
  r.refinement_steps = res.level;
  r.grid_meta = "route=polar;level=" + std::to_string(res.level);
  r.argmax = ball.center;
  return finish(r, "ball_mass", "r=" + format_shortest(ball.radius));
}

}  // namespace eigenlab
