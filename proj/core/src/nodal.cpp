#include "eigenlab/nodal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "eigenlab/errors.hpp"
#include "eigenlab/parallel.hpp"

namespace eigenlab {

namespace {

/// Upper bound of |e| used to size the zero-vertex nudge.
double sup_bound(const Eigenfunction& e) {
  if (e.manifold() == Manifold::sphere) return std::sqrt((2.0 * e.degree() + 1.0) / (4.0 * kPi));
  double s = 0.0;
  for (const auto& m : e.modes()) s += std::hypot(m.a, m.b);
  return s;
}

struct Icosahedron {
  std::array<Vec3, 12> v;
  std::array<std::array<int, 3>, 20> f;
};

const Icosahedron& icosahedron() {
  static const Icosahedron ico = [] {
    Icosahedron I;
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    const std::array<Vec3, 12> raw{Vec3{-1, g, 0}, Vec3{1, g, 0},  Vec3{-1, -g, 0}, Vec3{1, -g, 0},
                                   Vec3{0, -1, g}, Vec3{0, 1, g},  Vec3{0, -1, -g}, Vec3{0, 1, -g},
                                   Vec3{g, 0, -1}, Vec3{g, 0, 1},  Vec3{-g, 0, -1}, Vec3{-g, 0, 1}};
    for (std::size_t i = 0; i < raw.size(); ++i) I.v[i] = normalized(raw[i]);
    I.f = {{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
            {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
            {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}}};
    return I;
  }();
  return ico;
}

struct Tally {
  std::size_t crossings = 0;
  std::size_t nudged = 0;
};

/// Zero-set segment length inside one spherical triangle.
double sphere_triangle(const Vec3& p0, double v0, const Vec3& p1, double v1, const Vec3& p2, double v2, Tally& t) {
  const bool s0 = v0 > 0.0, s1 = v1 > 0.0, s2 = v2 > 0.0;
  if (s0 == s1 && s1 == s2) return 0.0;
  ++t.crossings;
  auto cut = [](const Vec3& a, double va, const Vec3& b, double vb) {
    const double w = va / (va - vb);
    return normalized(a + w * (b - a));
  };
  Vec3 q[2];
  int n = 0;
  if (s0 != s1) q[n++] = cut(p0, v0, p1, v1);
  if (s1 != s2) q[n++] = cut(p1, v1, p2, v2);
  if (s2 != s0 && n < 2) q[n++] = cut(p2, v2, p0, v0);
  return angle_between(q[0], q[1]);
}

double sphere_mesh_length(const Eigenfunction& e, int n, Tally& total) {
  const auto& ico = icosahedron();
  const double nudge = 1e-14 * sup_bound(e);
  std::array<double, 20> face_len{};
  std::array<Tally, 20> face_tally{};
  parallel_for(20, [&](std::size_t fi) {
    const Vec3 A = ico.v[ico.f[fi][0]], B = ico.v[ico.f[fi][1]], C = ico.v[ico.f[fi][2]];
    Tally& tally = face_tally[fi];
    auto row = [&](int i, std::vector<Vec3>& pts, std::vector<double>& vals) {
      const int m = n - i;
      pts.resize(static_cast<std::size_t>(m) + 1);
      vals.resize(static_cast<std::size_t>(m) + 1);
      for (int j = 0; j <= m; ++j) {
        const double a = static_cast<double>(n - i - j), b = i, c = j;
        pts[j] = normalized(a * A + b * B + c * C);
        double v = e.at_sphere(pts[j]);
        if (v == 0.0) {
          v = nudge;
          ++tally.nudged;
        }
        vals[j] = v;
      }
    };
    std::vector<Vec3> p_lo, p_hi;
    std::vector<double> v_lo, v_hi;
    std::vector<double> rows(static_cast<std::size_t>(n));
    row(0, p_lo, v_lo);
    for (int i = 0; i < n; ++i) {
      row(i + 1, p_hi, v_hi);
      double acc = 0.0;
      const int m = n - i;
      for (int j = 0; j < m; ++j) {
        acc += sphere_triangle(p_lo[j], v_lo[j], p_hi[j], v_hi[j], p_lo[j + 1], v_lo[j + 1], tally);
        if (j + 1 < m) {
          acc += sphere_triangle(p_hi[j], v_hi[j], p_hi[j + 1], v_hi[j + 1], p_lo[j + 1], v_lo[j + 1], tally);
        }
      }
      rows[static_cast<std::size_t>(i)] = acc;
      std::swap(p_lo, p_hi);
      std::swap(v_lo, v_hi);
    }
    face_len[fi] = pairwise_sum(rows);
  });
  for (const auto& t : face_tally) {
    total.crossings += t.crossings;
    total.nudged += t.nudged;
  }
  return pairwise_sum(face_len);
}

/// Zero-set segment length in a flat triangle given in local (u, v) coordinates.
double flat_triangle(const double* u, const double* v, const double* f, Tally& t) {
  const bool s0 = f[0] > 0.0, s1 = f[1] > 0.0, s2 = f[2] > 0.0;
  if (s0 == s1 && s1 == s2) return 0.0;
  ++t.crossings;
  double qu[2], qv[2];
  int n = 0;
  for (int a = 0; a < 3 && n < 2; ++a) {
    const int b = (a + 1) % 3;
    if ((f[a] > 0.0) == (f[b] > 0.0)) continue;
    const double w = f[a] / (f[a] - f[b]);
    qu[n] = u[a] + w * (u[b] - u[a]);
    qv[n] = v[a] + w * (v[b] - v[a]);
    ++n;
  }
  return std::hypot(qu[1] - qu[0], qv[1] - qv[0]);
}

double torus_mesh_length(const Eigenfunction& e, std::size_t M, Tally& total) {
  const double d = kTwoPi / static_cast<double>(M);
  const double nudge = 1e-14 * sup_bound(e);
  std::vector<double> vals(M * M);
  std::vector<std::size_t> row_nudged(M, 0);
  parallel_for(M, [&](std::size_t i) {
    for (std::size_t j = 0; j < M; ++j) {
      double v = e.at_torus(d * static_cast<double>(i), d * static_cast<double>(j));
      if (v == 0.0) {
        v = nudge;
        ++row_nudged[i];
      }
      vals[i * M + j] = v;
    }
  });
  std::vector<double> rows(M);
  std::vector<Tally> row_tally(M);
  parallel_for(M, [&](std::size_t i) {
    const std::size_t i1 = (i + 1) % M;
    double acc = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      const std::size_t j1 = (j + 1) % M;
      const double f00 = vals[i * M + j], f10 = vals[i1 * M + j], f11 = vals[i1 * M + j1], f01 = vals[i * M + j1];
      const double ua[3] = {0, d, d}, va[3] = {0, 0, d}, fa[3] = {f00, f10, f11};
      const double ub[3] = {0, d, 0}, vb[3] = {0, d, d}, fb[3] = {f00, f11, f01};
      acc += flat_triangle(ua, va, fa, row_tally[i]) + flat_triangle(ub, vb, fb, row_tally[i]);
    }
    rows[i] = acc;
  });
  for (std::size_t i = 0; i < M; ++i) {
    total.crossings += row_tally[i].crossings;
    total.nudged += row_nudged[i];
  }
  return pairwise_sum(rows);
}

double nodal_h_bound(const Eigenfunction& e) { return 0.5 / std::max(e.lambda(), 1.0); }

}  // namespace

int icosphere_frequency(double h) {
  if (!(h > 0.0)) throw DomainError("mesh size h must be positive");
  // Longest subdivided edge sits at a face centre: chord / (n * inradius).
  const auto& ico = icosahedron();
  const double chord = norm(ico.v[0] - ico.v[11]);
  const Vec3 c = (1.0 / 3.0) * (ico.v[0] + ico.v[11] + ico.v[5]);
  return std::max(1, static_cast<int>(std::ceil(chord / (norm(c) * h))));
}

NodalEstimate nodal_length_at(const Eigenfunction& e, double h) {
  if (!(h > 0.0)) throw DomainError("mesh size h must be positive");
  NodalEstimate out;
  out.h = h;
  Tally tally;
  const auto cap = static_cast<double>(runtime_limits().grid_cap);
  if (e.manifold() == Manifold::sphere) {
    const int n = icosphere_frequency(h);
    if (10.0 * n * static_cast<double>(n) > cap) throw ResourceError("nodal mesh exceeds the grid cap");
    out.length = sphere_mesh_length(e, n, tally);
  } else {
    const double m = std::ceil(std::sqrt(2.0) * kTwoPi / h);
    if (m * m > cap) throw ResourceError("nodal mesh exceeds the grid cap");
    out.length = torus_mesh_length(e, static_cast<std::size_t>(m), tally);
  }
  out.crossings = tally.crossings;
  out.nudged = tally.nudged;
  out.history.emplace_back(h, out.length);
  return out;
}

NodalEstimate nodal_length(const Eigenfunction& e, double h, const NodalOptions& opts) {
  const double bound = nodal_h_bound(e);
  if (h <= 0.0) h = bound;
  if (h > bound * (1.0 + 1e-12)) throw DomainError("nodal_length needs h <= 0.5 / max(lambda, 1)");
  NodalEstimate cur = nodal_length_at(e, h);
  std::vector<std::pair<double, double>> history = cur.history;
  for (int i = 1; i <= opts.max_halvings; ++i) {
    const double prev = cur.length;
    h *= 0.5;
    cur = nodal_length_at(e, h);
    history.emplace_back(h, cur.length);
    if (std::fabs(cur.length - prev) <= opts.rtol * cur.length || (cur.length == 0.0 && prev == 0.0)) {
      cur.history = std::move(history);
      return cur;
    }
    if (i == opts.max_halvings) {
      throw ConvergenceError("nodal length did not settle within " + std::to_string(opts.max_halvings) + " halvings",
                             prev, cur.length);
    }
  }
  // max_halvings == 0: a single mesh is accepted as is.
  cur.history = std::move(history);
  return cur;
}

namespace {

/// Region piece parametrized by (x, y) on a rectangle with area element
/// J'(x) dx dy.
struct Chart {
  double x0, x1, y0, y1;
  std::function<double(double, double)> abs_value;
  std::function<double(double)> antiderivative;
};

std::vector<Chart> band_charts(const Eigenfunction& e, const std::optional<Tube>& region) {
  std::vector<Chart> charts;
  auto neg_cos = [](double x) { return -std::cos(x); };
  if (!region) {
    if (e.manifold() == Manifold::sphere) {
      charts.push_back({0.0, kPi, 0.0, kTwoPi,
                        [&e](double th, double ph) {
                          const double s = std::sin(th);
                          return std::fabs(e.at_sphere({s * std::cos(ph), s * std::sin(ph), std::cos(th)}));
                        },
                        neg_cos});
    } else {
      charts.push_back({0.0, kTwoPi, 0.0, kTwoPi, [&e](double u, double v) { return std::fabs(e.at_torus(u, v)); },
                        [](double x) { return x; }});
    }
    return charts;
  }
  const Geodesic& g = region->geodesic;
  const double w = region->half_width;
  const double len = g.closed() ? kTwoPi : g.length();
  if (g.manifold() != e.manifold()) throw UsageError("tube and eigenfunction on different manifolds");
  if (g.manifold() == Manifold::sphere) {
    Vec3 e1, e2;
    g.frame(e1, e2);
    const Vec3 a = g.axis();
    const double phi0 = g.start_phase();
    charts.push_back({-w, w, 0.0, len,
                      [&e, e1, e2, a, phi0](double r, double s) {
                        const double ph = phi0 + s;
                        return std::fabs(
                            e.at_sphere(std::cos(r) * (std::cos(ph) * e1 + std::sin(ph) * e2) + std::sin(r) * a));
                      },
                      [](double x) { return std::sin(x); }});
    if (!g.closed()) {
      const double ph1 = phi0 + len;
      const Vec3 p0 = std::cos(phi0) * e1 + std::sin(phi0) * e2;
      const Vec3 t0 = std::sin(phi0) * e1 - std::cos(phi0) * e2;
      const Vec3 p1 = std::cos(ph1) * e1 + std::sin(ph1) * e2;
      const Vec3 t1 = -std::sin(ph1) * e1 + std::cos(ph1) * e2;
      for (const auto& [p, t] : {std::pair{p0, t0}, std::pair{p1, t1}}) {
        charts.push_back({0.0, w, -kPi / 2, kPi / 2,
                          [&e, p, t, a](double rho, double al) {
                            return std::fabs(e.at_sphere(std::cos(rho) * p +
                                                         std::sin(rho) * (std::cos(al) * t + std::sin(al) * a)));
                          },
                          neg_cos});
      }
    }
    return charts;
  }
  const double du = g.dir_u(), dv = g.dir_v(), bu = g.base().u, bv = g.base().v;
  charts.push_back({-w, w, 0.0, len,
                    [&e, du, dv, bu, bv](double r, double s) {
                      return std::fabs(e.at_torus(bu + s * du - r * dv, bv + s * dv + r * du));
                    },
                    [](double x) { return x; }});
  if (!g.closed()) {
    // Outward direction o and side direction o rotated by +90 degrees.
    const std::array<std::array<double, 4>, 2> caps{
        {{bu, bv, -du, -dv}, {bu + len * du, bv + len * dv, du, dv}}};
    for (const auto& c : caps) {
      const double pu = c[0], pv = c[1], ou = c[2], ov = c[3];
      charts.push_back({0.0, w, -kPi / 2, kPi / 2,
                        [&e, pu, pv, ou, ov](double rho, double al) {
                          const double cu = std::cos(al) * ou - std::sin(al) * ov;
                          const double cv = std::cos(al) * ov + std::sin(al) * ou;
                          return std::fabs(e.at_torus(pu + rho * cu, pv + rho * cv));
                        },
                        [](double x) { return 0.5 * x * x; }});
    }
  }
  return charts;
}

struct BandPass {
  double volume = 0.0;
  std::size_t split = 0;
};

BandPass band_pass(const std::vector<Chart>& charts, double a, double b, double cell) {
  auto inside = [a, b](double v) { return v >= a && v <= b; };
  BandPass out;
  std::vector<double> parts;
  for (const Chart& c : charts) {
    const auto nx = static_cast<std::size_t>(std::max(1.0, std::ceil((c.x1 - c.x0) / cell)));
    const auto ny = static_cast<std::size_t>(std::max(1.0, std::ceil((c.y1 - c.y0) / cell)));
    if (static_cast<double>(nx + 1) * static_cast<double>(ny + 1) > static_cast<double>(runtime_limits().grid_cap)) {
      throw ResourceError("level band grid exceeds the grid cap");
    }
    const double dx = (c.x1 - c.x0) / static_cast<double>(nx), dy = (c.y1 - c.y0) / static_cast<double>(ny);
    std::vector<char> flag((nx + 1) * (ny + 1));
    parallel_for(nx + 1, [&](std::size_t i) {
      const double x = c.x0 + dx * static_cast<double>(i);
      for (std::size_t j = 0; j <= ny; ++j) flag[i * (ny + 1) + j] = inside(c.abs_value(x, c.y0 + dy * static_cast<double>(j)));
    });
    std::vector<double> rows(nx);
    std::vector<std::size_t> row_split(nx, 0);
    parallel_for(nx, [&](std::size_t i) {
      const double x = c.x0 + dx * static_cast<double>(i);
      const double strip = c.antiderivative(x + dx) - c.antiderivative(x);
      std::array<double, 4> sub_strip{};
      for (int q = 0; q < 4; ++q) sub_strip[q] = c.antiderivative(x + dx * (q + 1) / 4.0) - c.antiderivative(x + dx * q / 4.0);
      double acc = 0.0;
      for (std::size_t j = 0; j < ny; ++j) {
        const int count = flag[i * (ny + 1) + j] + flag[(i + 1) * (ny + 1) + j] + flag[i * (ny + 1) + j + 1] +
                          flag[(i + 1) * (ny + 1) + j + 1];
        if (count == 4) {
          acc += strip * dy;
        } else if (count > 0) {
          ++row_split[i];
          const double y = c.y0 + dy * static_cast<double>(j);
          double sub = 0.0;
          for (int q = 0; q < 4; ++q) {
            for (int r = 0; r < 4; ++r) {
              if (inside(c.abs_value(x + dx * (q + 0.5) / 4.0, y + dy * (r + 0.5) / 4.0))) sub += sub_strip[q];
            }
          }
          acc += sub * dy / 4.0;
        }
      }
      rows[i] = acc;
    });
    parts.push_back(pairwise_sum(rows));
    for (auto s : row_split) out.split += s;
  }
  out.volume = pairwise_sum(parts);
  return out;
}

}  // namespace

LevelBandMeasure level_band_volume(const Eigenfunction& e, const std::optional<Tube>& region, double a, double b,
                                   const BandOptions& opts) {
  if (!(a >= 0.0) || !(b >= a)) throw DomainError("level band needs 0 <= a <= b");
  LevelBandMeasure out;
  out.a = a;
  out.b = b;
  if (region) {
    const auto& g = region->geodesic;
    out.region = "tube(length=" + std::to_string(g.closed() ? kTwoPi : g.length()) +
                 ",half_width=" + std::to_string(region->half_width) + ")";
    out.region_volume = region->area();
  } else {
    out.region = "manifold";
    out.region_volume = manifold_area(e.manifold());
  }
  const auto charts = band_charts(e, region);
  double cell = opts.cell > 0.0 ? opts.cell : 0.5 / std::max(e.lambda(), 1.0);
  BandPass cur = band_pass(charts, a, b, cell);
  out.history.emplace_back(cell, cur.volume);
  for (int i = 1; i <= opts.max_halvings; ++i) {
    const double prev = cur.volume;
    cell *= 0.5;
    cur = band_pass(charts, a, b, cell);
    out.history.emplace_back(cell, cur.volume);
    if (std::fabs(cur.volume - prev) <= opts.rtol * cur.volume || (cur.volume == 0.0 && prev == 0.0)) break;
    if (i == opts.max_halvings) {
      throw ConvergenceError("level band volume did not settle within " + std::to_string(opts.max_halvings) +
                                 " halvings",
                             prev, cur.volume);
    }
  }
  out.volume = std::min(cur.volume, out.region_volume);
  out.cell = cell;
  out.split_cells = cur.split;
  return out;
}

}  // namespace eigenlab
