#include "doctest.h"

#include <cmath>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/errors.hpp"
#include "eigenlab/legendre.hpp"
#include "eigenlab/quadrature.hpp"
#include "oracles.hpp"

using namespace eigenlab;

namespace {

double l2_on_exact_grid(const Eigenfunction& e) {
  const QuadratureGrid g =
      e.manifold() == Manifold::sphere ? sphere_quadrature(2 * e.degree()) : torus_quadrature(2 * e.max_axis_frequency() + 2);
  std::vector<double> v = evaluate_batch(e, g);
  for (double& x : v) x *= x;
  return std::sqrt(g.integrate(v));
}

struct Rot {
  double m[3][3];
  Vec3 operator()(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z, m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
};

Rot random_rotation(oracle::Rng& rng) {
  double q[4];
  double n = 0;
  for (double& c : q) {
    c = rng.normal();
    n += c * c;
  }
  n = std::sqrt(n);
  const double a = q[0] / n, b = q[1] / n, c = q[2] / n, d = q[3] / n;
  return Rot{{{a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)},
              {2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)},
              {2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d}}};
}

Vec3 random_unit(oracle::Rng& rng) {
  Vec3 v;
  rng.sphere(v.x, v.y, v.z);
  return v;
}

// Laplace-Beltrami via the degree-0 homogeneous extension and a 7-point stencil.
double fd_laplacian_sphere(const Eigenfunction& e, const Vec3& x, double h) {
  auto F = [&](const Vec3& y) { return e.at_sphere(normalized(y)); };
  double s = -6.0 * F(x);
  for (const Vec3& d : {Vec3{h, 0, 0}, Vec3{0, h, 0}, Vec3{0, 0, h}}) s += F(x + d) + F(x - d);
  return s / (h * h);
}

}  // namespace

TEST_CASE("lambda_of_degree") {
  CHECK(lambda_of_degree(0) == 0.0);
  CHECK(lambda_of_degree(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(lambda_of_degree(3, 3) == doctest::Approx(std::sqrt(15.0)).epsilon(1e-15));
}

TEST_CASE("Legendre polynomials against the long double recurrence") {
  for (int k : {0, 1, 2, 7, 50, 300}) {
    for (double t : {-1.0, -0.73, 0.0, 0.2, 0.999, 1.0}) {
      CHECK(legendre_p(k, t) == doctest::Approx(static_cast<double>(oracle::legendre(k, t))).epsilon(1e-12));
    }
  }
  const auto roots = legendre_roots(12);
  const auto ref = oracle::legendre_roots(12);
  REQUIRE(roots.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(roots[i] == doctest::Approx(ref[i]).epsilon(1e-13));
}

TEST_CASE("normalized associated Legendre row integrates to one") {
  const int l = 40;
  const auto rule = gauss_legendre(60);
  std::vector<double> acc(l + 1, 0.0), row(l + 1);
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    alf_row(l, rule->nodes[i], row);
    for (int m = 0; m <= l; ++m) acc[m] += rule->weights[i] * row[m] * row[m];
  }
  for (int m = 0; m <= l; ++m) CHECK(acc[m] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zonal examples") {
  for (int k : {0, 1, 4, 17, 200}) {
    const Eigenfunction z = zonal(k);
    CHECK(z.at_sphere({0, 0, 1}) == doctest::Approx(std::sqrt((2 * k + 1) / (4 * kPi))).epsilon(1e-13));
  }
  const Eigenfunction z0 = zonal(0);
  CHECK(z0.at_sphere(normalized(Vec3{1, 2, 3})) == doctest::Approx(1 / std::sqrt(4 * kPi)).epsilon(1e-14));
  const double t = 1 / std::sqrt(3.0);
  CHECK(std::fabs(zonal(2).at_sphere({std::sqrt(1 - t * t), 0, t})) <= 1e-15);
}

TEST_CASE("highest weight examples") {
  CHECK(highest_weight(0).at_sphere(normalized(Vec3{1, -1, 2})) == doctest::Approx(1 / std::sqrt(4 * kPi)).epsilon(1e-14));
  const Vec3 x = normalized(Vec3{0.3, -0.4, 0.5});
  CHECK(highest_weight(1).at_sphere(x) == doctest::Approx(std::sqrt(3 / (4 * kPi)) * x.x).epsilon(1e-14));
  for (int k = 0; k <= 300; k += 7) {
    CHECK(highest_weight_constant(k) == doctest::Approx(oracle::highest_weight_constant(k)).epsilon(1e-12));
  }
  for (int k : {1, 5, 60}) CHECK(highest_weight(k).at_sphere({0, 0, 1}) == 0.0);
  // c_k k^{-1/4} settles
  const double r1 = highest_weight_constant(100) * std::pow(100, -0.25) / (highest_weight_constant(50) * std::pow(50, -0.25));
  const double r2 = highest_weight_constant(200) * std::pow(200, -0.25) / (highest_weight_constant(100) * std::pow(100, -0.25));
  CHECK(std::fabs(r1 - 1) <= 0.02);
  CHECK(std::fabs(r2 - 1) <= 0.02);
  // k = 200 at theta = pi/4, phi = 0.3: long double oracle
  const long double th = oracle::kPiL / 4, ph = 0.3L;
  const long double ref = static_cast<long double>(oracle::highest_weight_constant(200)) * std::pow(std::sin(th), 200.0L) *
                          std::cos(200.0L * ph);
  const double v = highest_weight(200).at_sphere(
      {static_cast<double>(std::sin(th) * std::cos(ph)), static_cast<double>(std::sin(th) * std::sin(ph)),
       static_cast<double>(std::cos(th))});
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(static_cast<double>(ref)).epsilon(1e-8));
}

TEST_CASE("random harmonics") {
  const double c = 1 / std::sqrt(4 * kPi);
  CHECK(std::fabs(std::fabs(random_harmonic(0, 42).at_sphere({1, 0, 0})) - c) <= 1e-14);
  const Eigenfunction a = random_harmonic(30, 7), b = random_harmonic(30, 7);
  oracle::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = random_unit(rng);
    CHECK(a.at_sphere(x) == b.at_sphere(x));
  }
  CHECK(l2_on_exact_grid(random_harmonic(10, 1)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(random_harmonic(30, 8).at_sphere({1, 0, 0}) != a.at_sphere({1, 0, 0}));
}

TEST_CASE("normalization across families") {
  for (int k : {1, 10, 50, 120, 200}) {
    CHECK(l2_on_exact_grid(zonal(k, SpherePoint::from_vector({0.2, 0.5, -0.7}))) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(l2_on_exact_grid(highest_weight(k)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(l2_on_exact_grid(random_harmonic(k, 3)) == doctest::Approx(1.0).epsilon(1e-8));
  }
  for (long long N : {1LL, 25LL, 65LL, 1105LL, 9425LL}) {
    CHECK(l2_on_exact_grid(torus_eigenfunction(N, 2)) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("batch evaluation equals pointwise evaluation") {
  for (const Eigenfunction& e : {zonal(25), highest_weight(25), random_harmonic(25, 4)}) {
    const QuadratureGrid g = sphere_quadrature(30);
    const auto batch = evaluate_batch(e, g);
    for (std::size_t i = 0; i < g.size(); i += 7) CHECK(batch[i] == doctest::Approx(e(g.node(i))).epsilon(1e-11).scale(1.0));
  }
  const Eigenfunction t = torus_eigenfunction(25, 1);
  const QuadratureGrid g = torus_quadrature(16);
  const auto batch = evaluate_batch(t, g);
  for (std::size_t i = 0; i < g.size(); i += 5) CHECK(batch[i] == doctest::Approx(t(g.node(i))).epsilon(1e-12).scale(1.0));
  CHECK_THROWS_AS(t(SpherePoint{}), UsageError);
  CHECK_THROWS_AS(zonal(3)(TorusPoint(0, 0)), UsageError);
}

TEST_CASE("addition theorem") {
  oracle::Rng rng(77);
  for (int k : {0, 1, 5, 30}) {
    const Vec3 pole = random_unit(rng);
    const Eigenfunction z = zonal(k, SpherePoint::from_vector(pole));
    const auto yp = real_harmonics(k, pole);
    for (int i = 0; i < 10; ++i) {
      const Vec3 x = random_unit(rng);
      const auto yx = real_harmonics(k, x);
      double s = 0.0;
      for (std::size_t m = 0; m < yx.size(); ++m) s += yx[m] * yp[m];
      CHECK(z.at_sphere(x) == doctest::Approx(std::sqrt(4 * kPi / (2 * k + 1)) * s).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("zonal rotation equivariance") {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Rot R = random_rotation(rng);
    const Vec3 pole = random_unit(rng), x = random_unit(rng);
    const int k = 1 + trial * 3;
    const double a = zonal(k, SpherePoint::from_vector(R(pole))).at_sphere(R(x));
    const double b = zonal(k, SpherePoint::from_vector(pole)).at_sphere(x);
    CHECK(std::fabs(a - b) <= 1e-10);
  }
}

TEST_CASE("eigen-equation residual decays like h^2") {
  oracle::Rng rng(13);
  for (const Eigenfunction& e : {zonal(6, SpherePoint::from_vector({0.1, 0.2, 0.9})), highest_weight(5), random_harmonic(7, 2)}) {
    const Vec3 x = random_unit(rng);
    const double l2 = e.lambda() * e.lambda();
    const double r1 = std::fabs(fd_laplacian_sphere(e, x, 2e-2) + l2 * e.at_sphere(x));
    const double r2 = std::fabs(fd_laplacian_sphere(e, x, 1e-2) + l2 * e.at_sphere(x));
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
  }
  const Eigenfunction t = torus_eigenfunction(25, 3);
  const double u = 0.7, v = 2.1;
  auto res = [&](double h) {
    const double lap = (t.at_torus(u + h, v) + t.at_torus(u - h, v) + t.at_torus(u, v + h) + t.at_torus(u, v - h) -
                        4 * t.at_torus(u, v)) /
                       (h * h);
    return std::fabs(lap + 25.0 * t.at_torus(u, v));
  };
  CHECK(res(2e-2) / res(1e-2) == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("lattice shells") {
  CHECK(lattice_shell(1).points.size() == 4);
  CHECK(lattice_shell(3).points.empty());
  CHECK(lattice_shell(25).points.size() == 12);
  for (long long N = 0; N <= 400; ++N) {
    CHECK(static_cast<long long>(lattice_shell(N).points.size()) == oracle::sum_of_two_squares_count(N));
  }
  for (long long N : {65LL, 325LL, 1105LL}) {
    const auto pts = lattice_shell(N).points;
    auto has = [&](int a, int b) {
      for (const auto& p : pts) {
        if (p[0] == a && p[1] == b) return true;
      }
      return false;
    };
    for (const auto& p : pts) {
      for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
          CHECK(has(sx * p[0], sy * p[1]));
          CHECK(has(sx * p[1], sy * p[0]));
        }
      }
    }
  }
}

TEST_CASE("torus eigenfunctions") {
  CHECK_THROWS_AS(torus_eigenfunction(3, 1), DomainError);
  const Eigenfunction c = torus_eigenfunction(0, 1);
  CHECK(std::fabs(c.at_torus(1, 2)) == doctest::Approx(1 / (2 * kPi)).epsilon(1e-14));
  const TorusMode mode{1, 0, 1.0, 0.0};
  const Eigenfunction e = torus_eigenfunction(1, std::span<const TorusMode>(&mode, 1));
  for (double u : {0.0, 0.4, 2.0}) {
    CHECK(e.at_torus(u, 1.3) == doctest::Approx(std::cos(u) / std::sqrt(2 * kPi * kPi)).epsilon(1e-12).scale(1.0));
  }
  CHECK(l2_on_exact_grid(e) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(torus_eigenfunction(65, 4).lambda() == doctest::Approx(std::sqrt(65.0)).epsilon(1e-15));
}
