#include "doctest.h"

#include <cmath>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/errors.hpp"
#include "eigenlab/norms.hpp"
#include "oracles.hpp"

using namespace eigenlab;

namespace {

double zonal_lp_oracle(int k, double p) {
  const double c = std::sqrt((2 * k + 1) / (4 * kPi));
  const double I = oracle::simpson(
      [&](double t) { return std::pow(std::fabs(c * static_cast<double>(oracle::legendre(k, t))), p); }, -1.0, 1.0,
      400000);
  return std::pow(2 * kPi * I, 1 / p);
}

}  // namespace

TEST_CASE("L2 norm is one") {
  for (const Eigenfunction& e : {zonal(30), highest_weight(30), random_harmonic(30, 1), torus_eigenfunction(65, 1)}) {
    CHECK(lp_norm(e, 2).value == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("closed-form L^p values") {
  CHECK(lp_norm(highest_weight(1), 4).value == doctest::Approx(std::pow(9 / (20 * kPi), 0.25)).epsilon(1e-12));
  const Eigenfunction c = zonal(0);
  for (double p : {1.0, 3.0, 4.0, 7.5}) {
    CHECK(lp_norm(c, p).value == doctest::Approx(std::pow(4 * kPi, 1 / p - 0.5)).epsilon(1e-9));
  }
}

TEST_CASE("highest weight L^p against the Beta-function oracle") {
  for (int k : {5, 40, 150}) {
    for (double p : {1.0, 3.0, 4.0, 5.0, 6.0, 8.0}) {
      CHECK(lp_norm(highest_weight(k), p).value == doctest::Approx(oracle::highest_weight_lp(k, p)).epsilon(1e-6));
    }
  }
}

TEST_CASE("zonal L^p against the Simpson oracle") {
  for (double p : {1.0, 3.0, 4.0, 5.0}) {
    CHECK(lp_norm(zonal(20), p).value == doctest::Approx(zonal_lp_oracle(20, p)).epsilon(1e-6));
  }
}

TEST_CASE("sup norms") {
  for (int k : {3, 40, 120}) {
    CHECK(sup_norm(zonal(k, SpherePoint::from_vector({1, 1, 0}))).value ==
          doctest::Approx(std::sqrt((2 * k + 1) / (4 * kPi))).epsilon(1e-6));
    CHECK(sup_norm(highest_weight(k)).value == doctest::Approx(highest_weight_constant(k)).epsilon(1e-6));
  }
  CHECK(sup_norm(zonal(0)).value == doctest::Approx(1 / std::sqrt(4 * kPi)).epsilon(1e-12));
}

TEST_CASE("restriction norms") {
  for (int k : {4, 50, 200}) {
    const double v = restriction_norm(highest_weight(k), Geodesic::great_circle({0, 0, 1})).value;
    CHECK(v == doctest::Approx(highest_weight_constant(k) * std::sqrt(kPi)).epsilon(1e-6));
  }
  CHECK(restriction_norm(zonal(0), Geodesic::sphere({0, 1, 0}, 0.4)).value ==
        doctest::Approx(1 / std::sqrt(4 * kPi)).epsilon(1e-10));
  // meridian arc through the pole, s in [-1/2, 1/2] measured from the pole
  Vec3 e1, e2;
  great_circle_frame({0, 1, 0}, e1, e2);
  const double pole_phase = std::atan2(e2.z, e1.z);
  const Geodesic g = Geodesic::sphere({0, 1, 0}, pole_phase - 0.5, 1.0);
  const double c = std::sqrt(5 / (4 * kPi));
  const double ref = std::sqrt(oracle::simpson(
      [&](double s) {
        const double v = c * static_cast<double>(oracle::legendre(2, std::cos(s)));
        return v * v;
      },
      -0.5, 0.5, 20000));
  CHECK(restriction_norm(zonal(2), g).value == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("tube masses") {
  for (double w : {0.05, 0.4}) {
    const Tube t = Tube::make(Geodesic::great_circle(normalized(Vec3{1, 0, 1})), w);
    CHECK(tube_mass(zonal(0), t).value == doctest::Approx(std::sin(w)).epsilon(1e-6));
  }
  double prev = 0.0;
  for (double w : {0.02, 0.05, 0.1, 0.2, 0.4}) {
    const double m = tube_mass(highest_weight(50), Tube::make(Geodesic::sphere({0, 0, 1}, 0.0), w)).value;
    CHECK(m >= prev - 1e-6);
    CHECK(m <= 1.0 + 1e-9);
    prev = m;
  }
  for (int k : {25, 100}) {
    const double w = 1 / std::sqrt(lambda_of_degree(k));
    const double m = tube_mass(highest_weight(k), Tube::make(Geodesic::sphere({0, 0, 1}, 0.0), w)).value;
    CHECK(m > 0.12);
    CHECK(m < 0.2);
  }
}

TEST_CASE("ball masses") {
  for (double r : {0.05, 0.3, 1.2}) {
    const GeodesicBall b = GeodesicBall::make(SpherePoint::from_vector({0.3, 0.1, -1}), r);
    CHECK(ball_mass(zonal(0), b).value == doctest::Approx(std::sqrt((1 - std::cos(r)) / 2)).epsilon(1e-8));
  }
  double prev = 0.0;
  for (double r : {0.01, 0.03, 0.1, 0.3}) {
    const double m = ball_mass(random_harmonic(40, 2), GeodesicBall::make(SpherePoint::from_vector({0.5, 0.5, 0.5}), r)).value;
    CHECK(m >= prev - 1e-6);
    CHECK(m <= 1.0);
    prev = m;
  }
  // zonal maximizer sits at the pole
  for (double r : {1 / lambda_of_degree(40), 0.1, 0.5}) {
    const Eigenfunction z = zonal(40, SpherePoint::from_vector({0, 1, 1}));
    const NormReport s = sup_ball_mass(z, r);
    const double at_pole = ball_mass(z, GeodesicBall::make(z.pole(), r)).value;
    CHECK(s.value == doctest::Approx(at_pole).epsilon(1e-6));
    REQUIRE(s.argmax.has_value());
    CHECK(geodesic_distance(*s.argmax, z.pole()) < 0.5 / lambda_of_degree(40));
  }
}

TEST_CASE("Kakeya-Nikodym norm") {
  for (int k : {10, 50}) {
    const KNResult r = kn_norm(highest_weight(k));
    CHECK(r.value >= 0.1);
    CHECK(r.value <= 1 + 1e-3);
    CHECK(r.value >= r.coarse_value - 1e-12);
  }
  for (const Eigenfunction& e : {zonal(30), random_harmonic(30, 9)}) {
    const KNResult r = kn_norm(e);
    CHECK(r.value <= 1 + 1e-3);
    CHECK(r.value >= r.coarse_value - 1e-12);
  }
  KNOptions o;
  o.half_width = 0.2;
  const KNResult c = kn_norm(zonal(0), o);
  const double area = Tube::make(Geodesic::sphere({0, 0, 1}, 0.0), 0.2).area();
  CHECK(c.value == doctest::Approx(std::sqrt(area / (4 * kPi))).epsilon(1e-5));
  // density doubling moves the Q_k value by under 5%
  KNOptions dense;
  dense.density_factor = 0.5;
  const double a = kn_norm(highest_weight(40)).value, b = kn_norm(highest_weight(40), dense).value;
  CHECK(std::fabs(a - b) / b < 0.05);
}

TEST_CASE("Lp norms are log-convex in 1/p and sit below the sup") {
  for (const Eigenfunction& e : {zonal(30), highest_weight(30), random_harmonic(30, 5), torus_eigenfunction(65, 2)}) {
    SearchContext ctx(e);
    const std::vector<double> ps{2, 4, 6, 8, INFINITY};
    std::vector<double> x, y;
    for (double p : ps) {
      x.push_back(std::isinf(p) ? 0.0 : 1 / p);
      y.push_back(std::log(lp_norm(e, p, {}, &ctx).value));
    }
    // convexity: each interior value below the chord of its neighbours
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
      const double t = (x[i] - x[i + 1]) / (x[i - 1] - x[i + 1]);
      CHECK(y[i] <= t * y[i - 1] + (1 - t) * y[i + 1] + 1e-6);
    }
    const double sup = std::exp(y.back());
    const double area = manifold_area(e.manifold());
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) CHECK(sup >= std::exp(y[i]) * std::pow(area, -1 / ps[i]) * (1 - 1e-9));
  }
}

TEST_CASE("restriction sup") {
  const RestrictionSup r = restriction_sup(highest_weight(50));
  // the best unit arc on the equator carries at least the average of cos^2
  CHECK(r.value * r.value >= highest_weight_constant(50) * highest_weight_constant(50) * 0.5 * 0.95);
  CHECK(r.value <= highest_weight_constant(50) * 1.0001);
}
