#include "doctest.h"

#include <cmath>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/errors.hpp"
#include "eigenlab/nodal.hpp"
#include "oracles.hpp"

using namespace eigenlab;

TEST_CASE("nodal length oracles") {
  for (int k : {1, 5, 12}) {
    CHECK(nodal_length(highest_weight(k)).length == doctest::Approx(2 * kPi * k).epsilon(0.01));
  }
  CHECK(oracle::zonal_nodal_length(2) == doctest::Approx(2 * 2 * kPi * std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  for (int k : {2, 5, 10}) {
    const Eigenfunction z = zonal(k, SpherePoint::from_vector({0.3, -0.5, 0.8}));
    CHECK(nodal_length(z).length == doctest::Approx(oracle::zonal_nodal_length(k)).epsilon(0.01));
  }
  const NodalEstimate c = nodal_length(zonal(0));
  CHECK(c.length == 0.0);
  CHECK(c.crossings == 0);
}

TEST_CASE("nodal refinement history") {
  const NodalEstimate n = nodal_length(random_harmonic(15, 4));
  REQUIRE(n.history.size() >= 2);
  const auto& h = n.history;
  CHECK(std::fabs(h.back().second - h[h.size() - 2].second) <= 0.01 * h.back().second);
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i].first == doctest::Approx(h[i - 1].first / 2));
  for (std::size_t i = 2; i < h.size(); ++i) {
    CHECK(std::fabs(h[i].second - h[i - 1].second) <= std::fabs(h[i - 1].second - h[i - 2].second) + 1e-9);
  }
}

TEST_CASE("nodal mesh size contract") {
  const Eigenfunction e = highest_weight(10);
  CHECK_THROWS_AS(nodal_length(e, 1.0), DomainError);
  CHECK(icosphere_frequency(0.01) > icosphere_frequency(0.02));
  NodalOptions strict;
  strict.rtol = 1e-9;
  strict.max_halvings = 1;
  CHECK_THROWS_AS(nodal_length(random_harmonic(12, 1), 0.0, strict), ConvergenceError);
}

TEST_CASE("torus nodal length of cos(u)") {
  const TorusMode mode{1, 0, 1.0, 0.0};
  const Eigenfunction e = torus_eigenfunction(1, std::span<const TorusMode>(&mode, 1));
  // zeros at u = pi/2 and 3pi/2: two loops of length 2pi
  CHECK(nodal_length(e).length == doctest::Approx(4 * kPi).epsilon(1e-6));
}

TEST_CASE("random harmonics meet the Yau-scale lower bound") {
  for (int k : {10, 40}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Eigenfunction e = random_harmonic(k, seed);
      const double L = nodal_length(e).length;
      CHECK(L >= 0.5 * e.lambda());
      CHECK(L >= std::sqrt(e.lambda()));
    }
  }
}

TEST_CASE("level band volume") {
  const Eigenfunction q = highest_weight(20);
  CHECK(level_band_volume(q, std::nullopt, 0.0, INFINITY).volume == doctest::Approx(4 * kPi).epsilon(1e-12));
  const Eigenfunction c = zonal(0);
  const double v = 1 / std::sqrt(4 * kPi);
  CHECK(level_band_volume(c, std::nullopt, 0.5 * v, 2 * v).volume == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(level_band_volume(c, std::nullopt, 2 * v, 3 * v).volume == 0.0);
  CHECK_THROWS_AS(level_band_volume(q, std::nullopt, 0.3, 0.1), DomainError);

  // additivity of adjacent bands
  const double ck = highest_weight_constant(20);
  const double ab = level_band_volume(q, std::nullopt, 0.1 * ck, 0.4 * ck).volume;
  const double bc = level_band_volume(q, std::nullopt, 0.4 * ck, 0.9 * ck).volume;
  const double ac = level_band_volume(q, std::nullopt, 0.1 * ck, 0.9 * ck).volume;
  CHECK(std::fabs(ab + bc - ac) <= 2 * 0.02 * ac);
}

TEST_CASE("level band in the equatorial tube against dense sampling") {
  const int k = 50;
  const Eigenfunction q = highest_weight(k);
  const double lam = q.lambda(), w = 1 / std::sqrt(lam), ck = highest_weight_constant(k);
  const Tube tube = Tube::make(Geodesic::sphere({0, 0, 1}, 0.0), w);
  const LevelBandMeasure m = level_band_volume(q, tube, 0.1 * ck, ck);
  // Dense oracle: the tube is phi in [0, 1] on the equator (length-1 arc) with
  // half-disk caps; integrate the indicator over (phi, latitude) with area element cos(lat).
  Vec3 e1, e2;
  great_circle_frame({0, 0, 1}, e1, e2);
  long double acc = 0.0L;
  const int n = 1500;
  const double dlat = 2 * w / n;
  for (int i = 0; i < n; ++i) {
    const double lat = -w + (i + 0.5) * dlat;
    for (int j = 0; j < 4 * n; ++j) {
      const double s = -w + (j + 0.5) * (1 + 2 * w) / (4 * n);
      const double ang = std::atan2(e1.y, e1.x) + s;
      const Vec3 x{std::cos(lat) * std::cos(ang), std::cos(lat) * std::sin(ang), std::sin(lat)};
      if (!tube.contains(SpherePoint::from_vector(x))) continue;
      const double a = std::fabs(q.at_sphere(x));
      if (a >= 0.1 * ck && a <= ck) acc += std::cos(lat) * dlat * (1 + 2 * w) / (4 * n);
    }
  }
  CHECK(m.volume == doctest::Approx(static_cast<double>(acc)).epsilon(0.03));
  CHECK(m.volume * std::sqrt(lam) > 0.5);
}
