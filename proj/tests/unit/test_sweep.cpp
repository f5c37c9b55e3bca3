#include "doctest.h"

#include <cmath>

#include "eigenlab/config.hpp"
#include "eigenlab/errors.hpp"
#include "eigenlab/parallel.hpp"
#include "eigenlab/report.hpp"
#include "eigenlab/sweep.hpp"

using namespace eigenlab;

namespace {

const char* kSmall = R"(
[policy]
lp_rtol = 1e-4

[sweep.z]
family = zonal
k = 10, 20, 30, 40
p = inf
)";

}  // namespace

TEST_CASE("radius specs") {
  const RadiusSpec a = RadiusSpec::parse("lambda^-0.75");
  CHECK(a.scaled);
  CHECK(a.at(16.0) == doctest::Approx(0.125));
  CHECK(a.to_string() == "lambda^-0.75");
  const RadiusSpec b = RadiusSpec::parse("0.1");
  CHECK(!b.scaled);
  CHECK(b.at(1000.0) == 0.1);
  CHECK_THROWS_AS(RadiusSpec::parse("-1"), UsageError);
  CHECK_THROWS_AS(RadiusSpec::parse("lambda^x"), UsageError);
}

TEST_CASE("two-cell normalization sweep") {
  SweepConfig c;
  SweepSpec s;
  s.name = "n";
  s.family = Family::random_harmonic;
  s.seeds = {1};
  s.degrees = {10, 20};
  s.p = {2.0};
  c.sweeps.push_back(s);
  const SweepTable t = run_sweep(c);
  REQUIRE(t.size() == 2);
  for (const auto& r : t) CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("minimal zonal sweep gives one fit with reference 1/2") {
  const SweepConfig c = parse_config(kSmall, ConfigFormat::ini);
  const SweepTable t = run_sweep(c);
  const auto fits = fit_table(c, t);
  REQUIRE(fits.size() == 1);
  CHECK(fits[0].reference == 0.5);
  CHECK(fits[0].verdict == Verdict::consistent);
  CHECK(fits[0].exponent == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("sweep output does not depend on the thread count") {
  SweepConfig c = parse_config(kSmall, ConfigFormat::ini);
  c.sweeps[0].p = {1.0, 4.0, INFINITY};
  c.sweeps[0].kn = true;
  set_thread_count(1);
  const std::string a = csv_text(run_sweep(c));
  set_thread_count(3);
  const std::string b = csv_text(run_sweep(c));
  set_thread_count(1);
  CHECK(a == b);
}

TEST_CASE("cell failures are embedded, not raised") {
  SweepConfig c;
  SweepSpec s;
  s.name = "t";
  s.family = Family::torus;
  s.seeds = {1};
  s.degrees = {2, 3, 5};
  s.p = {2.0};
  c.sweeps.push_back(s);
  const SweepTable t = run_sweep(c);
  REQUIRE(t.size() == 3);
  CHECK(t[0].value == doctest::Approx(1.0));
  CHECK(std::isnan(t[1].value));
  CHECK(t[1].grid_meta.find("error=DomainError") == 0);
  CHECK(t[1].grid_meta.find("empty lattice shell") != std::string::npos);
  CHECK(t[2].value == doctest::Approx(1.0));
}

TEST_CASE("dependency errors name what to add") {
  SweepConfig c = parse_config(kSmall, ConfigFormat::ini);
  c.sweeps[0].checks = {"kn_l4"};
  c.sweeps[0].kn = true;
  try {
    validate(c);
    FAIL("expected DependencyError");
  } catch (const DependencyError& e) {
    CHECK(std::string(e.what()).find("p=4") != std::string::npos);
    REQUIRE(e.missing().size() == 1);
    CHECK(e.missing()[0] == "p=4");
  }
  c.sweeps[0].checks = {"sup_decay"};
  CHECK_THROWS_AS(validate(c), UsageError);
  c.sweeps[0].checks = {"no_such_check"};
  CHECK_THROWS_AS(validate(c), UsageError);
}

TEST_CASE("validation rejects malformed sweeps") {
  SweepConfig c = parse_config(kSmall, ConfigFormat::ini);
  c.sweeps[0].degrees = {10, 10, 20};
  CHECK_THROWS_AS(validate(c), UsageError);
  c = parse_config(kSmall, ConfigFormat::ini);
  c.sweeps[0].p.clear();
  CHECK_THROWS_AS(validate(c), UsageError);
  c = parse_config(kSmall, ConfigFormat::ini);
  c.sweeps[0].p = {0.5};
  CHECK_THROWS_AS(validate(c), UsageError);
}

TEST_CASE("stable ratio rule") {
  CHECK(stable_ratio({1, 1, 1, 1}, {1, 1, 1, 1}));
  CHECK(stable_ratio({1, 1, 2, 2}, {1, 1, 1, 1}));
  CHECK(!stable_ratio({1, 1, 2.1, 1}, {1, 1, 1, 1}));
  CHECK(stable_ratio({1, 1, 50, 1.5, 1.5}, {1, 1, 1, 1, 1}));  // middle point skipped
  CHECK(!stable_ratio({1, NAN, 1, 1}, {1, 1, 1, 1}));
}

TEST_CASE("reference exponents") {
  CHECK(*reference_exponent(Family::zonal, "lp", "p=inf") == 0.5);
  CHECK(*reference_exponent(Family::zonal, "lp", "p=8") == doctest::Approx(0.25));
  CHECK(*reference_exponent(Family::zonal, "lp", "p=3") == 0.0);
  CHECK(!reference_exponent(Family::zonal, "lp", "p=4"));
  CHECK(*reference_exponent(Family::highest_weight, "lp", "p=1") == doctest::Approx(-0.25));
  CHECK(*reference_exponent(Family::highest_weight, "restriction_sup", "density=1") == 0.25);
  CHECK(*reference_exponent(Family::random_harmonic, "nodal_length", "h=auto") == 1.0);
  CHECK(*reference_exponent(Family::zonal, "sup_ball_mass", "r=lambda^-0.5") == doctest::Approx(-0.25));
  CHECK(!reference_exponent(Family::torus, "lp", "p=inf"));
}

TEST_CASE("checks on a small highest-weight sweep") {
  const char* ini = R"(
[sweep.q]
family = highest-weight
k = 20, 30, 40, 50
p = 1, 2, 4, 5, inf
functionals = kn, restriction, nodal
checks = bgt_restriction, bourgain_restriction, kn_l4, nodal_lower, cm_lower, hoelder_chain, l1_lower, hoelder_kn_lower
)";
  const SweepConfig c = parse_config(ini, ConfigFormat::ini);
  const SweepTable t = run_sweep(c);
  const auto checks = run_checks(c, t);
  CHECK(checks.size() >= 10);
  for (const auto& ch : checks) {
    INFO(ch.name << " " << ch.parameter << " " << ch.direction);
    CHECK(ch.holds);
    double cst = 0;
    for (std::size_t i = 0; i < ch.lhs.size(); ++i) cst = std::max(cst, ch.lhs[i] / ch.rhs[i]);
    if (ch.direction != "trend") CHECK(ch.constant == doctest::Approx(cst).epsilon(1e-15));
    for (double v : ch.lhs) CHECK(v >= 0.0);
    for (double v : ch.rhs) CHECK(v >= 0.0);
  }
}
