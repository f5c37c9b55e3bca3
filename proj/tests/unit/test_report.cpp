#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "eigenlab/errors.hpp"
#include "eigenlab/format.hpp"
#include "eigenlab/report.hpp"
#include "eigenlab/svg.hpp"
#include "oracles.hpp"

using namespace eigenlab;

namespace {

SweepRow row(std::string fam, long long k, double value) {
  SweepRow r;
  r.sweep = "s";
  r.family = std::move(fam);
  r.k = k;
  r.lambda = std::sqrt(static_cast<double>(k * (k + 1)));
  r.functional = "lp";
  r.parameter = "p=inf";
  r.value = value;
  r.error_estimate = 1e-9;
  r.grid_meta = "rule=gauss;n=12";
  return r;
}

bool same(const SweepRow& a, const SweepRow& b) {
  const auto eq = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
  return a.sweep == b.sweep && a.family == b.family && a.k == b.k && eq(a.lambda, b.lambda) &&
         a.functional == b.functional && a.parameter == b.parameter && eq(a.value, b.value) &&
         eq(a.error_estimate, b.error_estimate) && a.grid_meta == b.grid_meta;
}

}  // namespace

TEST_CASE("shortest number formatting round-trips") {
  oracle::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(rng.normal(), static_cast<int>(rng.uniform(-300, 300)));
    CHECK(parse_double(format_shortest(v)) == v);
  }
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_shortest(INFINITY) == "inf");
  CHECK(format_shortest(-INFINITY) == "-inf");
  CHECK(format_shortest(NAN) == "nan");
  CHECK_THROWS_AS(parse_double("1.0x"), UsageError);
}

TEST_CASE("CSV round-trip") {
  SweepTable t{row("zonal", 10, 1.5), row("random_harmonic/seed=3", 20, 0.1)};
  t[0].grid_meta = "error=DomainError: \"quoted\", with comma\nand newline";
  t[0].value = NAN;
  t[1].value = INFINITY;
  t[1].parameter = "density=1;closed";
  const std::string text = csv_text(t);
  CHECK(text.rfind("family,k,lambda,functional,parameter,value,error_estimate,grid_meta,sweep\r\n", 0) == 0);
  const SweepTable back = parse_csv(text);
  REQUIRE(back.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(same(back[i], t[i]));
  CHECK(csv_text(back) == text);
}

TEST_CASE("CSV round-trip of random tables") {
  oracle::Rng rng(5);
  const std::string alphabet = "ab,\"\r\n ;=x";
  for (int trial = 0; trial < 30; ++trial) {
    SweepTable t;
    for (int i = 0; i < 8; ++i) {
      SweepRow r = row("f", i + 1, std::exp(10 * rng.normal()));
      for (int j = 0; j < 6; ++j) r.grid_meta += alphabet[static_cast<std::size_t>(rng.uniform(0, 10.999))];
      t.push_back(r);
    }
    const SweepTable back = parse_csv(csv_text(t));
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(same(back[i], t[i]));
  }
}

TEST_CASE("CSV errors") {
  CHECK_THROWS_AS(parse_csv(""), UsageError);
  CHECK_THROWS_AS(parse_csv("a,b\r\n"), UsageError);
  const std::string header = csv_text({});
  CHECK(parse_csv(header).empty());
  CHECK_THROWS_AS(parse_csv(header + "zonal,1\r\n"), UsageError);
}

TEST_CASE("fits.json and manifest") {
  std::vector<FitPoint> pts{{10, 3}, {20, 4.3}, {40, 6}, {80, 8.4}};
  const auto fit = make_fit("zonal", "lp", "p=inf", 0.5, pts);
  InequalityCheck ch;
  ch.name = "sup_vs_l1";
  ch.family = "zonal";
  ch.lambdas = {1, 2};
  ch.lhs = {1, 1};
  ch.rhs = {2, 2};
  ch.constant = 0.5;
  ch.holds = true;
  const std::string a = fits_json({fit}, {ch});
  CHECK(a == fits_json({fit}, {ch}));
  CHECK(a.find("\"verdict\": \"consistent\"") != std::string::npos);
  CHECK(a.find("\"reference\": 0.5") != std::string::npos);
  CHECK(a.back() == '\n');

  setenv("SOURCE_DATE_EPOCH", "86400", 1);
  CHECK(manifest_timestamp() == "1970-01-02T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
  RunManifest m{version(), std::string(64, 'a'), "1970-01-02T00:00:00Z", "eigenlab sweep x.ini", {"sweep.csv"}};
  const std::string mj = manifest_json(m);
  CHECK(mj.find(version()) != std::string::npos);
  CHECK(mj.find("sweep.csv") != std::string::npos);
}

TEST_CASE("atomic write leaves no temporary behind") {
  const auto dir = std::filesystem::temp_directory_path() / "eigenlab_report_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_atomic(dir / "out.txt", "first");
  write_atomic(dir / "out.txt", "second");
  CHECK(read_file(dir / "out.txt") == "second");
  int files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(write_atomic(dir / "missing" / "x.txt", "y"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("SVG plots") {
  std::vector<FitPoint> pts{{10, 3.1}, {20, 4.5}, {40, 6.2}, {80, 9.0}};
  PlotSeries s{"zonal", pts, fit_exponent(pts), 0.5};
  const std::string svg = svg_loglog("lp p=inf", {s});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("fit slope") != std::string::npos);
  CHECK(svg.find("reference slope 0.500") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);

  SweepTable t;
  for (long long k : {10, 20, 40, 80}) t.push_back(row("zonal", k, std::pow(k, 0.5)));
  t.push_back(row("zonal", 160, -1.0));
  const auto files = plot_table(t);
  REQUIRE(files.size() == 1);
  CHECK(files[0].name == "lp_p_inf.svg");
  CHECK(files[0].svg.find("reference slope 0.500") != std::string::npos);
}
