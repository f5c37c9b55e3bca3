#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "eigenlab/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string("SOURCE_DATE_EPOCH=0 '") + EIGENLAB_CLI + "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

double field(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return std::stod(line.substr(key.size() + 1));
  }
  FAIL("missing field " << key);
  return NAN;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("eigenlab_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("eval") {
  const Run r = run("eval --family zonal --k 4 --point 0,0,1");
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(std::sqrt(9 / (4 * M_PI))).epsilon(1e-11));
  CHECK(run("eval --family highest-weight --k 1 --point 0,0,2").out == "0\n");
  CHECK(run("eval --family torus --N 3 --point 0,0").code == 2);
  CHECK(run("eval --family zonal --N 3 --point 0,0,1").code == 2);
  CHECK(run("eval --family zonal --k 3").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("norms") {
  const Run r = run("norms --family highest-weight --k 10 --p 2,inf");
  CHECK(r.code == 0);
  const eigenlab::SweepTable t = eigenlab::parse_csv(r.out);
  REQUIRE(t.size() == 2);
  CHECK(t[0].value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(run("norms --family zonal --k 10 --p 0.5").code == 2);
}

TEST_CASE("nodal") {
  const Run r = run("nodal --family highest-weight --k 20");
  CHECK(r.code == 0);
  CHECK(field(r.out, "length") == doctest::Approx(40 * M_PI).epsilon(0.01));
  CHECK(run("nodal --family highest-weight --k 20 --mesh-size 2").code == 2);
}

TEST_CASE("scar") {
  const Run w = run("scar --family highest-weight --k 50");
  CHECK(w.code == 0);
  CHECK(w.out.find("verdict: witness found") != std::string::npos);
  const Run z = run("scar --family zonal --k 100");
  CHECK(z.code == 0);
  CHECK(z.out.find("premise violated") != std::string::npos);
  CHECK(z.out.find("verdict: not applicable") != std::string::npos);
}

TEST_CASE("sweep, determinism and report") {
  const fs::path d = scratch("sweep");
  write(d / "min.ini", "[sweep.z]\nfamily = zonal\nk = 10, 20, 30, 40\np = inf\n");
  const Run a = run("sweep " + (d / "min.ini").string() + " --out " + (d / "a").string());
  CHECK(a.code == 0);
  CHECK(a.out.find("(reference 0.5) consistent") != std::string::npos);
  const Run b = run("--threads 2 sweep " + (d / "min.ini").string() + " --out " + (d / "b").string());
  CHECK(b.code == 0);
  for (const char* f : {"sweep.csv", "fits.json"}) {
    CHECK(eigenlab::read_file(d / "a" / f) == eigenlab::read_file(d / "b" / f));
  }
  const std::string manifest = eigenlab::read_file(d / "a" / "manifest.json");
  CHECK(manifest.find("1970-01-01T00:00:00Z") != std::string::npos);
  CHECK(manifest.find("config_hash") != std::string::npos);

  const Run rep = run("report --in " + (d / "a" / "sweep.csv").string() + " --out " + (d / "plots").string());
  CHECK(rep.code == 0);
  CHECK(fs::exists(d / "plots" / "lp_p_inf.svg"));

  write(d / "dep.ini", "[sweep.z]\nfamily = zonal\nk = 10, 20, 30, 40\np = inf\nfunctionals = kn\nchecks = kn_l4\n");
  CHECK(run("sweep " + (d / "dep.ini").string() + " --out " + (d / "c").string()).code == 2);
  CHECK(!fs::exists(d / "c" / "sweep.csv"));

  write(d / "empty.csv", "");
  CHECK(run("report --in " + (d / "empty.csv").string()).code == 2);
  write(d / "header.csv", eigenlab::csv_text({}));
  CHECK(run("report --in " + (d / "header.csv").string()).code == 2);
  fs::remove_all(d);
}
