#include "doctest.h"

#include <cmath>

#include "eigenlab/config.hpp"
#include "eigenlab/errors.hpp"

using namespace eigenlab;

namespace {

const char* kIni = R"(# random sweep with policy overrides
[policy]
lp_rtol = 1e-5
max_doublings = 6

[sweep.b]
family = random-harmonic
k = 10..12
seeds = 3, 4
p = 1, 2, 4, inf   ; trailing comment
radii = lambda^-0.5, 0.1
functionals = kn
checks = kn_l4, hoelder_chain
)";

const char* kJson = R"({
  "sweeps": {
    "a": {"family": "zonal", "k": [20, 40, 60, 80], "p": [1, "inf"], "checks": ["sup_vs_l1", "l1_lower"]},
    "b": {"family": "highest-weight", "degrees": [5], "p": [4]}
  },
  "policy": {"lp_rtol": 0.001}
})";

}  // namespace

TEST_CASE("INI parsing") {
  CHECK_THROWS_AS(parse_config(std::string(kIni) + "p = 4\n", ConfigFormat::ini), UsageError);  // duplicate key

  const SweepConfig c = parse_config(kIni, ConfigFormat::ini);
  REQUIRE(c.sweeps.size() == 1);
  const SweepSpec& s = c.sweeps[0];
  CHECK(s.name == "b");
  CHECK(s.family == Family::random_harmonic);
  CHECK(s.degrees == std::vector<long long>{10, 11, 12});
  CHECK(s.seeds == std::vector<std::uint64_t>{3, 4});
  REQUIRE(s.p.size() == 4);
  CHECK(std::isinf(s.p[3]));
  CHECK(s.radii.size() == 2);
  CHECK(s.kn);
  CHECK(!s.nodal);
  CHECK(c.policy.lp_rtol == 1e-5);
}

TEST_CASE("INI and JSON forms of one config hash equal") {
  const char* ini = R"(
[sweep.a]
family = zonal
k = 20, 40, 60, 80
p = 1, inf
checks = sup_vs_l1, l1_lower

[sweep.b]
family = highest-weight
k = 5
p = 4

[policy]
lp_rtol = 0.001
)";
  const SweepConfig a = parse_config(ini, ConfigFormat::ini);
  const SweepConfig b = parse_config(kJson, ConfigFormat::json);
  CHECK(canonical_config(a) == canonical_config(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 64);
}

TEST_CASE("hash ignores section and key order but not values") {
  const char* one = "[sweep.x]\nfamily = zonal\nk = 10\np = 2\n\n[sweep.y]\nfamily = zonal\nk = 12\np = 2\n";
  const char* two = "[sweep.y]\np = 2\nk = 12\nfamily = zonal\n\n[sweep.x]\nk = 10\nfamily = zonal\np = 2\n";
  const char* three = "[sweep.x]\nfamily = zonal\nk = 10\np = 2\n\n[sweep.y]\nfamily = zonal\nk = 14\np = 2\n";
  const auto h = [](const char* t) { return config_hash(parse_config(t, ConfigFormat::ini)); };
  CHECK(h(one) == h(two));
  CHECK(h(one) != h(three));
  // explicit defaults hash like omitted ones
  CHECK(h(one) == h("[policy]\nlp_rtol = 1e-6\n[sweep.x]\nfamily = zonal\nk = 10\np = 2\n"
                    "density_factor = 1\n[sweep.y]\nfamily = zonal\nk = 12\np = 2\n"));
}

TEST_CASE("SHA-256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config errors") {
  const auto bad = [](const char* t) { CHECK_THROWS_AS(parse_config(t, ConfigFormat::ini), UsageError); };
  bad("[sweep.x]\nfamily = zonal\nk = 10\np = 2\ncolour = red\n");
  bad("[sweep.x]\nfamily = zonal\nk = 10\nN = 10\np = 2\n");
  bad("[sweep.x]\nfamily = cube\nk = 10\np = 2\n");
  bad("[sweep.x]\nfamily = zonal\nk = 10\np = 0.5\n");
  bad("[sweep.x]\nfamily = zonal\nk = 10\np = 2\nseeds = 1\n");
  bad("k = 10\n");
  bad("[other]\nk = 10\n");
  bad("[sweep.x]\nfamily = zonal\nk = 10\np = 2\n[sweep.x]\nfamily = zonal\nk = 11\np = 2\n");
  bad("[sweep.x]\nfamily = zonal\nk = 12..10\np = 2\n");
  CHECK_THROWS_AS(parse_config("{\"sweeps\": [", ConfigFormat::json), UsageError);
  try {
    parse_config("[sweep.x]\nfamily = zonal\n\nk = 10\nk = 11\n", ConfigFormat::ini);
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
  try {
    parse_config("[sweep.x]\nfamily = zonal\nk = 10\np = 2\nwhat = 1\n", ConfigFormat::ini);
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("what") != std::string::npos);
  }
}

TEST_CASE("random sweeps default to the run seed") {
  const SweepConfig c = parse_config("[sweep.r]\nfamily = random-harmonic\nk = 10\np = 2\n", ConfigFormat::ini, 42);
  CHECK(c.sweeps[0].seeds == std::vector<std::uint64_t>{42});
}
