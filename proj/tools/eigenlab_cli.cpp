// eigenlab command-line front end.
//
// Exit codes: 0 success, 1 other failure, 2 usage/config/dependency/domain
// error, 3 a check or fit failed (data still written), 4 resource cap hit.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "eigenlab/config.hpp"
#include "eigenlab/errors.hpp"
#include "eigenlab/format.hpp"
#include "eigenlab/nodal.hpp"
#include "eigenlab/parallel.hpp"
#include "eigenlab/report.hpp"
#include "eigenlab/scar.hpp"
#include "eigenlab/svg.hpp"
#include "eigenlab/sweep.hpp"

namespace fs = std::filesystem;
using namespace eigenlab;

namespace {

struct Globals {
  unsigned threads = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t grid_cap = 0;
  std::string command_line;
};

struct Target {
  std::string family;
  std::optional<long long> k;
  std::optional<long long> N;
};

void add_target(CLI::App* cmd, Target& t) {
  cmd->add_option("--family", t.family, "zonal, highest-weight, random-harmonic or torus")->required();
  cmd->add_option("--k", t.k, "spherical harmonic degree");
  cmd->add_option("--N", t.N, "torus shell, lambda^2 = N");
}

long long degree_of(const Target& t) {
  const bool torus = parse_family(t.family) == Family::torus;
  if (t.k && t.N) throw UsageError("give either --k or --N, not both");
  if (torus && t.N) return *t.N;
  if (!torus && t.N) throw UsageError("--N applies to the torus family; use --k");
  if (!t.k) throw UsageError(torus ? "--N is required" : "--k is required");
  return *t.k;
}

Eigenfunction make_target(const Target& t, std::uint64_t seed) {
  const long long k = degree_of(t);
  switch (parse_family(t.family)) {
    case Family::zonal:
      return zonal(static_cast<int>(k));
    case Family::highest_weight:
      return highest_weight(static_cast<int>(k));
    case Family::random_harmonic:
      return random_harmonic(static_cast<int>(k), seed);
    case Family::torus:
      break;
  }
  return torus_eigenfunction(k, seed);
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_double(item));
  return v;
}

void write_output(const Globals& g, const std::string& name, const std::string& content) {
  if (g.out.empty()) return;
  fs::create_directories(g.out);
  write_atomic(fs::path(g.out) / name, content);
}

int exit_code_for(const std::exception& ex) {
  if (dynamic_cast<const ResourceError*>(&ex)) return 4;
  if (dynamic_cast<const UsageError*>(&ex) || dynamic_cast<const DependencyError*>(&ex) ||
      dynamic_cast<const DomainError*>(&ex)) {
    return 2;
  }
  return 1;
}

// Exit code for a table with embedded cell errors.
int table_status(const SweepTable& table) {
  int rc = 0;
  for (const auto& r : table) {
    if (r.grid_meta.rfind("error=ResourceError", 0) == 0) return 4;
    if (r.grid_meta.rfind("error=", 0) == 0) {
      std::cerr << "cell " << r.family << " k=" << r.k << " " << r.functional << " " << r.parameter << ": "
                << r.grid_meta.substr(6) << "\n";
      rc = 1;
    }
  }
  return rc;
}

int cmd_eval(const Globals& g, const Target& t, const std::string& point) {
  const Eigenfunction e = make_target(t, g.seed);
  const auto c = parse_point(point);
  double v = 0.0;
  if (e.manifold() == Manifold::sphere) {
    if (c.size() != 3) throw UsageError("sphere points take three coordinates x,y,z");
    const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    if (!(n > 0.0)) throw UsageError("point must be nonzero");
    v = e.at_sphere({c[0] / n, c[1] / n, c[2] / n});
  } else {
    if (c.size() != 2) throw UsageError("torus points take two coordinates u,v");
    v = e.at_torus(c[0], c[1]);
  }
  std::printf("%.12g\n", v);
  return 0;
}

struct NormsArgs {
  std::vector<std::string> p;
  std::vector<std::string> radii;
  bool kn = false;
  bool restriction = false;
  bool closed_only = false;
  double density_factor = 1.0;
  double lp_rtol = GridPolicy{}.lp_rtol;
};

int cmd_norms(const Globals& g, const Target& t, const NormsArgs& a) {
  SweepConfig c;
  c.policy.lp_rtol = a.lp_rtol;
  SweepSpec s;
  s.name = "norms";
  s.family = parse_family(t.family);
  s.degrees = {degree_of(t)};
  s.seeds = {g.seed};
  for (const auto& p : a.p) s.p.push_back(parse_double(p));
  for (const auto& r : a.radii) s.radii.push_back(RadiusSpec::parse(r));
  s.kn = a.kn;
  s.restriction = a.restriction;
  s.closed_only = a.closed_only;
  s.density_factor = a.density_factor;
  if (s.family == Family::torus) make_target(t, g.seed);  // surfaces an empty shell as a usage-level error
  c.sweeps.push_back(s);
  const SweepTable table = run_sweep(c);
  const std::string csv = csv_text(table);
  std::cout << csv;
  write_output(g, "norms.csv", csv);
  return table_status(table);
}

int cmd_sweep(const Globals& g, const std::string& config_path) {
  const SweepConfig config = load_config(config_path, g.seed);
  const std::string out = g.out.empty() ? "." : g.out;
  const SweepTable table = run_sweep(config);
  const auto fits = fit_table(config, table);
  const auto checks = run_checks(config, table);
  fs::create_directories(out);
  write_atomic(fs::path(out) / "sweep.csv", csv_text(table));
  write_atomic(fs::path(out) / "fits.json", fits_json(fits, checks));
  RunManifest m;
  m.tool_version = version();
  m.config_hash = config_hash(config);
  m.timestamp = manifest_timestamp();
  m.command = g.command_line;
  m.outputs = {"sweep.csv", "fits.json"};
  write_atomic(fs::path(out) / "manifest.json", manifest_json(m));

  bool failed = false;
  for (const auto& f : fits) {
    std::cout << "fit   " << f.family << " " << f.functional << " " << f.parameter << ": exponent "
              << format_shortest(f.exponent) << " (reference " << format_shortest(f.reference) << ") "
              << to_string(f.verdict) << "\n";
    failed |= f.verdict == Verdict::inconsistent;
  }
  for (const auto& c : checks) {
    std::cout << "check " << c.name << " " << c.family << " " << c.parameter << " [" << c.direction
              << "]: constant " << format_shortest(c.constant) << (c.holds ? " holds" : " FAILS") << "\n";
    failed |= !c.holds;
  }
  const int cells = table_status(table);
  if (cells == 4) return 4;
  return failed ? 3 : cells;
}

int cmd_nodal(const Globals& g, const Target& t, double h, double rtol) {
  const Eigenfunction e = make_target(t, g.seed);
  NodalOptions o;
  o.rtol = rtol;
  const NodalEstimate n = nodal_length(e, h, o);
  std::ostringstream s;
  s << "length " << format_shortest(n.length) << "\n"
    << "lambda " << format_shortest(e.lambda()) << "\n"
    << "h " << format_shortest(n.h) << "\n"
    << "crossings " << n.crossings << "\n"
    << "nudged " << n.nudged << "\n";
  for (const auto& [hh, len] : n.history) s << "history " << format_shortest(hh) << " " << format_shortest(len) << "\n";
  std::cout << s.str();
  write_output(g, "nodal.txt", s.str());
  return 0;
}

int cmd_scar(const Globals& g, const Target& t, ScarOptions o) {
  const Eigenfunction e = make_target(t, g.seed);
  const ScarWitness w = scar_witness(e, o);
  std::ostringstream s;
  s << "lambda " << format_shortest(w.lambda) << "\n"
    << "l1 " << format_shortest(w.l1) << "\n"
    << "l1_bound " << format_shortest(w.l1_bound) << "\n"
    << "premise " << (w.premise_holds ? "holds" : "violated") << "\n";
  if (w.premise_holds) {
    const Geodesic& gd = w.tube_geodesic;
    s << "c3 " << format_shortest(w.c3) << "\n";
    if (gd.manifold() == Manifold::sphere) {
      s << "tube axis " << format_shortest(gd.axis().x) << "," << format_shortest(gd.axis().y) << ","
        << format_shortest(gd.axis().z) << " phase " << format_shortest(gd.start_phase());
    } else {
      s << "tube base " << format_shortest(gd.base().u) << "," << format_shortest(gd.base().v) << " direction "
        << format_shortest(gd.dir_u()) << "," << format_shortest(gd.dir_v());
    }
    s << " length " << format_shortest(gd.length()) << " half_width " << format_shortest(w.half_width) << "\n"
      << "tube_mass " << format_shortest(w.tube_mass) << "\n"
      << "c1 " << format_shortest(w.c1) << "\n"
      << "C0 " << format_shortest(w.C0) << "\n"
      << "c2 " << format_shortest(w.c2) << "\n"
      << "band " << format_shortest(w.band_low) << " " << format_shortest(w.band_high) << "\n"
      << "band_volume " << format_shortest(w.band_volume) << "\n"
      << "band_volume_scaled " << format_shortest(w.band_volume * std::sqrt(w.lambda)) << "\n"
      << "delta " << format_shortest(w.delta) << "\n";
  }
  std::string verdict = to_string(w.verdict);
  std::replace(verdict.begin(), verdict.end(), '_', ' ');
  s << "verdict: " << verdict << "\n";
  std::cout << s.str();
  write_output(g, "scar.txt", s.str());
  return w.verdict == ScarVerdict::no_witness ? 3 : 0;
}

int cmd_report(const Globals& g, const std::string& in) {
  const SweepTable table = parse_csv(read_file(in));
  if (table.empty()) throw UsageError("'" + in + "' has no rows to plot");
  const auto plots = plot_table(table);
  if (plots.empty()) throw UsageError("'" + in + "' has no positive finite values to plot");
  const fs::path out = g.out.empty() ? fs::path("plots") : fs::path(g.out);
  fs::create_directories(out);
  for (const auto& p : plots) {
    write_atomic(out / p.name, p.svg);
    std::cout << (out / p.name).string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenlab: norms, nodal sets and scaling sweeps of Laplace eigenfunctions on S^2 and T^2"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  for (int i = 0; i < argc; ++i) g.command_line += (i ? " " : "") + std::string(argv[i]);
  app.add_option("--threads", g.threads, "worker threads (default: EIGENLAB_THREADS, else 1)");
  app.add_option("--seed", g.seed, "seed for random families without explicit seeds");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--grid-cap", g.grid_cap, "largest grid, mesh or family size allowed");

  Target target;
  std::string point;
  auto* eval = app.add_subcommand("eval", "print e(x) with 12 significant digits");
  add_target(eval, target);
  eval->add_option("--point", point, "x,y,z on the sphere or u,v on the torus")->required();

  NormsArgs na;
  auto* norms = app.add_subcommand("norms", "compute norms of one eigenfunction, CSV on stdout");
  add_target(norms, target);
  norms->add_option("--p", na.p, "L^p exponents (inf allowed)")->delimiter(',');
  norms->add_option("--radius", na.radii, "ball radii, e.g. 0.1 or lambda^-0.75")->delimiter(',');
  norms->add_flag("--kn", na.kn, "Kakeya-Nikodym norm");
  norms->add_flag("--restriction", na.restriction, "sup of geodesic restriction norms");
  norms->add_flag("--closed-only", na.closed_only, "search closed geodesics only");
  norms->add_option("--density-factor", na.density_factor, "geodesic family density multiplier");
  norms->add_option("--lp-rtol", na.lp_rtol, "L^p refinement tolerance");

  std::string config_path;
  auto* sweep = app.add_subcommand("sweep", "run a sweep config; writes sweep.csv, fits.json, manifest.json");
  sweep->add_option("config,--config", config_path, "INI or JSON config")->required();

  double nodal_h = 0.0, nodal_rtol = NodalOptions{}.rtol;
  auto* nodal = app.add_subcommand("nodal", "nodal line length");
  add_target(nodal, target);
  nodal->add_option("--mesh-size", nodal_h, "starting mesh edge bound (default 0.5/lambda)");
  nodal->add_option("--rtol", nodal_rtol, "relative change that ends mesh halving");

  ScarOptions so;
  auto* scar = app.add_subcommand("scar", "scar witness procedure");
  add_target(scar, target);
  scar->add_option("--c0", so.c0, "L^1 premise constant");
  scar->add_option("--c1", so.c1, "tube-mass floor (default: mass of the tube found)");
  scar->add_option("--density-factor", so.density_factor, "geodesic family density multiplier");

  std::string report_in;
  auto* report = app.add_subcommand("report", "log-log SVG plots from a sweep.csv");
  report->add_option("--in", report_in, "sweep.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    set_thread_count(g.threads > 0 ? g.threads : threads_from_environment());
    if (g.grid_cap > 0) set_grid_cap(g.grid_cap);
    if (*eval) return cmd_eval(g, target, point);
    if (*norms) return cmd_norms(g, target, na);
    if (*sweep) return cmd_sweep(g, config_path);
    if (*nodal) return cmd_nodal(g, target, nodal_h, nodal_rtol);
    if (*scar) return cmd_scar(g, target, so);
    if (*report) return cmd_report(g, report_in);
  } catch (const std::exception& ex) {
    std::cerr << "eigenlab: " << ex.what() << "\n";
    return exit_code_for(ex);
  }
  return 1;
}
