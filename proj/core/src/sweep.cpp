#include "eigenlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "eigenlab/errors.hpp"
#include "eigenlab/format.hpp"
#include "eigenlab/nodal.hpp"
#include "eigenlab/parallel.hpp"

namespace eigenlab {

RadiusSpec RadiusSpec::parse(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != ' ') t += c;
  }
  RadiusSpec r;
  if (t.rfind("lambda^", 0) == 0) {
    r.scaled = true;
    r.value = parse_double(t.substr(7));
    if (!std::isfinite(r.value)) throw UsageError("radius exponent must be finite: " + text);
    return r;
  }
  r.value = parse_double(t);
  if (!(r.value > 0.0) || !std::isfinite(r.value)) throw UsageError("radius must be positive: " + text);
  return r;
}

std::string RadiusSpec::to_string() const { return scaled ? "lambda^" + format_shortest(value) : format_shortest(value); }

double RadiusSpec::at(double lambda) const { return scaled ? std::pow(lambda, value) : value; }

namespace {

const char* error_kind(const std::exception& ex) {
  if (dynamic_cast<const ResourceError*>(&ex)) return "ResourceError";
  if (dynamic_cast<const ConvergenceError*>(&ex)) return "ConvergenceError";
  if (dynamic_cast<const DomainError*>(&ex)) return "DomainError";
  if (dynamic_cast<const UsageError*>(&ex)) return "UsageError";
  return "Error";
}

std::string p_param(double p) { return "p=" + format_shortest(p); }

bool is_random(Family f) { return f == Family::random_harmonic || f == Family::torus; }

}  // namespace

namespace {

Eigenfunction make_member(const SweepSpec& spec, std::size_t m, long long k) {
  switch (spec.family) {
    case Family::zonal:
      return zonal(static_cast<int>(k));
    case Family::highest_weight:
      return highest_weight(static_cast<int>(k));
    case Family::random_harmonic:
      return random_harmonic(static_cast<int>(k), spec.seeds.at(m));
    case Family::torus:
      break;
  }
  return torus_eigenfunction(k, spec.seeds.at(m));
}

}  // namespace

std::size_t member_count(const SweepSpec& spec) { return is_random(spec.family) ? spec.seeds.size() : 1; }

std::string member_label(const SweepSpec& spec, std::size_t m) {
  std::string s = to_string(spec.family);
  if (is_random(spec.family)) s += "/seed=" + std::to_string(spec.seeds.at(m));
  return s;
}

std::vector<Eigenfunction> sweep_members(const SweepSpec& spec, long long k) {
  std::vector<Eigenfunction> out;
  for (std::size_t m = 0; m < member_count(spec); ++m) out.push_back(make_member(spec, m, k));
  return out;
}

std::string geodesic_parameter(const SweepSpec& spec) {
  std::string s = "density=" + format_shortest(spec.density_factor);
  if (spec.closed_only) s += ";closed";
  return s;
}

namespace {

struct Request {
  std::string functional;
  std::string parameter;
};

std::vector<Request> requests(const SweepSpec& spec) {
  std::vector<Request> r;
  for (double p : spec.p) r.push_back({"lp", p_param(p)});
  if (spec.kn) r.push_back({"kn", geodesic_parameter(spec)});
  if (spec.restriction) r.push_back({"restriction_sup", geodesic_parameter(spec)});
  for (const auto& rad : spec.radii) r.push_back({"sup_ball_mass", "r=" + rad.to_string()});
  if (spec.nodal) r.push_back({"nodal_length", spec.nodal_h > 0.0 ? "h=" + format_shortest(spec.nodal_h) : "h=auto"});
  return r;
}

std::string geodesic_meta(const Geodesic& g) {
  if (g.manifold() == Manifold::sphere) {
    return "axis=" + format_shortest(g.axis().x) + ":" + format_shortest(g.axis().y) + ":" +
           format_shortest(g.axis().z) + ";phase=" + format_shortest(g.start_phase());
  }
  return "base=" + format_shortest(g.base().u) + ":" + format_shortest(g.base().v) + ";dir=" +
         format_shortest(g.dir_u()) + ":" + format_shortest(g.dir_v());
}

std::vector<SweepRow> run_cell(const SweepSpec& spec, const GridPolicy& policy, std::size_t m, long long k) {
  const auto reqs = requests(spec);
  std::vector<SweepRow> rows;
  SweepRow base;
  base.sweep = spec.name;
  base.family = member_label(spec, m);
  base.k = k;
  base.lambda = spec.family == Family::torus ? std::sqrt(static_cast<double>(k)) : lambda_of_degree(static_cast<int>(k));
  auto fail = [&](const Request& r, const std::exception& ex) {
    SweepRow row = base;
    row.functional = r.functional;
    row.parameter = r.parameter;
    row.value = std::numeric_limits<double>::quiet_NaN();
    row.error_estimate = std::numeric_limits<double>::quiet_NaN();
    row.grid_meta = std::string("error=") + error_kind(ex) + ": " + ex.what();
    return row;
  };

  std::optional<Eigenfunction> e;
  try {
    e.emplace(make_member(spec, m, k));
  } catch (const Error& ex) {
    for (const auto& r : reqs) rows.push_back(fail(r, ex));
    return rows;
  }

  SearchContext ctx(*e);
  KNOptions ko;
  ko.density_factor = spec.density_factor;
  ko.closed_only = spec.closed_only;
  std::size_t ri = 0;
  auto emit = [&](double value, double err, std::string meta) {
    SweepRow row = base;
    row.functional = reqs[ri].functional;
    row.parameter = reqs[ri].parameter;
    row.value = value;
    row.error_estimate = err;
    row.grid_meta = std::move(meta);
    rows.push_back(std::move(row));
  };
  auto guarded = [&](auto&& body) {
    try {
      body();
    } catch (const Error& ex) {
      rows.push_back(fail(reqs[ri], ex));
    }
    ++ri;
  };

  for (double p : spec.p) {
    guarded([&] {
      const NormReport r = lp_norm(*e, p, policy, &ctx);
      emit(r.value, r.error_estimate, r.grid_meta);
    });
  }
  if (spec.kn) {
    guarded([&] {
      const KNResult r = kn_norm(*e, ko, policy, &ctx);
      emit(r.value, r.error_estimate,
           "half_width=" + format_shortest(r.half_width) + ";family=" + std::to_string(r.family_size) +
               ";coarse=" + format_shortest(r.coarse_value) + ";gap=" + format_shortest(r.search_gap) + ";" +
               geodesic_meta(r.argmax));
    });
  }
  if (spec.restriction) {
    guarded([&] {
      const RestrictionSup r = restriction_sup(*e, ko, policy, &ctx);
      emit(r.value, r.error_estimate, "family=" + std::to_string(r.family_size) + ";" + geodesic_meta(r.argmax));
    });
  }
  for (const auto& rad : spec.radii) {
    guarded([&] {
      const double r = rad.at(std::max(base.lambda, 1.0));
      const NormReport rep = sup_ball_mass(*e, r, policy, &ctx);
      emit(rep.value, rep.error_estimate, "r=" + format_shortest(r) + ";" + rep.grid_meta);
    });
  }
  if (spec.nodal) {
    guarded([&] {
      const NodalEstimate n = nodal_length(*e, spec.nodal_h);
      std::string hist;
      for (const auto& [h, len] : n.history) {
        if (!hist.empty()) hist += ":";
        hist += format_shortest(h) + "/" + format_shortest(len);
      }
      const double err = n.history.size() >= 2 ? std::fabs(n.history.back().second - n.history[n.history.size() - 2].second)
                                               : std::numeric_limits<double>::quiet_NaN();
      emit(n.length, err,
           "h=" + format_shortest(n.h) + ";crossings=" + std::to_string(n.crossings) + ";nudged=" +
               std::to_string(n.nudged) + ";history=" + hist);
    });
  }
  return rows;
}

}  // namespace

void validate(const SweepConfig& config) {
  if (config.sweeps.empty()) throw UsageError("config defines no sweep");
  std::set<std::string> names;
  for (const auto& s : config.sweeps) {
    const std::string where = "sweep '" + s.name + "': ";
    if (s.name.empty()) throw UsageError("sweep without a name");
    if (!names.insert(s.name).second) throw UsageError("duplicate sweep name '" + s.name + "'");
    if (s.degrees.empty()) throw UsageError(where + "no degrees given");
    for (std::size_t i = 0; i < s.degrees.size(); ++i) {
      if (s.degrees[i] < 1) throw UsageError(where + "degrees must be >= 1");
      if (i > 0 && s.degrees[i] <= s.degrees[i - 1]) throw UsageError(where + "degrees must be strictly increasing");
    }
    if (is_random(s.family) && s.seeds.empty()) throw UsageError(where + "random families need at least one seed");
    for (double p : s.p) {
      if (!(p >= 1.0)) throw UsageError(where + "p must be >= 1 (or inf)");
    }
    if (!(s.density_factor > 0.0)) throw UsageError(where + "density_factor must be positive");
    if (s.nodal_h < 0.0) throw UsageError(where + "nodal_h must be positive or auto");
    if (requests(s).empty()) throw UsageError(where + "no functional requested");
    for (const auto& c : s.checks) {
      const auto& known = check_names();
      if (std::find(known.begin(), known.end(), c) == known.end()) throw UsageError(where + "unknown check '" + c + "'");
    }
  }
  for (const auto& s : config.sweeps) check_dependencies(s);
}

SweepTable run_sweep(const SweepConfig& config) {
  validate(config);
  struct Cell {
    const SweepSpec* spec;
    std::size_t member;
    long long k;
  };
  std::vector<Cell> cells;
  for (const auto& s : config.sweeps) {
    for (std::size_t m = 0; m < member_count(s); ++m) {
      for (long long k : s.degrees) cells.push_back({&s, m, k});
    }
  }
  std::vector<std::vector<SweepRow>> out(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) { out[i] = run_cell(*cells[i].spec, config.policy, cells[i].member, cells[i].k); });
  SweepTable table;
  for (auto& rows : out) {
    for (auto& r : rows) table.push_back(std::move(r));
  }
  return table;
}

std::optional<double> reference_exponent(Family family, const std::string& functional, const std::string& parameter) {
  if (functional == "nodal_length") return 1.0;
  if (functional == "lp" && parameter.rfind("p=", 0) == 0) {
    const double p = parse_double(parameter.substr(2));
    const double q = std::isinf(p) ? 0.0 : 1.0 / p;
    switch (family) {
      case Family::zonal:
        if (p > 4.0) return 0.5 - 2.0 * q;
        if (p < 4.0) return 0.0;
        return std::nullopt;  // logarithmic at p = 4
      case Family::highest_weight:
        return 0.5 * (0.5 - q);
      case Family::random_harmonic:
        if (std::isinf(p)) return std::nullopt;  // sqrt(log lambda) growth
        return 0.0;
      case Family::torus:
        return std::nullopt;
    }
  }
  if (family == Family::highest_weight) {
    if (functional == "kn") return 0.0;
    if (functional == "restriction_sup") return 0.25;
  }
  if (family == Family::zonal && functional == "sup_ball_mass" && parameter.rfind("r=", 0) == 0) {
    const RadiusSpec r = RadiusSpec::parse(parameter.substr(2));
    return r.scaled ? 0.5 * r.value : 0.0;
  }
  return std::nullopt;
}

std::vector<ScalingFit> fit_table(const SweepConfig& config, const SweepTable& table) {
  std::vector<ScalingFit> fits;
  for (const auto& s : config.sweeps) {
    const auto reqs = requests(s);
    for (std::size_t m = 0; m < member_count(s); ++m) {
      const std::string label = member_label(s, m);
      for (const auto& r : reqs) {
        const auto ref = reference_exponent(s.family, r.functional, r.parameter);
        if (!ref) continue;
        std::vector<FitPoint> pts;
        for (const auto& row : table) {
          if (row.sweep == s.name && row.family == label && row.functional == r.functional &&
              row.parameter == r.parameter) {
            pts.push_back({row.lambda, row.value});
          }
        }
        fits.push_back(make_fit(label, r.functional, r.parameter, *ref, pts));
      }
    }
  }
  return fits;
}

}  // namespace eigenlab
