#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "eigenlab/errors.hpp"
#include "eigenlab/format.hpp"
#include "eigenlab/scaling.hpp"
#include "eigenlab/sweep.hpp"

namespace eigenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string p_param(double p) { return "p=" + format_shortest(p); }

bool has_p(const SweepSpec& s, double p) { return std::find(s.p.begin(), s.p.end(), p) != s.p.end(); }

/// p values in the open range (lo, hi), excluding `skip`.
std::vector<double> p_between(const SweepSpec& s, double lo, double hi, double skip = -1.0) {
  std::vector<double> out;
  for (double p : s.p) {
    if (p > lo && p < hi && p != skip) out.push_back(p);
  }
  return out;
}

/// Values of one member keyed by (functional, parameter), aligned on k.
class Series {
 public:
  Series(const SweepSpec& spec, const std::string& label, const SweepTable& table) : spec_(spec) {
    for (const auto& row : table) {
      if (row.sweep != spec.name || row.family != label) continue;
      lambda_[row.k] = row.lambda;
      values_[row.functional + "|" + row.parameter][row.k] = row.value;
    }
  }

  double lambda(long long k) const { return lambda_.at(k); }

  /// NaN when the cell is missing or failed.
  double get(const std::string& functional, const std::string& parameter, long long k) const {
    const auto it = values_.find(functional + "|" + parameter);
    if (it == values_.end()) {
      throw DependencyError(functional + "(" + parameter + ")", {functional + " " + parameter});
    }
    const auto jt = it->second.find(k);
    return jt == it->second.end() ? std::numeric_limits<double>::quiet_NaN() : jt->second;
  }

  double lp(double p, long long k) const { return get("lp", p_param(p), k); }
  double kn(long long k) const { return get("kn", geodesic_parameter(spec_), k); }
  double restriction(long long k) const {
    return get("restriction_sup", geodesic_parameter(spec_), k);
  }
  double ball(const RadiusSpec& r, long long k) const { return get("sup_ball_mass", "r=" + r.to_string(), k); }
  double nodal(long long k) const {
    return get("nodal_length", spec_.nodal_h > 0.0 ? "h=" + format_shortest(spec_.nodal_h) : "h=auto", k);
  }

 private:
  const SweepSpec& spec_;
  std::map<long long, double> lambda_;
  std::map<std::string, std::map<long long, double>> values_;
};

using SideFn = std::function<double(long long, double)>;  // (k, lambda) -> value

InequalityCheck build(const std::string& name, const std::string& label, const std::string& parameter,
                      const std::string& claim, const SweepSpec& spec, const Series& s, const SideFn& lhs,
                      const SideFn& rhs, bool reverse) {
  InequalityCheck c;
  c.name = name;
  c.family = label;
  c.parameter = parameter;
  c.direction = reverse ? "reverse" : "upper";
  c.claim = claim;
  for (long long k : spec.degrees) {
    const double lam = s.lambda(k);
    double l = lhs(k, lam), r = rhs(k, lam);
    if (reverse) std::swap(l, r);
    c.lambdas.push_back(lam);
    c.lhs.push_back(l);
    c.rhs.push_back(r);
  }
  c.constant = 0.0;
  for (std::size_t i = 0; i < c.lhs.size(); ++i) c.constant = std::max(c.constant, c.lhs[i] / c.rhs[i]);
  if (std::isnan(c.constant)) c.constant = std::numeric_limits<double>::quiet_NaN();
  c.holds = stable_ratio(c.lhs, c.rhs);
  return c;
}

}  // namespace

bool stable_ratio(const std::vector<double>& lhs, const std::vector<double>& rhs) {
  if (lhs.size() != rhs.size() || lhs.size() < 2) return false;
  std::vector<double> q(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (!(lhs[i] >= 0.0) || !(rhs[i] > 0.0)) return false;
    q[i] = lhs[i] / rhs[i];
    if (!std::isfinite(q[i])) return false;
  }
  const std::size_t half = q.size() / 2;
  const double first = *std::max_element(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(half));
  const double last = *std::max_element(q.end() - static_cast<std::ptrdiff_t>(half), q.end());
  return last <= 2.0 * first;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "bgt_restriction", "bourgain_restriction", "kn_l4",        "kn_lp",        "l1_lower",
      "sup_vs_l1",       "nodal_lower",          "cm_lower",     "hoelder_kn_lower", "localization",
      "ball_upper",      "sup_decay",            "hoelder_chain", "equivalence_chain"};
  return names;
}

void check_dependencies(const SweepSpec& s) {
  for (const auto& c : s.checks) {
    std::vector<std::string> missing;
    auto need_p = [&](double p) {
      if (!has_p(s, p)) missing.push_back("p=" + format_shortest(p));
    };
    const bool sphere = s.family != Family::torus;
    if (c == "bgt_restriction" || c == "bourgain_restriction" || c == "equivalence_chain") {
      if (!s.restriction) missing.push_back("restriction");
    }
    if (c == "kn_l4" || c == "kn_lp" || c == "hoelder_kn_lower" || c == "equivalence_chain") {
      if (!s.kn) missing.push_back("kn");
    }
    if (c == "bourgain_restriction") {
      need_p(2.0);
      need_p(4.0);
      need_p(kInf);
    }
    if (c == "kn_l4" || c == "equivalence_chain") need_p(4.0);
    if (c == "kn_lp" && p_between(s, 2.0, 6.0, 4.0).empty()) missing.push_back("p in (2,6) other than 4");
    if (c == "hoelder_kn_lower" && p_between(s, 4.0, 6.0).empty()) missing.push_back("p in (4,6)");
    if (c == "l1_lower" || c == "sup_vs_l1" || c == "nodal_lower" || c == "hoelder_kn_lower" || c == "hoelder_chain") {
      need_p(1.0);
    }
    if (c == "sup_vs_l1" || c == "sup_decay") need_p(kInf);
    if (c == "nodal_lower" || c == "cm_lower") {
      if (!s.nodal) missing.push_back("nodal");
    }
    if (c == "localization") need_p(6.0);
    if ((c == "localization" || c == "ball_upper") && s.radii.empty()) missing.push_back("radii");
    if (c == "hoelder_chain" && p_between(s, 2.0, kInf).empty()) missing.push_back("finite p > 2");
    if (!missing.empty()) throw DependencyError(c, missing);
    if (c == "sup_decay" && sphere) throw UsageError("check sup_decay applies to torus sweeps only");
  }
}

std::vector<InequalityCheck> run_checks(const SweepConfig& config, const SweepTable& table) {
  std::vector<InequalityCheck> out;
  for (const auto& spec : config.sweeps) {
    check_dependencies(spec);
    for (std::size_t m = 0; m < member_count(spec); ++m) {
      const std::string label = member_label(spec, m);
      const Series s(spec, label, table);
      const bool hw = spec.family == Family::highest_weight;
      const bool zonal_family = spec.family == Family::zonal;
      auto add = [&](const std::string& name, const std::string& param, const std::string& claim, const SideFn& lhs,
                     const SideFn& rhs, bool with_reverse) {
        out.push_back(build(name, label, param, claim, spec, s, lhs, rhs, false));
        if (with_reverse) out.push_back(build(name, label, param, claim, spec, s, lhs, rhs, true));
      };
      for (const auto& name : spec.checks) {
        if (name == "bgt_restriction") {
          add(name, "", "sup_restriction <~ lambda^(1/4)", [&](long long k, double) { return s.restriction(k); },
              [](long long, double l) { return std::pow(l, 0.25); }, hw);
        } else if (name == "bourgain_restriction") {
          for (double p : {2.0, 4.0, kInf}) {
            add(name, p_param(p), "sup_restriction <~ lambda^(1/(2p)) ||e||_p",
                [&](long long k, double) { return s.restriction(k); },
                [&, p](long long k, double l) { return std::pow(l, std::isinf(p) ? 0.0 : 0.5 / p) * s.lp(p, k); },
                false);
          }
        } else if (name == "kn_l4") {
          add(name, "p=4", "||e||_4 <~ lambda^(1/8) KN^(1/4)", [&](long long k, double) { return s.lp(4.0, k); },
              [&](long long k, double l) { return std::pow(l, 0.125) * std::pow(s.kn(k), 0.25); }, false);
        } else if (name == "kn_lp") {
          for (double p : p_between(spec, 2.0, 6.0, 4.0)) {
            add(name, p_param(p), "||e||_p <~ lambda^((1/2)(1/2-1/p)) KN^(6/p-1)",
                [&, p](long long k, double) { return s.lp(p, k); },
                [&, p](long long k, double l) {
                  return std::pow(l, 0.5 * (0.5 - 1.0 / p)) * std::pow(s.kn(k), 6.0 / p - 1.0);
                },
                false);
          }
        } else if (name == "l1_lower") {
          add(name, "", "lambda^(-1/4) <~ ||e||_1", [](long long, double l) { return std::pow(l, -0.25); },
              [&](long long k, double) { return s.lp(1.0, k); }, hw);
        } else if (name == "sup_vs_l1") {
          add(name, "", "||e||_inf <~ lambda^(1/2) ||e||_1", [&](long long k, double) { return s.lp(kInf, k); },
              [&](long long k, double l) { return std::sqrt(l) * s.lp(1.0, k); }, false);
        } else if (name == "nodal_lower") {
          add(name, "", "lambda ||e||_1^2 <~ |Z|",
              [&](long long k, double l) { return l * s.lp(1.0, k) * s.lp(1.0, k); },
              [&](long long k, double) { return s.nodal(k); }, false);
        } else if (name == "cm_lower") {
          add(name, "", "lambda^(1/2) <~ |Z|", [](long long, double l) { return std::sqrt(l); },
              [&](long long k, double) { return s.nodal(k); }, false);
        } else if (name == "hoelder_kn_lower") {
          for (double p : p_between(spec, 4.0, 6.0)) {
            add(name, p_param(p), "KN^(-(6-p)/(p-2)) <~ lambda^(1/4) ||e||_1",
                [&, p](long long k, double) { return std::pow(s.kn(k), -(6.0 - p) / (p - 2.0)); },
                [&](long long k, double l) { return std::pow(l, 0.25) * s.lp(1.0, k); }, false);
          }
        } else if (name == "localization") {
          for (const auto& r : spec.radii) {
            add(name, "r=" + r.to_string(), "||e||_6 <~ lambda^(1/6) (r^(-3/4) sup_ball)^(2/3)",
                [&](long long k, double) { return s.lp(6.0, k); },
                [&, r](long long k, double l) {
                  return std::pow(l, 1.0 / 6.0) * std::pow(std::pow(r.at(l), -0.75) * s.ball(r, k), 2.0 / 3.0);
                },
                false);
          }
        } else if (name == "ball_upper") {
          for (const auto& r : spec.radii) {
            add(name, "r=" + r.to_string(), "sup_ball <~ r^(1/2)", [&, r](long long k, double) { return s.ball(r, k); },
                [&, r](long long, double l) { return std::sqrt(r.at(l)); }, zonal_family);
          }
        } else if (name == "sup_decay") {
          InequalityCheck c;
          c.name = name;
          c.family = label;
          c.direction = "trend";
          c.claim = "||e||_inf lambda^(-1/2) decreasing";
          for (long long k : spec.degrees) {
            const double l = s.lambda(k);
            c.lambdas.push_back(l);
            c.lhs.push_back(s.lp(kInf, k) / std::sqrt(l));
            c.rhs.push_back(1.0);
          }
          c.constant = *std::max_element(c.lhs.begin(), c.lhs.end());
          bool finite = true;
          for (double v : c.lhs) finite = finite && std::isfinite(v);
          if (finite && c.lhs.size() >= 3) {
            const double rho = spearman(c.lambdas, c.lhs);
            const double pv = spearman_p_lower(c.lambdas, c.lhs);
            c.stats["spearman_rho"] = rho;
            c.stats["p_value"] = pv;
            c.holds = rho < 0.0 && pv < 0.05;
          }
          out.push_back(std::move(c));
        } else if (name == "hoelder_chain") {
          for (double p : p_between(spec, 2.0, kInf)) {
            InequalityCheck c = build(
                name, label, p_param(p), "1 <= ||e||_1^((p-2)/(2(p-1))) ||e||_p^(p/(2(p-1)))", spec, s,
                [](long long, double) { return 1.0; },
                [&, p](long long k, double) {
                  return std::pow(s.lp(1.0, k), (p - 2.0) / (2.0 * (p - 1.0))) *
                         std::pow(s.lp(p, k), p / (2.0 * (p - 1.0)));
                },
                false);
            c.direction = "identity";
            c.holds = true;
            for (double r : c.rhs) c.holds = c.holds && r >= 1.0 - 1e-10;
            out.push_back(std::move(c));
          }
        } else if (name == "equivalence_chain") {
          // Normalized restriction <~ normalized L^4 <~ KN^(1/4).
          InequalityCheck a = build(
              name, label, "restriction<=l4", "lambda^(-1/4) sup_restriction <~ lambda^(-1/8) ||e||_4", spec, s,
              [&](long long k, double l) { return std::pow(l, -0.25) * s.restriction(k); },
              [&](long long k, double l) { return std::pow(l, -0.125) * s.lp(4.0, k); }, false);
          InequalityCheck b = build(
              name, label, "l4<=kn", "lambda^(-1/8) ||e||_4 <~ KN^(1/4)", spec, s,
              [&](long long k, double l) { return std::pow(l, -0.125) * s.lp(4.0, k); },
              [&](long long k, double) { return std::pow(s.kn(k), 0.25); }, false);
          out.push_back(std::move(a));
          out.push_back(std::move(b));
        }
      }
    }
  }
  return out;
}

}  // namespace eigenlab
