#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/norms.hpp"
#include "eigenlab/scaling.hpp"

namespace eigenlab {

/// Ball radius given either as a constant or as lambda^exponent.
struct RadiusSpec {
  bool scaled = false;
  double value = 0.0;  // constant radius, or the exponent when scaled

  /// Accepts "0.1", "lambda^-0.75", "lambda^-1".
  static RadiusSpec parse(const std::string& text);
  std::string to_string() const;
  double at(double lambda) const;
};

/// One sweep: a family, its degrees (shell numbers N on the torus), members
/// (seeds) and the functionals and checks requested.
struct SweepSpec {
  std::string name;
  Family family = Family::zonal;
  std::vector<long long> degrees;
  /// Members of random families; ignored for zonal and highest-weight.
  std::vector<std::uint64_t> seeds;
  std::vector<double> p;
  std::vector<RadiusSpec> radii;
  bool kn = false;
  bool restriction = false;
  bool nodal = false;
  double density_factor = 1.0;
  /// Restrict KN and restriction searches to closed geodesics.
  bool closed_only = false;
  /// Nodal mesh size; <= 0 selects 0.5 / lambda.
  double nodal_h = 0.0;
  std::vector<std::string> checks;
};

struct SweepConfig {
  std::vector<SweepSpec> sweeps;
  GridPolicy policy;
};

/// One cell of the output table. Failed cells carry NaN values and the error
/// text in grid_meta.
struct SweepRow {
  std::string sweep;
  std::string family;  // eigenfunction label, e.g. "random_harmonic/seed=3"
  long long k = 0;
  double lambda = 0.0;
  std::string functional;
  std::string parameter;
  double value = 0.0;
  double error_estimate = 0.0;
  std::string grid_meta;

  bool operator==(const SweepRow&) const = default;
};

using SweepTable = std::vector<SweepRow>;

/// Throws UsageError for malformed specs and DependencyError when a check
/// needs a functional the spec does not request.
void validate(const SweepConfig& config);

/// Number of members (seeds for random families, else 1).
std::size_t member_count(const SweepSpec& spec);
/// Label of member m as written to the family column.
std::string member_label(const SweepSpec& spec, std::size_t m);

/// Parameter column of the kn and restriction_sup rows.
std::string geodesic_parameter(const SweepSpec& spec);

/// Members of a sweep in output order.
std::vector<Eigenfunction> sweep_members(const SweepSpec& spec, long long k);

/// Computes every requested functional. Cells run in parallel; rows come out
/// in (sweep, member, k, functional) order regardless of the thread count.
SweepTable run_sweep(const SweepConfig& config);

/// Expected growth exponent for a series, when one is known.
std::optional<double> reference_exponent(Family family, const std::string& functional, const std::string& parameter);

/// One fit per (sweep, member, functional, parameter) series that has a
/// reference exponent.
std::vector<ScalingFit> fit_table(const SweepConfig& config, const SweepTable& table);

struct InequalityCheck {
  std::string name;
  std::string family;
  std::string parameter;
  /// "upper" for lhs <~ rhs, "reverse" for the saturation direction, "trend"
  /// for decay checks, "identity" for exact inequalities.
  std::string direction = "upper";
  std::string claim;
  std::vector<double> lambdas;
  std::vector<double> lhs;
  std::vector<double> rhs;
  double constant = 0.0;
  bool holds = false;
  /// Extra numbers: rank correlation and p-value for trend checks.
  std::map<std::string, double> stats;
};

/// Uniform-boundedness verdict: every ratio finite and the largest ratio of
/// the last half of the sweep at most twice the largest of the first half
/// (the middle point is skipped for odd lengths).
bool stable_ratio(const std::vector<double>& lhs, const std::vector<double>& rhs);

/// Names accepted in SweepSpec::checks.
const std::vector<std::string>& check_names();

/// Throws DependencyError naming what the spec must add for its checks, and
/// UsageError for sup_decay outside torus sweeps.
void check_dependencies(const SweepSpec& spec);

/// Evaluates the checks requested by every sweep. Throws DependencyError when
/// the table lacks a needed functional.
std::vector<InequalityCheck> run_checks(const SweepConfig& config, const SweepTable& table);

}  // namespace eigenlab
