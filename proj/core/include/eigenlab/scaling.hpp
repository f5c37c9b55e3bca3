#pragma once

#include <optional>
#include <string>
#include <vector>

namespace eigenlab {

/// Critical exponent 2(n+1)/(n-1).
double critical_exponent(int n = 2);

/// Growth exponent of sup ||e||_p over L^2-normalized eigenfunctions on an
/// n-manifold: max((n-1)/2 (1/2 - 1/p), n (1/2 - 1/p) - 1/2). p may be +inf.
/// Throws DomainError for p < 2 or n < 2.
double sigma(double p, int n = 2);

struct FitPoint {
  double lambda = 0.0;
  double value = 0.0;
};

/// Least squares line log(value) = intercept + slope log(lambda).
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::vector<double> residuals;
};

/// Throws DomainError for fewer than 4 points, lambda not strictly increasing,
/// or a nonpositive value (the message names the lambda).
LinearFit fit_exponent(const std::vector<FitPoint>& points);

enum class Verdict { consistent, inconsistent, inconclusive };
const char* to_string(Verdict v);

struct ScalingFit {
  std::string family;
  std::string functional;
  std::string parameter;
  /// Short statement of the expected law, e.g. "value ~ lambda^0.5".
  std::string claim;
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  double reference = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<FitPoint> points;
  std::vector<double> residuals;
};

/// Fits the points and compares with `reference`: consistent iff
/// |exponent - reference| <= max(3 stderr, 0.05). Fewer than 4 usable points
/// give an inconclusive verdict instead of an error.
ScalingFit make_fit(std::string family, std::string functional, std::string parameter, double reference,
                    const std::vector<FitPoint>& points);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// One-sided permutation p-value P(rho_perm <= rho_obs): exact enumeration for
/// n <= 9, normal approximation with sd 1/sqrt(n-1) above.
double spearman_p_lower(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace eigenlab
