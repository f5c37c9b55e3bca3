#pragma once

#include <functional>
#include <vector>

namespace eigenlab {

struct NelderMeadOptions {
  int max_evaluations = 400;
  /// Stop when every vertex is within x_tol of the best one (max norm).
  double x_tol = 1e-10;
  /// Stop when the spread of values is at most f_tol * (|best| + f_tol).
  double f_tol = 1e-13;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  /// Spread of function values over the final simplex.
  double spread = 0.0;
  int evaluations = 0;
};

/// Maximizes f from x0 with an initial axis-aligned simplex of edge `step`.
/// Deterministic: ties keep the earlier vertex.
NelderMeadResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                      const std::vector<double>& x0, const std::vector<double>& step,
                                      const NelderMeadOptions& opts = {});

}  // namespace eigenlab
