#include "eigenlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigenlab/errors.hpp"

namespace eigenlab {

NelderMeadResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                      const std::vector<double>& x0, const std::vector<double>& step,
                                      const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  if (step.size() != n || n == 0) throw UsageError("nelder_mead: step must match the dimension");
  // Minimize g = -f.
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> g(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
  };
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= n; ++i) g[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto point = [&](double t, std::vector<double>& out, std::size_t worst) {
    for (std::size_t d = 0; d < n; ++d) out[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double xspread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t d = 0; d < n; ++d) xspread = std::max(xspread, std::fabs(simplex[i][d] - simplex[best][d]));
    }
    const double fspread = g[worst] - g[best];
    if (evals >= opts.max_evaluations || xspread <= opts.x_tol ||
        fspread <= opts.f_tol * (std::fabs(g[best]) + opts.f_tol)) {
      return {simplex[best], -g[best], fspread, evals};
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / static_cast<double>(n);
    }
    point(-1.0, trial, worst);
    const double gr = eval(trial);
    if (gr < g[best]) {
      point(-2.0, trial2, worst);
      const double ge = eval(trial2);
      if (ge < gr) {
        simplex[worst] = trial2;
        g[worst] = ge;
      } else {
        simplex[worst] = trial;
        g[worst] = gr;
      }
      continue;
    }
    if (gr < g[second]) {
      simplex[worst] = trial;
      g[worst] = gr;
      continue;
    }
    const bool outside = gr < g[worst];
    point(outside ? -0.5 : 0.5, trial2, worst);
    const double gc = eval(trial2);
    if (gc < std::min(gr, g[worst])) {
      simplex[worst] = trial2;
      g[worst] = gc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
      g[i] = eval(simplex[i]);
    }
  }
}

}  // namespace eigenlab
