#include "eigenlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eigenlab/errors.hpp"
#include "eigenlab/format.hpp"

namespace eigenlab {

double critical_exponent(int n) {
  if (n < 2) throw DomainError("dimension n must be >= 2");
  return 2.0 * (n + 1) / (n - 1.0);
}

double sigma(double p, int n) {
  if (n < 2) throw DomainError("dimension n must be >= 2");
  if (!(p >= 2.0)) throw DomainError("sigma needs p >= 2");
  const double q = std::isinf(p) ? 0.0 : 1.0 / p;
  const double low = 0.5 * (n - 1) * (0.5 - q);
  const double high = n * (0.5 - q) - 0.5;
  return std::max(low, high);
}

LinearFit fit_exponent(const std::vector<FitPoint>& points) {
  if (points.size() < 4) throw DomainError("fit_exponent needs at least 4 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].value > 0.0) || !std::isfinite(points[i].value)) {
      throw DomainError("fit_exponent: nonpositive value at lambda = " + format_shortest(points[i].lambda));
    }
    if (!(points[i].lambda > 0.0)) throw DomainError("fit_exponent: lambda must be positive");
    if (i > 0 && !(points[i].lambda > points[i - 1].lambda)) {
      throw DomainError("fit_exponent: lambda must be strictly increasing");
    }
  }
  const auto n = static_cast<double>(points.size());
  std::vector<double> x(points.size()), y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    x[i] = std::log(points[i].lambda);
    y[i] = std::log(points[i].value);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  f.residuals.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.residuals[i] = y[i] - (f.intercept + f.slope * x[i]);
    ss += f.residuals[i] * f.residuals[i];
  }
  f.stderr_slope = std::sqrt(ss / (n - 2.0) / sxx);
  return f;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent:
      return "consistent";
    case Verdict::inconsistent:
      return "inconsistent";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

ScalingFit make_fit(std::string family, std::string functional, std::string parameter, double reference,
                    const std::vector<FitPoint>& points) {
  ScalingFit s;
  s.family = std::move(family);
  s.functional = std::move(functional);
  s.parameter = std::move(parameter);
  s.reference = reference;
  s.claim = "value ~ lambda^" + format_shortest(reference);
  s.points = points;
  std::vector<FitPoint> usable;
  for (const auto& p : points) {
    if (p.value > 0.0 && std::isfinite(p.value)) usable.push_back(p);
  }
  if (usable.size() < 4) {
    s.exponent = std::numeric_limits<double>::quiet_NaN();
    s.stderr_exponent = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  const LinearFit f = fit_exponent(usable);
  s.exponent = f.slope;
  s.stderr_exponent = f.stderr_slope;
  s.residuals = f.residuals;
  s.verdict = std::fabs(f.slope - reference) <= std::max(3.0 * f.stderr_slope, 0.05) ? Verdict::consistent
                                                                                        : Verdict::inconsistent;
  return s;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("spearman needs two samples of equal size >= 2");
  return pearson(ranks(x), ranks(y));
}

double spearman_p_lower(const std::vector<double>& x, const std::vector<double>& y) {
  const double rho = spearman(x, y);
  const std::size_t n = x.size();
  if (n > 9) {
    const double z = rho * std::sqrt(static_cast<double>(n) - 1.0);
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
  }
  const std::vector<double> rx = ranks(x);
  std::vector<double> ry = ranks(y);
  std::sort(ry.begin(), ry.end());
  std::size_t hits = 0, total = 0;
  do {
    ++total;
    if (pearson(rx, ry) <= rho + 1e-12) ++hits;
  } while (std::next_permutation(ry.begin(), ry.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace eigenlab
