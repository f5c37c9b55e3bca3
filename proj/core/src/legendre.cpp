#include "eigenlab/legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "eigenlab/errors.hpp"

namespace eigenlab {

namespace {

/// (2j-1)/j and (j-1)/j for the three-term recurrence, j < kTableSize.
constexpr int kTableSize = 8192;

struct LegendreCoefficients {
  std::vector<double> a, b;
  LegendreCoefficients() : a(kTableSize), b(kTableSize) {
    for (int j = 1; j < kTableSize; ++j) {
      a[j] = (2.0 * j - 1.0) / j;
      b[j] = (j - 1.0) / j;
    }
  }
};

const LegendreCoefficients& legendre_coefficients() {
  static const LegendreCoefficients c;
  return c;
}

}  // namespace

double legendre_p(int k, double t) {
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = t;
  if (k < kTableSize) {
    const auto& c = legendre_coefficients();
    for (int j = 2; j <= k; ++j) {
      const double p2 = c.a[j] * t * p1 - c.b[j] * p0;
      p0 = p1;
      p1 = p2;
    }
    return p1;
  }
  for (int j = 2; j <= k; ++j) {
    const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void legendre_p_deriv(int k, double t, double& p, double& dp) {
  if (k == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  double p0 = 1.0, p1 = t;
  for (int j = 2; j <= k; ++j) {
    const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  if (std::fabs(t) == 1.0) {
    const double edge = 0.5 * k * (k + 1.0);
    dp = (t > 0 || k % 2 == 1) ? edge : -edge;
    return;
  }
  dp = k * (t * p1 - p0) / (t * t - 1.0);
}

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th largest root.
    const double th = std::numbers::pi * (4.0 * i + 3.0) / (4.0 * n + 2.0);
    double x = (1.0 - (n - 1.0) / (8.0 * n * n * n)) * std::cos(th);
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre_p_deriv(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) <= 1e-16 * std::fabs(x) + 1e-300) break;
    }
    legendre_p_deriv(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[n - 1 - i] = x;
    r.nodes[i] = -x;
    r.weights[n - 1 - i] = w;
    r.weights[i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

std::shared_ptr<const GaussRule> gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GaussRule>> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const GaussRule>(compute_gauss_legendre(n));
  std::lock_guard lock(mutex);
  // Keep memory bounded when many large rules are requested once.
  if (cache.size() > 256) cache.clear();
  return cache.emplace(n, rule).first->second;
}

std::vector<double> legendre_roots(int k) {
  if (k <= 0) return {};
  return gauss_legendre(k)->nodes;
}

double log_sectoral(int l, double s) {
  const double ld = l;
  return 0.5 * std::log((2.0 * ld + 1.0) / 2.0) + 0.5 * std::lgamma(2.0 * ld + 1.0) - ld * std::numbers::ln2 -
         std::lgamma(ld + 1.0) + ld * std::log(s);
}

std::shared_ptr<const AlfTable> alf_table(int l) {
  if (l < 0) throw DomainError("alf_table needs l >= 0");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const AlfTable>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(l);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<AlfTable>();
  t->l = l;
  t->log_kappa = log_sectoral(l, 1.0);
  t->alpha.assign(static_cast<std::size_t>(l) + 1, 0.0);
  t->beta.assign(static_cast<std::size_t>(l) + 1, 0.0);
  for (int m = 1; m <= l; ++m) {
    t->alpha[m] = 2.0 * m / std::sqrt((l + m) * (l - m + 1.0));
    t->beta[m] = std::sqrt((l - m) * (l + m + 1.0) / ((l + m) * (l - m + 1.0)));
  }
  if (cache.size() > 512) cache.clear();
  return cache.emplace(l, std::move(t)).first->second;
}

void alf_row(int l, double t, std::span<double> out) { alf_row(*alf_table(l), t, out); }

void alf_row(const AlfTable& table, double t, std::span<double> out) {
  const int l = table.l;
  if (out.size() < static_cast<std::size_t>(l) + 1) throw UsageError("alf_row: output span too small");
  const double s = std::sqrt(std::max(0.0, (1.0 - t) * (1.0 + t)));
  if (s == 0.0) {
    for (int m = 1; m <= l; ++m) out[m] = 0.0;
    out[0] = std::sqrt((2.0 * l + 1.0) / 2.0) * ((t < 0 && l % 2 == 1) ? -1.0 : 1.0);
    return;
  }
  if (l == 0) {
    out[0] = std::sqrt(0.5);
    return;
  }
  constexpr double kBig = 1e150;
  constexpr double kLogBig = 345.38776394910684;  // log(1e150)
  double log_scale = table.log_kappa + l * std::log(s);
  const double cot = t / s;
  const double* alpha = table.alpha.data();
  const double* beta = table.beta.data();
  double above = 0.0;  // N_{m+1}
  double cur = 1.0;    // N_m, scaled
  out[l] = cur;
  for (int m = l; m >= 1; --m) {
    const double next = alpha[m] * cot * cur - beta[m] * above;
    above = cur;
    cur = next;
    out[m - 1] = cur;
    if (std::fabs(cur) > kBig) {
      for (int j = m - 1; j <= l; ++j) out[j] /= kBig;
      above /= kBig;
      cur /= kBig;
      log_scale += kLogBig;
    }
  }
  if (log_scale > -700.0) {
    const double f = std::exp(log_scale);
    for (int m = 0; m <= l; ++m) out[m] *= f;
    return;
  }
  // Entries below exp(-745) flush to zero, which is their correct double value.
  for (int m = 0; m <= l; ++m) {
    const double v = out[m];
    if (v == 0.0) continue;
    const double lg = std::log(std::fabs(v)) + log_scale;
    out[m] = lg < -745.0 ? 0.0 : std::copysign(std::exp(lg), v);
  }
}

}  // namespace eigenlab
