#pragma once

// Reference values computed without the library: long double recurrences,
// closed forms and brute-force sums. Tests compare library output to these.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

/// P_k(t) by the Bonnet recurrence in long double.
inline long double legendre(int k, long double t) {
  if (k == 0) return 1.0L;
  long double p0 = 1.0L, p1 = t;
  for (int j = 2; j <= k; ++j) {
    const long double p2 = ((2.0L * j - 1.0L) * t * p1 - (j - 1.0L) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Roots of P_k by sign scan and bisection (no Newton, no asymptotics).
inline std::vector<double> legendre_roots(int k) {
  std::vector<double> roots;
  const int scan = 200 * k + 200;
  long double a = -1.0L, fa = legendre(k, a);
  for (int i = 1; i <= scan; ++i) {
    const long double b = -1.0L + 2.0L * i / scan;
    const long double fb = legendre(k, b);
    if (fa == 0.0L) {
      roots.push_back(static_cast<double>(a));
    } else if (fa * fb < 0.0L) {
      long double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200; ++it) {
        const long double mid = 0.5L * (lo + hi);
        const long double fm = legendre(k, mid);
        if (flo * fm <= 0.0L) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(static_cast<double>(0.5L * (lo + hi)));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

/// Zonal nodal length: one latitude circle per root of P_k.
inline double zonal_nodal_length(int k) {
  long double s = 0.0L;
  for (double t : legendre_roots(k)) s += 2.0L * kPiL * std::sqrt(1.0L - static_cast<long double>(t) * t);
  return static_cast<double>(s);
}

/// log of integral_0^pi sin^a(theta) d theta = sqrt(pi) Gamma((a+1)/2) / Gamma(a/2 + 1).
inline double log_sine_moment(double a) {
  return 0.5 * std::log(static_cast<double>(kPiL)) + std::lgamma(0.5 * (a + 1.0)) - std::lgamma(0.5 * a + 1.0);
}

/// integral_0^{2 pi} |cos(k phi)|^p d phi, independent of k >= 1.
inline double abs_cos_moment(double p) {
  return 2.0 * std::exp(log_sine_moment(p));
}

/// Highest-weight constant c_k from c_k^2 * pi * integral sin^{2k+1} = 1.
inline double highest_weight_constant(int k) {
  if (k == 0) return 1.0 / std::sqrt(4.0 * static_cast<double>(kPiL));
  return std::exp(-0.5 * (std::log(static_cast<double>(kPiL)) + log_sine_moment(2.0 * k + 1.0)));
}

/// ||c_k sin^k(theta) cos(k phi)||_p from the product of one-dimensional moments.
inline double highest_weight_lp(int k, double p) {
  const double c = highest_weight_constant(k);
  const double log_int = p * std::log(c) + std::log(abs_cos_moment(p)) + log_sine_moment(k * p + 1.0);
  return std::exp(log_int / p);
}

/// r_2(N) = 4 (d_1(N) - d_3(N)).
inline long long sum_of_two_squares_count(long long N) {
  if (N == 0) return 1;
  long long d1 = 0, d3 = 0;
  for (long long d = 1; d <= N; ++d) {
    if (N % d) continue;
    if (d % 4 == 1) ++d1;
    if (d % 4 == 3) ++d3;
  }
  return 4 * (d1 - d3);
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  long double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(a + i * h);
  return static_cast<double>(s * h / 3.0L);
}

/// Integral over S^2 of f(x, y, z): Simpson in theta, trapezoid in phi.
inline double sphere_integral(const std::function<double(double, double, double)>& f, int n_theta, int n_phi) {
  return simpson(
      [&](double th) {
        long double s = 0.0L;
        const double st = std::sin(th), ct = std::cos(th);
        for (int j = 0; j < n_phi; ++j) {
          const double ph = 2.0 * static_cast<double>(kPiL) * j / n_phi;
          s += f(st * std::cos(ph), st * std::sin(ph), ct);
        }
        return static_cast<double>(s * 2.0L * kPiL / n_phi) * st;
      },
      0.0, static_cast<double>(kPiL), n_theta);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(gen); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  /// Uniform point on S^2.
  void sphere(double& x, double& y, double& z) {
    z = uniform(-1.0, 1.0);
    const double ph = uniform(0.0, 2.0 * static_cast<double>(kPiL));
    const double s = std::sqrt(1.0 - z * z);
    x = s * std::cos(ph);
    y = s * std::sin(ph);
  }
};

}  // namespace oracle
