#pragma once

#include <memory>
#include <span>
#include <vector>

namespace eigenlab {

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached; exact for polynomials of degree <= 2n - 1.
std::shared_ptr<const GaussRule> gauss_legendre(int n);

/// Legendre polynomial P_k(t).
double legendre_p(int k, double t);

/// P_k(t) and P_k'(t).
void legendre_p_deriv(int k, double t, double& p, double& dp);

/// Roots of P_k in ascending order.
std::vector<double> legendre_roots(int k);

/// log of the normalized sectoral function N_l^l(t) = kappa * s^l, s = sqrt(1 - t^2) > 0.
double log_sectoral(int l, double s);

/// Precomputed downward-recurrence coefficients for one degree l.
struct AlfTable {
  int l = 0;
  /// log of the sectoral normalization: log N_l^l(t) = log_kappa + l log s.
  double log_kappa = 0.0;
  /// N_{m-1} = alpha[m] (t/s) N_m - beta[m] N_{m+1}, m = 1..l.
  std::vector<double> alpha;
  std::vector<double> beta;
};

/// Cached table for degree l.
std::shared_ptr<const AlfTable> alf_table(int l);

/// Normalized associated Legendre functions N_l^m(t), m = 0..l, of fixed
/// degree l: integral of N^2 over [-1, 1] is 1, no Condon-Shortley phase.
/// `out` must hold l + 1 values. Stable for l in the thousands: runs the
/// three-term recurrence downward in m from the sectoral value with dynamic
/// rescaling, so deep-underflow entries come out as exact zeros.
void alf_row(int l, double t, std::span<double> out);
void alf_row(const AlfTable& table, double t, std::span<double> out);

}  // namespace eigenlab
