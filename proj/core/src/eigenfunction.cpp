#include "eigenlab/eigenfunction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "eigenlab/errors.hpp"
#include "eigenlab/legendre.hpp"

namespace eigenlab {

namespace {

const double kInvSqrtPi = 1.0 / std::sqrt(kPi);
const double kInvSqrtTwoPi = 1.0 / std::sqrt(kTwoPi);

/// Sum over m of N_k^m(t) (a_m cos m phi + b_m sin m phi) with basis normalization.
/// The Legendre and trigonometric recurrences both run downward in m in one
/// loop so their dependency chains overlap.
double spectral_value(int k, const std::vector<double>& a, const std::vector<double>& b, const Vec3& x) {
  thread_local std::shared_ptr<const AlfTable> table;
  if (!table || table->l != k) table = alf_table(k);
  const double t = std::clamp(x.z, -1.0, 1.0);
  const double s = std::sqrt(x.x * x.x + x.y * x.y);
  if (s == 0.0 || k == 0) {
    const double n0 = k == 0 ? std::sqrt(0.5) : std::sqrt((2.0 * k + 1.0) / 2.0) * ((t < 0 && k % 2 == 1) ? -1.0 : 1.0);
    return n0 * a[0] * kInvSqrtTwoPi;
  }
  constexpr double kBig = 1e150;
  constexpr double kLogBig = 345.38776394910684;
  const double c1 = x.x / s, s1 = x.y / s;
  const double phi = std::atan2(x.y, x.x);
  double cm = std::cos(k * phi), sm = std::sin(k * phi);
  double log_scale = table->log_kappa + k * std::log(s);
  const double cot = t / s;
  const double* alpha = table->alpha.data();
  const double* beta = table->beta.data();
  double above = 0.0, cur = 1.0, acc = 0.0;
  for (int m = k; m >= 1; --m) {
    acc += cur * (a[m] * cm + b[m] * sm);
    const double next = alpha[m] * cot * cur - beta[m] * above;
    above = cur;
    cur = next;
    const double cn = cm * c1 + sm * s1;
    sm = sm * c1 - cm * s1;
    cm = cn;
    if (std::fabs(cur) > kBig) {
      cur /= kBig;
      above /= kBig;
      acc /= kBig;
      log_scale += kLogBig;
    }
  }
  const double total = acc * kInvSqrtPi + cur * a[0] * kInvSqrtTwoPi;
  if (log_scale > -700.0) return total * std::exp(log_scale);
  if (total == 0.0) return 0.0;
  const double lg = std::log(std::fabs(total)) + log_scale;
  return lg < -745.0 ? 0.0 : std::copysign(std::exp(lg), total);
}

void require_degree(int k) {
  if (k < 0) throw DomainError("degree k must be >= 0");
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::zonal: return "zonal";
    case Family::highest_weight: return "highest_weight";
    case Family::random_harmonic: return "random_harmonic";
    case Family::torus: return "torus";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "zonal") return Family::zonal;
  if (name == "highest_weight" || name == "highest-weight") return Family::highest_weight;
  if (name == "random_harmonic" || name == "random-harmonic" || name == "random") return Family::random_harmonic;
  if (name == "torus") return Family::torus;
  throw UsageError("unknown family '" + name + "'");
}

double lambda_of_degree(int k, int n) {
  if (k < 0 || n < 2) throw DomainError("lambda_of_degree needs k >= 0 and n >= 2");
  return std::sqrt(static_cast<double>(k) * (k + n - 1.0));
}

LatticeShell lattice_shell(long long N) {
  if (N < 0) throw DomainError("lattice_shell needs N >= 0");
  LatticeShell shell{N, {}};
  const auto r = static_cast<long long>(std::sqrt(static_cast<double>(N)));
  for (long long m1 = -r - 1; m1 <= r + 1; ++m1) {
    const long long rest = N - m1 * m1;
    if (rest < 0) continue;
    auto m2 = static_cast<long long>(std::sqrt(static_cast<double>(rest)));
    while (m2 * m2 > rest) --m2;
    while ((m2 + 1) * (m2 + 1) <= rest) ++m2;
    if (m2 * m2 != rest) continue;
    shell.points.push_back({static_cast<int>(m1), static_cast<int>(-m2)});
    if (m2 != 0) shell.points.push_back({static_cast<int>(m1), static_cast<int>(m2)});
  }
  return shell;
}

double log_highest_weight_constant(int k) {
  require_degree(k);
  if (k == 0) return -0.5 * std::log(4.0 * kPi);
  const double kd = k;
  return -0.5 * (std::log(kPi) + (2.0 * kd + 1.0) * std::numbers::ln2 + 2.0 * std::lgamma(kd + 1.0) -
                 std::lgamma(2.0 * kd + 2.0));
}

double highest_weight_constant(int k) { return std::exp(log_highest_weight_constant(k)); }

std::vector<double> real_harmonics(int k, const Vec3& x) {
  require_degree(k);
  std::vector<double> alf(static_cast<std::size_t>(k) + 1);
  alf_row(k, std::clamp(x.z, -1.0, 1.0), alf);
  std::vector<double> y(2 * static_cast<std::size_t>(k) + 1);
  y[0] = alf[0] * kInvSqrtTwoPi;
  const double phi = std::atan2(x.y, x.x);
  for (int m = 1; m <= k; ++m) {
    y[2 * m - 1] = alf[m] * std::cos(m * phi) * kInvSqrtPi;
    y[2 * m] = alf[m] * std::sin(m * phi) * kInvSqrtPi;
  }
  return y;
}

Eigenfunction zonal(int k, const SpherePoint& pole) {
  require_degree(k);
  Eigenfunction e;
  e.family_ = Family::zonal;
  e.degree_ = k;
  e.lambda_ = lambda_of_degree(k);
  e.pole_ = SpherePoint::from_vector(pole.coords);
  e.normalization_ = std::sqrt((2.0 * k + 1.0) / (4.0 * kPi));
  // Addition theorem: Z = sqrt(4pi/(2k+1)) sum_m Y_m(pole) Y_m(x).
  const std::vector<double> y = real_harmonics(k, e.pole_.coords);
  const double f = 1.0 / e.normalization_;
  e.cos_coef_.assign(static_cast<std::size_t>(k) + 1, 0.0);
  e.sin_coef_.assign(static_cast<std::size_t>(k) + 1, 0.0);
  e.cos_coef_[0] = f * y[0];
  for (int m = 1; m <= k; ++m) {
    e.cos_coef_[m] = f * y[2 * m - 1];
    e.sin_coef_[m] = f * y[2 * m];
  }
  return e;
}

Eigenfunction highest_weight(int k) {
  require_degree(k);
  Eigenfunction e;
  e.family_ = Family::highest_weight;
  e.degree_ = k;
  e.lambda_ = lambda_of_degree(k);
  e.log_norm_ = log_highest_weight_constant(k);
  e.normalization_ = std::exp(e.log_norm_);
  e.cos_coef_.assign(static_cast<std::size_t>(k) + 1, 0.0);
  e.sin_coef_.assign(static_cast<std::size_t>(k) + 1, 0.0);
  // Q_k is the normalized basis function Y^c_{k,k} itself.
  e.cos_coef_[k] = 1.0;
  return e;
}

Eigenfunction random_harmonic(int k, std::uint64_t seed) {
  require_degree(k);
  Eigenfunction e;
  e.family_ = Family::random_harmonic;
  e.degree_ = k;
  e.lambda_ = lambda_of_degree(k);
  e.seed_ = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> g(2 * static_cast<std::size_t>(k) + 1);
  for (double& v : g) v = gauss(rng);
  double ss = 0.0;
  for (double v : g) ss += v * v;
  const double inv = 1.0 / std::sqrt(ss);
  e.normalization_ = inv;
  e.cos_coef_.assign(static_cast<std::size_t>(k) + 1, 0.0);
  e.sin_coef_.assign(static_cast<std::size_t>(k) + 1, 0.0);
  e.cos_coef_[0] = g[0] * inv;
  for (int m = 1; m <= k; ++m) {
    e.cos_coef_[m] = g[2 * m - 1] * inv;
    e.sin_coef_[m] = g[2 * m] * inv;
  }
  return e;
}

namespace {

struct TorusBuild {
  std::vector<TorusMode> modes;
  double normalization = 1.0;
};

TorusBuild build_torus(const std::map<std::array<int, 2>, std::array<double, 2>>& reps) {
  double mass = 0.0;
  for (const auto& [m, ab] : reps) {
    const bool zero = m[0] == 0 && m[1] == 0;
    mass += zero ? kTwoPi * kTwoPi * ab[0] * ab[0] : 2.0 * kPi * kPi * (ab[0] * ab[0] + ab[1] * ab[1]);
  }
  if (!(mass > 0.0)) throw DomainError("torus eigenfunction has all coefficients zero");
  TorusBuild out;
  const double inv = 1.0 / std::sqrt(mass);
  for (const auto& [m, ab] : reps) {
    if (ab[0] == 0.0 && ab[1] == 0.0) continue;
    out.modes.push_back({m[0], m[1], ab[0] * inv, (m[0] == 0 && m[1] == 0) ? 0.0 : ab[1] * inv});
  }
  out.normalization = inv;
  return out;
}

bool is_representative(int m1, int m2) { return m1 > 0 || (m1 == 0 && m2 >= 0); }

LatticeShell nonempty_shell(long long N) {
  LatticeShell shell = lattice_shell(N);
  if (shell.points.empty()) {
    throw DomainError("empty lattice shell: N = " + std::to_string(N) + " is not a sum of two squares");
  }
  return shell;
}

}  // namespace

Eigenfunction torus_eigenfunction(long long N, std::span<const TorusMode> coefficients) {
  nonempty_shell(N);
  std::map<std::array<int, 2>, std::array<double, 2>> reps;
  for (const TorusMode& c : coefficients) {
    if (static_cast<long long>(c.m1) * c.m1 + static_cast<long long>(c.m2) * c.m2 != N) {
      throw DomainError("torus mode (" + std::to_string(c.m1) + "," + std::to_string(c.m2) + ") is not on shell N = " +
                        std::to_string(N));
    }
    // cos<-m,x> = cos<m,x>, sin<-m,x> = -sin<m,x>.
    if (is_representative(c.m1, c.m2)) {
      auto& ab = reps[{c.m1, c.m2}];
      ab[0] += c.a;
      ab[1] += c.b;
    } else {
      auto& ab = reps[{-c.m1, -c.m2}];
      ab[0] += c.a;
      ab[1] -= c.b;
    }
  }
  TorusBuild built = build_torus(reps);
  Eigenfunction e;
  e.modes_ = std::move(built.modes);
  e.normalization_ = built.normalization;
  e.family_ = Family::torus;
  e.n_sq_ = N;
  e.lambda_ = std::sqrt(static_cast<double>(N));
  return e;
}

Eigenfunction torus_eigenfunction(long long N, std::uint64_t seed) {
  const LatticeShell shell = nonempty_shell(N);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::map<std::array<int, 2>, std::array<double, 2>> reps;
  for (const auto& m : shell.points) {
    if (!is_representative(m[0], m[1])) continue;
    const double a = gauss(rng);
    const double b = gauss(rng);
    reps[m] = {a, b};
  }
  if (N == 0) reps[{0, 0}] = {1.0, 0.0};
  TorusBuild built = build_torus(reps);
  Eigenfunction e;
  e.modes_ = std::move(built.modes);
  e.normalization_ = built.normalization;
  e.family_ = Family::torus;
  e.n_sq_ = N;
  e.lambda_ = std::sqrt(static_cast<double>(N));
  e.seed_ = seed;
  return e;
}

int Eigenfunction::max_axis_frequency() const {
  int f = 0;
  for (const auto& m : modes_) f = std::max({f, std::abs(m.m1), std::abs(m.m2)});
  return f;
}

std::string Eigenfunction::label() const {
  std::string s = to_string(family_);
  if (family_ == Family::random_harmonic || (family_ == Family::torus && seed_ != 0)) {
    s += "/seed=" + std::to_string(seed_);
  }
  return s;
}

double Eigenfunction::at_sphere(const Vec3& x) const {
  switch (family_) {
    case Family::zonal:
      return normalization_ * legendre_p(degree_, std::clamp(dot(x, pole_.coords), -1.0, 1.0));
    case Family::highest_weight: {
      if (degree_ == 0) return normalization_;
      const double s = std::sqrt(x.x * x.x + x.y * x.y);
      if (s == 0.0) return 0.0;
      const double lg = log_norm_ + degree_ * std::log(s);
      if (lg < -700.0) return 0.0;
      return std::exp(lg) * std::cos(degree_ * std::atan2(x.y, x.x));
    }
    case Family::random_harmonic:
      return spectral_value(degree_, cos_coef_, sin_coef_, x);
    case Family::torus:
      break;
  }
  throw UsageError("sphere point passed to a torus eigenfunction");
}

double Eigenfunction::at_torus(double u, double v) const {
  if (family_ != Family::torus) throw UsageError("torus point passed to a sphere eigenfunction");
  double sum = 0.0;
  for (const auto& m : modes_) {
    const double arg = m.m1 * u + m.m2 * v;
    sum += m.a * std::cos(arg) + m.b * std::sin(arg);
  }
  return sum;
}

double Eigenfunction::operator()(const Point& x) const {
  if (manifold_of(x) != manifold()) {
    throw UsageError(std::string("point on the ") + eigenlab::to_string(manifold_of(x)) + " passed to a " +
                     eigenlab::to_string(manifold()) + " eigenfunction");
  }
  if (const auto* p = std::get_if<SpherePoint>(&x)) return at_sphere(p->coords);
  const auto& t = std::get<TorusPoint>(x);
  return at_torus(t.u, t.v);
}

}  // namespace eigenlab
