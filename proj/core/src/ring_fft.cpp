#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/errors.hpp"
#include "eigenlab/legendre.hpp"
#include "eigenlab/parallel.hpp"

namespace eigenlab {

namespace {

std::mutex g_plan_mutex;

/// FFTW's planner is not thread safe; plans are made once per size and then
/// executed on caller buffers via the new-array interface.
fftw_plan c2r_plan(int n) {
  static std::map<int, fftw_plan> plans;
  std::lock_guard lock(g_plan_mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
  auto* out = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  // FFTW_ESTIMATE keeps the chosen algorithm, and so the rounding, identical across runs.
  fftw_plan p = fftw_plan_dft_c2r_1d(n, in, out, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (p == nullptr) throw Error("FFTW failed to plan a transform of size " + std::to_string(n));
  plans.emplace(n, p);
  return p;
}

struct RingBuffers {
  fftw_complex* spec = nullptr;
  double* vals = nullptr;
  std::size_t size = 0;
  std::vector<double> alf;
  std::shared_ptr<const AlfTable> table;

  ~RingBuffers() {
    fftw_free(spec);
    fftw_free(vals);
  }
  void reserve(std::size_t n) {
    if (n <= size) return;
    fftw_free(spec);
    fftw_free(vals);
    spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    vals = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    size = n;
  }
};

const double kInvSqrtPi = 1.0 / std::sqrt(kPi);
const double kInvSqrtTwoPi = 1.0 / std::sqrt(kTwoPi);

void sphere_ring(const Eigenfunction& e, double t, std::size_t count, std::span<double> out) {
  const int k = e.degree();
  const double s = std::sqrt(std::max(0.0, (1.0 - t) * (1.0 + t)));
  const double dphi = kTwoPi / static_cast<double>(count);

  if (e.family() == Family::highest_weight) {
    if (k == 0) {
      std::fill(out.begin(), out.begin() + count, e.normalization());
      return;
    }
    const double lg = s > 0.0 ? log_highest_weight_constant(k) + k * std::log(s) : -1e300;
    const double amp = lg < -700.0 ? 0.0 : std::exp(lg);
    for (std::size_t j = 0; j < count; ++j) out[j] = amp * std::cos(k * (dphi * static_cast<double>(j)));
    return;
  }
  if (e.family() == Family::zonal && e.pole().coords.x == 0.0 && e.pole().coords.y == 0.0) {
    const double v = e.normalization() * legendre_p(k, e.pole().coords.z > 0 ? t : -t);
    std::fill(out.begin(), out.begin() + count, v);
    return;
  }

  thread_local RingBuffers buf;
  buf.reserve(count);
  if (!buf.table || buf.table->l != k) buf.table = alf_table(k);
  buf.alf.resize(static_cast<std::size_t>(k) + 1);
  alf_row(*buf.table, t, buf.alf);
  const auto& a = e.cos_coef();
  const auto& b = e.sin_coef();
  const std::size_t half = count / 2;
  for (std::size_t j = 0; j <= half; ++j) buf.spec[j][0] = buf.spec[j][1] = 0.0;
  buf.spec[0][0] = a[0] * buf.alf[0] * kInvSqrtTwoPi;
  for (int m = 1; m <= k; ++m) {
    const double am = a[m] * buf.alf[m] * kInvSqrtPi;
    double bm = b[m] * buf.alf[m] * kInvSqrtPi;
    if (am == 0.0 && bm == 0.0) continue;
    // Fold frequencies that alias on a ring with `count` samples.
    std::size_t r = static_cast<std::size_t>(m) % count;
    if (r > count - r) {
      r = count - r;
      bm = -bm;
    }
    if (r == 0) {
      buf.spec[0][0] += am;
    } else if (2 * r == count) {
      buf.spec[r][0] += am;
    } else {
      buf.spec[r][0] += 0.5 * am;
      buf.spec[r][1] -= 0.5 * bm;
    }
  }
  if (count == 1) {
    out[0] = buf.spec[0][0];
    return;
  }
  fftw_execute_dft_c2r(c2r_plan(static_cast<int>(count)), buf.spec, buf.vals);
  std::copy(buf.vals, buf.vals + count, out.begin());
}

void torus_ring(const Eigenfunction& e, double u, std::size_t count, std::span<double> out) {
  std::fill(out.begin(), out.begin() + count, 0.0);
  const double dv = kTwoPi / static_cast<double>(count);
  for (const auto& m : e.modes()) {
    const double base = m.m1 * u;
    const double step = m.m2 * dv;
    const double cs = std::cos(step), sn = std::sin(step);
    double c = 0.0, si = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      // Rotate incrementally; restart from libm every 64 steps to bound drift.
      if (j % 64 == 0) {
        const double arg = base + step * static_cast<double>(j);
        c = std::cos(arg);
        si = std::sin(arg);
      } else {
        const double cn = c * cs - si * sn;
        si = si * cs + c * sn;
        c = cn;
      }
      out[j] += m.a * c + m.b * si;
    }
  }
}

}  // namespace

void evaluate_ring(const Eigenfunction& e, double t, std::size_t count, std::span<double> out) {
  if (out.size() < count) throw UsageError("evaluate_ring: output span too small");
  if (count == 0) return;
  if (e.manifold() == Manifold::sphere) {
    sphere_ring(e, t, count, out);
  } else {
    torus_ring(e, t, count, out);
  }
}

std::vector<double> evaluate_batch(const Eigenfunction& e, const QuadratureGrid& grid) {
  if (grid.manifold != e.manifold()) throw UsageError("evaluate_batch: grid and eigenfunction on different manifolds");
  std::vector<double> values(grid.size());
  const std::size_t m = grid.azimuth_count;
  parallel_for(grid.ring_count(), [&](std::size_t r) {
    evaluate_ring(e, grid.ring_coord[r], m, std::span<double>(values).subspan(r * m, m));
  });
  return values;
}

}  // namespace eigenlab
