#include "eigenlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigenlab/errors.hpp"
#include "eigenlab/parallel.hpp"

namespace eigenlab {

SampledField SampledField::sample(const Eigenfunction& e, double spacing) {
  if (!(spacing > 0.0)) throw DomainError("field spacing must be positive");
  SampledField f;
  f.manifold_ = e.manifold();
  f.spacing_ = spacing;
  if (f.manifold_ == Manifold::sphere) {
    f.rows_ = static_cast<std::size_t>(std::ceil(kPi / spacing)) + 1;
    f.cols_ = fft_friendly_size(static_cast<std::size_t>(std::ceil(kTwoPi / spacing)));
    f.row_step_ = kPi / static_cast<double>(f.rows_ - 1);
  } else {
    f.rows_ = fft_friendly_size(static_cast<std::size_t>(std::ceil(kTwoPi / spacing)));
    f.cols_ = f.rows_;
    f.row_step_ = kTwoPi / static_cast<double>(f.rows_);
  }
  f.col_step_ = kTwoPi / static_cast<double>(f.cols_);
  if (f.rows_ > runtime_limits().grid_cap / f.cols_) {
    throw ResourceError("sampled field of " + std::to_string(f.rows_) + "x" + std::to_string(f.cols_) +
                        " nodes exceeds the grid cap");
  }
  f.data_.resize(f.rows_ * f.cols_);
  parallel_for(f.rows_, [&](std::size_t i) {
    std::vector<double> ring(f.cols_);
    const double c = f.manifold_ == Manifold::sphere ? std::cos(f.row_step_ * static_cast<double>(i))
                                                    : f.row_step_ * static_cast<double>(i);
    evaluate_ring(e, c, f.cols_, ring);
    std::copy(ring.begin(), ring.end(), f.data_.begin() + static_cast<std::ptrdiff_t>(i * f.cols_));
  });
  return f;
}

SampledField SampledField::smoothed_energy(double radius) const {
  SampledField out;
  out.manifold_ = manifold_;
  out.spacing_ = radius / 2.0;
  if (manifold_ == Manifold::sphere) {
    out.rows_ = static_cast<std::size_t>(std::ceil(kPi / out.spacing_)) + 1;
    out.cols_ = static_cast<std::size_t>(std::ceil(kTwoPi / out.spacing_));
    out.row_step_ = kPi / static_cast<double>(out.rows_ - 1);
  } else {
    out.rows_ = static_cast<std::size_t>(std::ceil(kTwoPi / out.spacing_));
    out.cols_ = out.rows_;
    out.row_step_ = kTwoPi / static_cast<double>(out.rows_);
  }
  out.col_step_ = kTwoPi / static_cast<double>(out.cols_);
  out.data_.assign(out.rows_ * out.cols_, 0.0f);

  // Prefix sums of e^2 along every fine row (one extra period for wrapping).
  std::vector<double> prefix(rows_ * (cols_ + 1));
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    prefix[i * (cols_ + 1)] = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      const double v = data_[i * cols_ + j];
      acc += v * v;
      prefix[i * (cols_ + 1) + j + 1] = acc;
    }
  }
  auto row_window = [&](std::size_t i, double phi, double half) {
    // Sum and count of fine nodes in row i with |col angle - phi| <= half.
    const auto n = static_cast<long long>(cols_);
    if (half >= kPi) return std::pair<double, double>{prefix[i * (cols_ + 1) + cols_], static_cast<double>(cols_)};
    const long long lo = static_cast<long long>(std::ceil((phi - half) / col_step_));
    const long long hi = static_cast<long long>(std::floor((phi + half) / col_step_));
    if (hi < lo) return std::pair<double, double>{0.0, 0.0};
    const double* p = &prefix[i * (cols_ + 1)];
    const double total = p[cols_];
    auto upto = [&](long long idx) {  // sum of entries with index < idx, idx may leave [0, n]
      const long long q = idx >= 0 ? idx / n : -((-idx + n - 1) / n);
      const long long r = idx - q * n;
      return static_cast<double>(q) * total + p[r];
    };
    return std::pair<double, double>{upto(hi + 1) - upto(lo), static_cast<double>(hi - lo + 1)};
  };

  parallel_for(out.rows_, [&](std::size_t oi) {
    const double centre = out.row_step_ * static_cast<double>(oi);
    for (std::size_t oj = 0; oj < out.cols_; ++oj) {
      const double phi = out.col_step_ * static_cast<double>(oj);
      double sum = 0.0, weight = 0.0;
      const auto lo = static_cast<long long>(std::ceil((centre - radius) / row_step_));
      const auto hi = static_cast<long long>(std::floor((centre + radius) / row_step_));
      for (long long ri = lo; ri <= hi; ++ri) {
        std::size_t row;
        double w = 1.0, half = radius;
        if (manifold_ == Manifold::sphere) {
          if (ri < 0 || ri >= static_cast<long long>(rows_)) continue;
          row = static_cast<std::size_t>(ri);
          const double s = std::sin(row_step_ * static_cast<double>(row));
          w = std::max(s, 0.5 * row_step_);
          half = radius / std::max(s, 1e-12);
        } else {
          const auto n = static_cast<long long>(rows_);
          row = static_cast<std::size_t>(((ri % n) + n) % n);
        }
        const auto [s2, c] = row_window(row, phi, half);
        sum += w * s2;
        weight += w * c;
      }
      out.data_[oi * out.cols_ + oj] = weight > 0.0 ? static_cast<float>(sum / weight) : 0.0f;
    }
  });
  return out;
}

Point SampledField::node(std::size_t i, std::size_t j) const {
  const double a = row_step_ * static_cast<double>(i), b = col_step_ * static_cast<double>(j);
  if (manifold_ == Manifold::sphere) return SpherePoint::from_angles(a, b);
  return TorusPoint(a, b);
}

double SampledField::lookup(double row, double col) const {
  double ri, ci;
  const double fr = std::modf(row, &ri), fc = std::modf(col, &ci);
  auto r0 = static_cast<long long>(ri);
  auto c0 = static_cast<long long>(ci) % static_cast<long long>(cols_);
  const auto c1 = (c0 + 1) % static_cast<long long>(cols_);
  long long r1 = r0 + 1;
  if (manifold_ == Manifold::sphere) {
    r0 = std::min<long long>(r0, static_cast<long long>(rows_) - 1);
    r1 = std::min<long long>(r1, static_cast<long long>(rows_) - 1);
  } else {
    r0 %= static_cast<long long>(rows_);
    r1 %= static_cast<long long>(rows_);
  }
  const float* a = &data_[static_cast<std::size_t>(r0) * cols_];
  const float* b = &data_[static_cast<std::size_t>(r1) * cols_];
  const double top = a[c0] + fc * (a[c1] - a[c0]);
  const double bot = b[c0] + fc * (b[c1] - b[c0]);
  return top + fr * (bot - top);
}

double SampledField::interpolate_sphere(const Vec3& x) const {
  const double theta = std::atan2(std::sqrt(x.x * x.x + x.y * x.y), x.z);
  const double phi = wrap_angle(std::atan2(x.y, x.x));
  return lookup(theta / row_step_, phi / col_step_);
}

double SampledField::interpolate_torus(double u, double v) const {
  return lookup(wrap_angle(u) / row_step_, wrap_angle(v) / col_step_);
}

double SampledField::interpolate(const Point& x) const {
  if (manifold_of(x) != manifold_) throw UsageError("field interpolation on the wrong manifold");
  if (const auto* p = std::get_if<SpherePoint>(&x)) return interpolate_sphere(p->coords);
  const auto& t = std::get<TorusPoint>(x);
  return interpolate_torus(t.u, t.v);
}

std::vector<Point> SampledField::top_local_maxima(std::size_t count) const {
  const auto R = static_cast<long long>(rows_), C = static_cast<long long>(cols_);
  const bool sphere = manifold_ == Manifold::sphere;
  std::vector<std::size_t> found;
  for (long long i = 0; i < R; ++i) {
    for (long long j = 0; j < C; ++j) {
      const float v = std::fabs(data_[static_cast<std::size_t>(i * C + j)]);
      if (v == 0.0f) continue;
      bool keep = true;
      for (long long di = -1; di <= 1 && keep; ++di) {
        long long ni = i + di;
        if (sphere) {
          if (ni < 0 || ni >= R) continue;
        } else {
          ni = (ni + R) % R;
        }
        for (long long dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const long long nj = (j + dj + C) % C;
          const std::size_t idx = static_cast<std::size_t>(ni * C + nj);
          const float w = std::fabs(data_[idx]);
          if (w > v || (w == v && idx < static_cast<std::size_t>(i * C + j))) {
            keep = false;
            break;
          }
        }
      }
      // A pole row is a single point: only its first node may survive.
      if (keep && sphere && (i == 0 || i == R - 1)) {
        for (long long jj = 0; jj < j; ++jj) {
          if (std::fabs(data_[static_cast<std::size_t>(i * C + jj)]) >= v) {
            keep = false;
            break;
          }
        }
      }
      if (keep) found.push_back(static_cast<std::size_t>(i * C + j));
    }
  }
  std::stable_sort(found.begin(), found.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(data_[a]) > std::fabs(data_[b]);
  });
  if (found.size() > count) found.resize(count);
  std::vector<Point> out;
  for (std::size_t idx : found) out.push_back(node(idx / cols_, idx % cols_));
  return out;
}

}  // namespace eigenlab
