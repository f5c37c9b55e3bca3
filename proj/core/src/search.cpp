#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigenlab/errors.hpp"
#include "eigenlab/format.hpp"
#include "eigenlab/legendre.hpp"
#include "eigenlab/norms.hpp"
#include "eigenlab/optimize.hpp"
#include "eigenlab/parallel.hpp"
#include "rules.hpp"

namespace eigenlab {

const SampledField& SearchContext::field() {
  std::lock_guard lock(mutex_);
  if (!field_) {
    field_ = std::make_unique<SampledField>(SampledField::sample(e_, 0.2 / std::max(e_.lambda(), 1.0)));
  }
  return *field_;
}

const SampledField& SearchContext::energy(double radius) {
  const SampledField& fine = field();
  std::lock_guard lock(mutex_);
  auto& slot = energy_[radius];
  if (!slot) slot = std::make_unique<SampledField>(fine.smoothed_energy(radius));
  return *slot;
}

namespace {

/// Runs `body` with a context, creating a temporary one when none was given.
template <class F>
auto with_context(const Eigenfunction& e, SearchContext* ctx, F&& body) {
  if (ctx != nullptr) {
    if (&ctx->eigenfunction() != &e) throw UsageError("search context belongs to another eigenfunction");
    return body(*ctx);
  }
  SearchContext local(e);
  return body(local);
}

/// Point reached from `p` by the tangent offset (a, b) in the chart at p.
Point chart_point(const Point& p, double a, double b) {
  if (const auto* s = std::get_if<SpherePoint>(&p)) {
    Vec3 t, n;
    great_circle_frame(s->coords, t, n);
    const double rho = std::hypot(a, b);
    if (rho == 0.0) return p;
    return SpherePoint::from_vector(detail::sphere_exp(s->coords, t, n, rho, std::atan2(b, a)));
  }
  const auto& t = std::get<TorusPoint>(p);
  return TorusPoint(t.u + a, t.v + b);
}

Vec3 rotate(const Vec3& v, const Vec3& w) {
  const double th = norm(w);
  if (th == 0.0) return v;
  const Vec3 k = w / th;
  return v * std::cos(th) + cross(k, v) * std::sin(th) + k * (dot(k, v) * (1.0 - std::cos(th)));
}

/// Geodesic moved by the parameter vector x (rotation vector on S^2; base shift
/// and angle change on T^2).
Geodesic perturb(const Geodesic& g, const std::vector<double>& x) {
  if (g.manifold() == Manifold::sphere) {
    const Vec3 w{x[0], x[1], x[2]};
    const Vec3 a = rotate(g.axis(), w);
    const Vec3 p0 = rotate(std::get<SpherePoint>(g.at(0.0)).coords, w);
    Vec3 e1, e2;
    great_circle_frame(a, e1, e2);
    const double phase = std::atan2(dot(p0, e2), dot(p0, e1));
    return g.closed() ? Geodesic::great_circle(a) : Geodesic::sphere(a, phase, g.length());
  }
  const TorusPoint base(g.base().u + x[0], g.base().v + x[1]);
  if (g.closed()) {
    // Closed loops keep their lattice direction; only the offset moves.
    return Geodesic::torus_closed(base, static_cast<int>(std::lround(g.dir_u() * g.length() / kTwoPi)),
                                  static_cast<int>(std::lround(g.dir_v() * g.length() / kTwoPi)));
  }
  return Geodesic::torus(base, std::atan2(g.dir_v(), g.dir_u()) + x[2], g.length());
}

/// Indices of the `count` largest scores; ties keep the lower index.
std::vector<std::size_t> top_indices(const std::vector<double>& score, std::size_t count) {
  std::vector<std::size_t> idx(score.size());
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t n = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                    [&](std::size_t a, std::size_t b) { return score[a] > score[b] || (score[a] == score[b] && a < b); });
  idx.resize(n);
  return idx;
}

/// Screening estimate of the tube mass from a box-averaged energy density.
double approx_tube_mass(const SampledField& rho, const Geodesic& g, double w) {
  const double len = g.length();
  const int ns = std::max(4, static_cast<int>(std::ceil(len / (0.5 * w))));
  constexpr int nr = 4;
  const double ds = len / ns, dr = 2.0 * w / nr;
  double acc = 0.0;
  if (g.manifold() == Manifold::sphere) {
    Vec3 e1, e2;
    g.frame(e1, e2);
    const Vec3 a = g.axis();
    for (int i = 0; i < ns; ++i) {
      const double ph = g.start_phase() + (i + 0.5) * ds;
      const Vec3 gam = std::cos(ph) * e1 + std::sin(ph) * e2;
      for (int j = 0; j < nr; ++j) {
        const double r = -w + (j + 0.5) * dr;
        acc += rho.interpolate_sphere(std::cos(r) * gam + std::sin(r) * a) * std::cos(r) * ds * dr;
      }
    }
    if (!g.closed()) {
      const double half_disk = kPi * (1.0 - std::cos(w));
      const double ph0 = g.start_phase(), ph1 = ph0 + len;
      acc += half_disk * rho.interpolate_sphere(std::cos(ph0 - 0.5 * w) * e1 + std::sin(ph0 - 0.5 * w) * e2);
      acc += half_disk * rho.interpolate_sphere(std::cos(ph1 + 0.5 * w) * e1 + std::sin(ph1 + 0.5 * w) * e2);
    }
    return acc;
  }
  const double du = g.dir_u(), dv = g.dir_v();
  for (int i = 0; i < ns; ++i) {
    const double s = (i + 0.5) * ds;
    for (int j = 0; j < nr; ++j) {
      const double r = -w + (j + 0.5) * dr;
      acc += rho.interpolate_torus(g.base().u + s * du - r * dv, g.base().v + s * dv + r * du) * ds * dr;
    }
  }
  if (!g.closed()) {
    const double half_disk = 0.5 * kPi * w * w;
    acc += half_disk * rho.interpolate_torus(g.base().u - 0.5 * w * du, g.base().v - 0.5 * w * dv);
    acc += half_disk * rho.interpolate_torus(g.base().u + (len + 0.5 * w) * du, g.base().v + (len + 0.5 * w) * dv);
  }
  return acc;
}

/// Screening estimate of the restriction integral from interpolated values.
double approx_restriction(const SampledField& f, const Geodesic& g, double lambda) {
  const int n = std::max(16, static_cast<int>(std::ceil(std::max(lambda, 1.0) * g.length())));
  const double ds = g.length() / n;
  double acc = 0.0;
  if (g.manifold() == Manifold::sphere) {
    Vec3 e1, e2;
    g.frame(e1, e2);
    for (int i = 0; i < n; ++i) {
      const double ph = g.start_phase() + (i + 0.5) * ds;
      const double v = f.interpolate_sphere(std::cos(ph) * e1 + std::sin(ph) * e2);
      acc += v * v;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double s = (i + 0.5) * ds;
      const double v = f.interpolate_torus(g.base().u + s * g.dir_u(), g.base().v + s * g.dir_v());
      acc += v * v;
    }
  }
  return acc * ds;
}

/// Cumulative integral of a sampled density around one great circle.
class CircleProfile {
 public:
  CircleProfile(std::size_t n, const std::function<double(double)>& density) : ds_(kTwoPi / static_cast<double>(n)) {
    prefix_.resize(n + 1);
    prefix_[0] = 0.0;
    for (std::size_t j = 0; j < n; ++j) prefix_[j + 1] = prefix_[j] + density((static_cast<double>(j) + 0.5) * ds_) * ds_;
  }
  /// Integral over [a, b] in arclength, for any real a <= b.
  double integral(double a, double b) const { return cumulative(b) - cumulative(a); }

 private:
  double cumulative(double s) const {
    const double q = std::floor(s / kTwoPi);
    const double x = (s - q * kTwoPi) / ds_;
    const std::size_t n = prefix_.size() - 1;
    const auto j = std::min(static_cast<std::size_t>(x), n - 1);
    const double f = x - static_cast<double>(j);
    return q * prefix_[n] + prefix_[j] + f * (prefix_[j + 1] - prefix_[j]);
  }
  double ds_;
  std::vector<double> prefix_;
};

/// Screening scores for a family. Sphere members sharing an axis are scored
/// from one profile of `density(point, axis)` around their great circle plus
/// `caps(g)`; other members use `approx`.
std::vector<double> screen_family(const std::vector<Geodesic>& family,
                                  const std::function<double(const Geodesic&)>& approx,
                                  const std::function<double(const Vec3&, const Vec3&)>& density,
                                  const std::function<double(const Geodesic&)>& caps, double ds_target) {
  std::vector<double> score(family.size());
  if (family.empty() || family.front().manifold() != Manifold::sphere) {
    parallel_for(family.size(), [&](std::size_t i) { score[i] = approx(family[i]); });
    return score;
  }
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < family.size();) {
    std::size_t j = i + 1;
    while (j < family.size() && family[j].axis() == family[i].axis()) ++j;
    groups.emplace_back(i, j);
    i = j;
  }
  const auto n = static_cast<std::size_t>(std::max(16.0, std::ceil(kTwoPi / ds_target)));
  parallel_for(groups.size(), [&](std::size_t gi) {
    const auto [lo, hi] = groups[gi];
    const Geodesic& g0 = family[lo];
    Vec3 e1, e2;
    g0.frame(e1, e2);
    const Vec3 a = g0.axis();
    const CircleProfile profile(n, [&](double ph) { return density(std::cos(ph) * e1 + std::sin(ph) * e2, a); });
    for (std::size_t i = lo; i < hi; ++i) {
      const Geodesic& g = family[i];
      const double len = g.closed() ? kTwoPi : g.length();
      score[i] = profile.integral(g.start_phase(), g.start_phase() + len) + caps(g);
    }
  });
  return score;
}

struct GeodesicSearch {
  double value = 0.0;        // best refined integral
  double coarse = 0.0;       // refined integral at the best screened member
  double error = 0.0;
  Geodesic argmax;
};

/// Takes the best screened members, then refines the best members with a
/// simplex search on `accurate(g, level)`.
GeodesicSearch search_geodesics(const std::vector<Geodesic>& family, const std::vector<double>& score,
                                const std::function<double(const Geodesic&, int)>& accurate, double rtol,
                                int max_doublings, std::size_t candidates, double step, const char* what) {
  if (family.empty()) throw DomainError("empty geodesic family");
  const auto top = top_indices(score, candidates);

  auto refined = [&](const Geodesic& g) {
    return detail::refine([&](int level) { return accurate(g, level); }, rtol, max_doublings, what);
  };
  const Geodesic& first = family[top.front()];
  const auto coarse = refined(first);

  const std::size_t dim = first.manifold() == Manifold::sphere || !first.closed() ? 3 : 2;
  std::vector<NelderMeadResult> local(top.size());
  parallel_for(top.size(), [&](std::size_t c) {
    const Geodesic& g0 = family[top[c]];
    NelderMeadOptions opt;
    opt.max_evaluations = 90;
    opt.x_tol = 1e-4 * step;
    opt.f_tol = 1e-9;
    local[c] = nelder_mead_maximize([&](const std::vector<double>& x) { return accurate(perturb(g0, x), 0); },
                                    std::vector<double>(dim, 0.0), std::vector<double>(dim, step), opt);
  });
  std::size_t best = 0;
  for (std::size_t c = 1; c < local.size(); ++c) {
    if (local[c].value > local[best].value) best = c;
  }
  GeodesicSearch out;
  out.argmax = perturb(family[top[best]], local[best].x);
  const auto fine = refined(out.argmax);
  out.coarse = coarse.value;
  if (fine.value >= coarse.value) {
    out.value = fine.value;
    out.error = std::fabs(fine.value - fine.previous);
  } else {
    out.value = coarse.value;
    out.error = std::fabs(coarse.value - coarse.previous);
    out.argmax = first;
  }
  return out;
}

}  // namespace

NormReport sup_norm(const Eigenfunction& e, SearchContext* ctx) {
  return with_context(e, ctx, [&](SearchContext& c) {
    const SampledField& f = c.field();
    const auto starts = f.top_local_maxima(10);
    const double step = 0.5 * f.spacing();
    std::vector<NelderMeadResult> res(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
      NelderMeadOptions opt;
      opt.max_evaluations = 300;
      opt.x_tol = 1e-10 / std::max(e.lambda(), 1.0);
      opt.f_tol = 1e-15;
      res[i] = nelder_mead_maximize([&](const std::vector<double>& x) { return std::fabs(e(chart_point(starts[i], x[0], x[1]))); },
                                    {0.0, 0.0}, {step, step}, opt);
    });
    NormReport r;
    r.functional = "sup";
    r.parameter = "p=inf";
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.size(); ++i) {
      if (res[i].value > res[best].value) best = i;
    }
    if (!res.empty()) {
      r.value = res[best].value;
      r.error_estimate = res[best].spread;
      r.argmax = chart_point(starts[best], res[best].x[0], res[best].x[1]);
    }
    r.grid_meta = "route=field_ascent;field=" + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                  ";starts=" + std::to_string(starts.size());
    return r;
  });
}

KNResult kn_norm(const Eigenfunction& e, const KNOptions& opts, const GridPolicy& policy, SearchContext* ctx) {
  const bool auto_width = opts.half_width <= 0.0;
  if (auto_width && !(e.lambda() >= 1.0)) throw DomainError("kn_norm needs lambda >= 1");
  const double lam = std::max(e.lambda(), 1.0);
  const double w = auto_width ? 1.0 / std::sqrt(lam) : opts.half_width;
  return with_context(e, ctx, [&](SearchContext& c) {
    GeodesicFamilyOptions fo{opts.density_factor, opts.closed_only};
    const auto family = geodesic_family(e.manifold(), lam, fo);
    const SampledField& rho = c.energy(0.5 * w);
    auto approx = [&](const Geodesic& g) { return approx_tube_mass(rho, g, w); };
    constexpr int nr = 4;
    const double dr = 2.0 * w / nr;
    auto density = [&](const Vec3& gam, const Vec3& a) {
      double acc = 0.0;
      for (int j = 0; j < nr; ++j) {
        const double r = -w + (j + 0.5) * dr;
        acc += rho.interpolate_sphere(std::cos(r) * gam + std::sin(r) * a) * std::cos(r) * dr;
      }
      return acc;
    };
    auto caps = [&](const Geodesic& g) {
      if (g.closed()) return 0.0;
      Vec3 e1, e2;
      g.frame(e1, e2);
      const double half_disk = kPi * (1.0 - std::cos(w));
      const double ph0 = g.start_phase(), ph1 = ph0 + g.length();
      return half_disk * (rho.interpolate_sphere(std::cos(ph0 - 0.5 * w) * e1 + std::sin(ph0 - 0.5 * w) * e2) +
                          rho.interpolate_sphere(std::cos(ph1 + 0.5 * w) * e1 + std::sin(ph1 + 0.5 * w) * e2));
    };
    const auto score = screen_family(family, approx, density, caps, 0.5 * w);
    auto accurate = [&](const Geodesic& g, int level) { return detail::tube_integral(e, Tube::make(g, w), level); };
    const double step = 0.5 * opts.density_factor / std::sqrt(lam);
    const auto found = search_geodesics(family, score, accurate, policy.tube_rtol, policy.max_doublings,
                                        opts.candidates, step, "tube mass");
    KNResult r;
    r.half_width = w;
    r.family_size = family.size();
    r.argmax = found.argmax;
    r.coarse_value = std::sqrt(found.coarse);
    r.refined_value = std::sqrt(found.value);
    r.value = r.refined_value;
    r.search_gap = r.refined_value - r.coarse_value;
    r.error_estimate = found.error / (2.0 * std::max(r.value, 1e-300));
    return r;
  });
}

RestrictionSup restriction_sup(const Eigenfunction& e, const KNOptions& opts, const GridPolicy& policy,
                               SearchContext* ctx) {
  const double lam = std::max(e.lambda(), 1.0);
  return with_context(e, ctx, [&](SearchContext& c) {
    GeodesicFamilyOptions fo{opts.density_factor, opts.closed_only};
    const auto family = geodesic_family(e.manifold(), lam, fo);
    const SampledField& f = c.field();
    auto approx = [&](const Geodesic& g) { return approx_restriction(f, g, lam); };
    auto density = [&](const Vec3& x, const Vec3&) {
      const double v = f.interpolate_sphere(x);
      return v * v;
    };
    const auto score = screen_family(family, approx, density, [](const Geodesic&) { return 0.0; }, 0.5 / lam);
    auto accurate = [&](const Geodesic& g, int level) { return detail::restriction_integral(e, g, level); };
    const double step = 0.5 / lam;
    const auto found = search_geodesics(family, score, accurate, policy.restriction_rtol, policy.max_doublings,
                                        opts.candidates, step, "restriction integral");
    RestrictionSup r;
    r.value = std::sqrt(found.value);
    r.argmax = found.argmax;
    r.family_size = family.size();
    r.error_estimate = found.error / (2.0 * std::max(r.value, 1e-300));
    return r;
  });
}

NormReport sup_ball_mass(const Eigenfunction& e, double r, const GridPolicy& policy, SearchContext* ctx) {
  if (!(r > 0.0) || r > kPi) throw DomainError("sup_ball_mass radius must lie in (0, pi]");
  const double lam = std::max(e.lambda(), 1.0);
  return with_context(e, ctx, [&](SearchContext& c) {
    // Screening: box-averaged energy on a centre grid of spacing r/2.
    const SampledField& en = c.energy(r);
    const double centre_count = static_cast<double>(en.rows()) * static_cast<double>(en.cols());
    if (centre_count > static_cast<double>(runtime_limits().grid_cap)) {
      throw ResourceError("ball centre grid exceeds the grid cap");
    }
    const std::vector<Point> centres = en.top_local_maxima(5);
    if (centres.empty()) throw DomainError("sup_ball_mass: no screening maximum found");
    std::vector<std::size_t> top(centres.size());
    for (std::size_t i = 0; i < top.size(); ++i) top[i] = i;
    std::vector<NelderMeadResult> local(top.size());
    parallel_for(top.size(), [&](std::size_t k) {
      NelderMeadOptions opt;
      opt.max_evaluations = 120;
      opt.x_tol = 1e-4 * r;
      opt.f_tol = 1e-10;
      const Point& p0 = centres[top[k]];
      local[k] = nelder_mead_maximize(
          [&](const std::vector<double>& x) {
            return detail::ball_integral(e, GeodesicBall::make(chart_point(p0, x[0], x[1]), r), 0);
          },
          {0.0, 0.0}, {0.25 * r, 0.25 * r}, opt);
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < local.size(); ++k) {
      if (local[k].value > local[best].value) best = k;
    }
    const Point centre = chart_point(centres[top[best]], local[best].x[0], local[best].x[1]);
    NormReport out = ball_mass(e, GeodesicBall::make(centre, r), policy);
    out.functional = "sup_ball_mass";
    out.grid_meta += ";centres=" + std::to_string(static_cast<std::size_t>(centre_count));
    if (r < 1.0 / lam) out.grid_meta += ";below_wavelength=1";
    return out;
  });
}

}  // namespace eigenlab
