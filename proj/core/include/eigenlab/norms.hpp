#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/field.hpp"
#include "eigenlab/geometry.hpp"

namespace eigenlab {

/// Tolerances and limits shared by all functionals.
struct GridPolicy {
  /// Relative change between successive refinements that ends an L^p refinement.
  double lp_rtol = 1e-6;
  int lp_max_refinements = 5;
  double tube_rtol = 1e-4;
  double ball_rtol = 1e-6;
  double restriction_rtol = 1e-6;
  /// Doublings allowed for tube, ball and restriction rules.
  int max_doublings = 8;
};

/// One functional value with its error estimate and provenance.
struct NormReport {
  std::string functional;
  std::string parameter;
  double value = 0.0;
  double error_estimate = 0.0;
  /// Value comes from a rule that is exact for the integrand.
  bool exact = false;
  /// Semicolon separated key=value description of the rule used.
  std::string grid_meta;
  int refinement_steps = 0;
  /// Maximizer for sup-type functionals.
  std::optional<Point> argmax;
};

/// Lazily built screening fields of one eigenfunction; shared by the searches
/// run on it. Thread safe.
class SearchContext {
 public:
  explicit SearchContext(const Eigenfunction& e) : e_(e) {}

  const Eigenfunction& eigenfunction() const { return e_; }
  /// Values on a grid of spacing 0.2 / max(lambda, 1).
  const SampledField& field();
  /// Box-averaged energy density with the given averaging radius.
  const SampledField& energy(double radius);

 private:
  const Eigenfunction& e_;
  std::mutex mutex_;
  std::unique_ptr<SampledField> field_;
  std::map<double, std::unique_ptr<SampledField>> energy_;
};

/// ||e||_p. p = inf dispatches to sup_norm. Even integer p uses an exact-degree
/// grid ("exact"); zonal and highest-weight functions use one-dimensional
/// reductions; other cases refine a product grid until successive values
/// agree to policy.lp_rtol.
NormReport lp_norm(const Eigenfunction& e, double p, const GridPolicy& policy = {}, SearchContext* ctx = nullptr);

/// Max of |e|: grid screening then local ascent from the 10 best local maxima.
NormReport sup_norm(const Eigenfunction& e, SearchContext* ctx = nullptr);

/// (integral over g of |e|^2 ds)^{1/2}.
NormReport restriction_norm(const Eigenfunction& e, const Geodesic& g, const GridPolicy& policy = {});

/// Integral of |e|^2 over the tube.
NormReport tube_mass(const Eigenfunction& e, const Tube& tube, const GridPolicy& policy = {});

/// (integral of |e|^2 over the ball)^{1/2}.
NormReport ball_mass(const Eigenfunction& e, const GeodesicBall& ball, const GridPolicy& policy = {});

struct KNOptions {
  double density_factor = 1.0;
  bool closed_only = false;
  /// Tube half-width; 0 selects lambda^{-1/2}.
  double half_width = 0.0;
  std::size_t candidates = 5;
};

struct KNResult {
  /// sup over the family and local refinement of tube_mass^{1/2}.
  double value = 0.0;
  Geodesic argmax;
  double half_width = 0.0;
  /// Accurate value at the best screened family member.
  double coarse_value = 0.0;
  double refined_value = 0.0;
  std::size_t family_size = 0;
  /// Gain of the local refinement over the best family member; a measure of
  /// how far the family spacing leaves the search from the true sup.
  double search_gap = 0.0;
  double error_estimate = 0.0;
};

KNResult kn_norm(const Eigenfunction& e, const KNOptions& opts = {}, const GridPolicy& policy = {},
                 SearchContext* ctx = nullptr);

struct RestrictionSup {
  double value = 0.0;
  Geodesic argmax;
  std::size_t family_size = 0;
  double error_estimate = 0.0;
};

/// sup over unit-length geodesics of restriction_norm.
RestrictionSup restriction_sup(const Eigenfunction& e, const KNOptions& opts = {}, const GridPolicy& policy = {},
                               SearchContext* ctx = nullptr);

/// sup over centres of ball_mass at radius r; argmax in the report.
NormReport sup_ball_mass(const Eigenfunction& e, double r, const GridPolicy& policy = {},
                         SearchContext* ctx = nullptr);

}  // namespace eigenlab
