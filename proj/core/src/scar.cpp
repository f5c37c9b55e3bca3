#include "eigenlab/scar.hpp"

#include <algorithm>
#include <cmath>

#include "eigenlab/errors.hpp"

namespace eigenlab {

const char* to_string(ScarVerdict v) {
  switch (v) {
    case ScarVerdict::witness_found:
      return "witness_found";
    case ScarVerdict::no_witness:
      return "no_witness";
    case ScarVerdict::not_applicable:
      return "not_applicable";
  }
  return "?";
}

ScarWitness scar_witness(const Eigenfunction& e, const ScarOptions& opts) {
  if (!(opts.c0 > 0.0)) throw DomainError("scar_witness needs c0 > 0");
  if (!(e.lambda() >= 1.0)) throw DomainError("scar_witness needs lambda >= 1");
  ScarWitness w;
  w.lambda = e.lambda();
  const double q = std::pow(w.lambda, 0.25);
  SearchContext ctx(e);
  w.l1 = lp_norm(e, 1.0, opts.policy, &ctx).value;
  w.l1_bound = opts.c0 / q;
  w.premise_holds = w.l1 <= w.l1_bound;
  if (!w.premise_holds) return w;

  w.c3 = sup_norm(e, &ctx).value / q;
  KNOptions ko;
  ko.density_factor = opts.density_factor;
  const KNResult kn = kn_norm(e, ko, opts.policy, &ctx);
  w.tube_geodesic = kn.argmax;
  w.half_width = kn.half_width;
  w.tube_mass = kn.value * kn.value;
  w.c1 = std::isnan(opts.c1) ? w.tube_mass : opts.c1;
  const Tube tube = Tube::make(kn.argmax, kn.half_width);
  w.C0 = std::sqrt(w.lambda) * tube.area();
  w.c2 = std::min({1.0 / w.c3, w.c1 / (2.0 * w.C0), 1.0});
  w.band_low = w.c2 * q;
  w.band_high = q / w.c2;
  w.band_volume = level_band_volume(e, tube, w.band_low, w.band_high).volume;
  w.delta = 0.5 * w.c1 * w.c2 * w.c2;
  const bool ok = w.tube_mass >= w.c1 && w.band_volume * std::sqrt(w.lambda) >= w.delta;
  w.verdict = ok ? ScarVerdict::witness_found : ScarVerdict::no_witness;
  return w;
}

}  // namespace eigenlab
