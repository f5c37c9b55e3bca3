#pragma once

#include <limits>
#include <string>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/geometry.hpp"
#include "eigenlab/nodal.hpp"
#include "eigenlab/norms.hpp"

namespace eigenlab {

struct ScarOptions {
  double c0 = 8.5;
  double density_factor = 1.0;
  /// Tube-mass floor. NaN takes the mass of the tube found, which is what a
  /// single run can certify.
  double c1 = std::numeric_limits<double>::quiet_NaN();
  GridPolicy policy;
};

enum class ScarVerdict { witness_found, no_witness, not_applicable };
const char* to_string(ScarVerdict v);

struct ScarWitness {
  double lambda = 0.0;
  double l1 = 0.0;
  /// c0 * lambda^{-1/4}.
  double l1_bound = 0.0;
  bool premise_holds = false;
  /// Sup-norm constant c3 = ||e||_inf lambda^{-1/4}.
  double c3 = 0.0;
  Geodesic tube_geodesic;
  double half_width = 0.0;
  double tube_mass = 0.0;
  double c1 = 0.0;
  /// lambda^{1/2} Vol(tube).
  double C0 = 0.0;
  double c2 = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
  double band_volume = 0.0;
  double delta = 0.0;
  ScarVerdict verdict = ScarVerdict::not_applicable;
};

/// Checks ||e||_1 <= c0 lambda^{-1/4}; when it holds, finds the heaviest
/// lambda^{-1/2} tube, picks c2 = min(1/c3, c1/(2 C0), 1) and measures the
/// volume of {c2 lambda^{1/4} <= |e| <= lambda^{1/4}/c2} in that tube. A witness
/// needs tube mass >= c1 and band volume * lambda^{1/2} >= c1 c2^2 / 2.
/// Throws DomainError for c0 <= 0 or lambda < 1.
ScarWitness scar_witness(const Eigenfunction& e, const ScarOptions& opts = {});

}  // namespace eigenlab
