#ifndef REEBFORGE_SAMPLING_HPP
#define REEBFORGE_SAMPLING_HPP

#include "reebforge/poly.hpp"

#include <cstdint>

namespace reebforge {

/// Radical inverse of `index` in the given base.
double halton(std::uint64_t index, int base);

struct RegionIdentityReport {
  long samples = 0;
  long band_skipped = 0;  ///< within the boundary band, not compared
  long compared = 0;
  long mismatches = 0;
  long undecided = 0;     ///< sign not certified even at full precision
  long fallbacks = 0;     ///< points that needed the MPFR evaluation
  double band = 1e-9;
  bool ok() const { return mismatches == 0 && undecided == 0; }
};

/// sign of the planar region polynomial against direct geometric membership
/// (inside the annulus or ellipse, outside every removed disk).
RegionIdentityReport region_identity(const SynthesisResult& model, long samples, std::uint64_t seed,
                                     double band = 1e-9);

/// Same comparison for each ellipsoid stage in (x, y_1..y_j): the stage
/// polynomial against "previous stage positive and outside the stage's
/// ellipsoids". Empty when the model has no handles.
std::vector<RegionIdentityReport> staged_identity(const SynthesisResult& model, long samples_per_stage,
                                                  std::uint64_t seed, double band = 1e-9);

struct RegularityReport {
  int samples = 0;
  int boundary = 0;
  int interior = 0;
  int ellipsoid = 0;
  int off_zero_set = 0;    ///< value enclosure excludes 0: the sample missed M
  int gradient_zero = 0;   ///< gradient enclosure contains 0
  double min_gradient = 0.0;  ///< smallest certified lower bound of max |dP/dz_i|
  bool ok() const { return samples > 0 && off_zero_set == 0 && gradient_zero == 0; }
};

/// Certified gradient enclosures at points of {P = 0}: region boundary points
/// with y = 0, interior points lifted by the last unit-sphere block, and
/// ellipsoid surface points.
RegularityReport regularity_check(const SynthesisResult& model, int samples, std::uint64_t seed);

}  // namespace reebforge

#endif
