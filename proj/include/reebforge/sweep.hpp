#ifndef REEBFORGE_SWEEP_HPP
#define REEBFORGE_SWEEP_HPP

#include "reebforge/graph_model.hpp"
#include "reebforge/interval.hpp"
#include "reebforge/layout.hpp"
#include "reebforge/reeb_graph.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace reebforge {

/// Chord cut out of one ray (circle mode) or vertical line (line mode).
struct Chord {
  int circle = 0;
  BigInterval lo, hi;
};

/// Region on one level ray: [inner, outer] minus the removed-disk chords,
/// plus the handle chords crossing it. Chords are sorted and certified
/// disjoint, otherwise Error(DegenerateEvent).
struct Slice {
  mpq_class position;
  BigInterval inner, outer;
  std::vector<Chord> holes;
  std::vector<Chord> handles;
  int components() const { return static_cast<int>(holes.size()) + 1; }
};

Slice slice_at(const CircleArrangement& arr, const mpq_class& position, mpfr_prec_t prec);

/// Reeb graph of the angular (line mode: abscissa) function on the region,
/// from exact tangency events and certified chord order at gap midpoints.
ReebGraphResult sweep_reeb(const CircleArrangement& arr, mpfr_prec_t prec);

struct SweepEvent {
  mpq_class position;
  std::vector<int> tangent;  ///< removed-disk indices tangent at this position
  std::vector<int> handle_tangent;  ///< handle circles tangent at this position
  bool fold = false;         ///< ellipse extreme (line mode)
  int components = 0;        ///< level components on the event ray
};

struct SweepCertificate {
  std::vector<SweepEvent> events;
  std::vector<int> gap_components;  ///< level components in each event gap
  int tangencies = 0;
  int handle_tangencies = 0;
  int saddles = 0;
  int folds = 0;
  bool nondegenerate = true;       ///< every circle has d > r
  bool structural_angles = true;   ///< tangency positions equal vertex positions exactly
  bool numeric_angles = true;      ///< phi +- asin(r/d) encloses the vertex angle
  int expected_saddles = 0;        ///< 2 * removed disks
};

/// Throws Error(MissingSingularAngle) naming the first vertex without a tangency.
SweepCertificate verify_morse(const CircleArrangement& arr, mpfr_prec_t prec);

struct EulerReport {
  int saddles = 0;
  int folds = 0;
  long chi_morse = 0;   ///< extrema minus saddles
  long chi_region = 0;  ///< inclusion-exclusion on the planar region
  long chi_double = 0;  ///< 2 * chi_region
  bool ok() const { return chi_morse == chi_double; }
};

/// Surface case only (dimension 2). Throws Error(EulerMismatch).
EulerReport euler_check(const CircleArrangement& arr, mpfr_prec_t prec);

struct FiberCountRow {
  EdgeId edge;
  std::vector<int> expected;
  std::vector<int> counted;
  std::string word;
  bool ok() const { return expected == counted; }
};

/// Handle chords per stage inside each channel band at the sector bisector.
/// Throws Error(CountMismatch).
std::vector<FiberCountRow> fiber_counts_check(const CircleArrangement& arr, const ValidatedSpec& spec,
                                              mpfr_prec_t prec);

/// Independent raster oracle: polar grid (log-uniform radius) in circle mode,
/// Cartesian grid in line mode, component runs linked between adjacent slices.
ReebGraphResult brute_oracle_reeb(const CircleArrangement& arr, int radial_res, int angular_res);

}  // namespace reebforge

#endif
