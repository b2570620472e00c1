#ifndef REEBFORGE_LAYOUT_HPP
#define REEBFORGE_LAYOUT_HPP

#include "reebforge/graph_model.hpp"
#include "reebforge/interval.hpp"
#include "reebforge/rational.hpp"

#include <gmpxx.h>

#include <vector>

namespace reebforge {

/// Chain spacing safety factor: consecutive circles of one sector satisfy
/// d_{i+1}/d_i = rho * kSafety, and both annulus boundaries keep a factor
/// kSafety of radial slack.
inline const mpq_class kSafety{5, 4};
/// Relative clearance margin: a pair fails when its certified clearance is
/// at most kRelativeMargin times the smaller radius involved.
inline const mpq_class kRelativeMargin{1, 1 << 20};

enum class CircleRole { RemovedDisk, Handle };

struct PlacedCircle {
  int sector = 0;  ///< 1..k (circle mode) or strip 1..k-1 (line mode)
  CircleRole role = CircleRole::RemovedDisk;
  int chain_index = 0;  ///< removed disk label j2, innermost first
  int channel = 0;      ///< handle: edge channel j'
  int stage = 0;        ///< handle: stage j''
  int index = 0;        ///< handle: index j''' within the stage
  int slot = 0;         ///< lattice slot (circle mode)
  mpq_class d;          ///< circle mode: distance of the centre along the bisector
  mpq_class cx, cy, radius;  ///< line mode: explicit centre and radius

  bool is_removed() const { return role == CircleRole::RemovedDisk; }
};

/// Placed plane geometry. Circle mode: annulus 1-a <= |x| <= 1+a, vertex rays
/// at angles 2*pi*j/k, every circle centred on a sector bisector with radius
/// d*sin(pi/k), hence tangent to both rays of its sector. Line mode: ellipse
/// x^2/A^2 + y^2/B^2 <= 1, vertex abscissae, circles spanning their strip.
struct CircleArrangement {
  GraphMode mode = GraphMode::Circle;
  int k = 0;
  int dimension = 2;
  mpq_class a{1, 2};
  mpq_class epsilon = kRelativeMargin;
  std::vector<PlacedCircle> circles;
  // line mode
  mpq_class ellipse_a, ellipse_b;
  std::vector<mpq_class> vertex_x;

  int removed_count() const;
  int handle_count() const;
  /// Bisector of sector j as a fraction of a full turn: (2j+1)/(2k).
  mpq_class bisector(int sector) const { return mpq_class(2 * sector + 1, 2 * k); }
  /// Vertex v_j position: j/k of a turn (circle), vertex_x[j-1] (line).
  mpq_class vertex_position(int j) const;
};

/// Numeric enclosure of one circle.
struct CircleNumeric {
  BigInterval cx, cy, r, r2;
};

/// sin(pi/k).
BigInterval sector_sine(int k, mpfr_prec_t prec);
CircleNumeric circle_numeric(const CircleArrangement& arr, const PlacedCircle& c, mpfr_prec_t prec);

/// Log-radial slot lattice shared by all sectors: slot i sits at
/// d_base * q^i with q = (rho*kSafety)^(1/C). Sector j uses slots congruent to
/// its class modulo C, so circles of adjacent sectors never touch the shared
/// ray at the same point.
class ChainLattice {
 public:
  ChainLattice(int k, mpq_class a, int top_slot);
  int k() const { return k_; }
  int classes() const { return classes_; }
  const mpq_class& a() const { return a_; }
  int top_slot() const { return top_slot_; }
  int sector_class(int sector) const;
  /// Slot of the t-th circle (0-based, innermost first) of a sector.
  int slot_for(int sector, int t) const { return sector_class(sector) + classes_ * t; }
  const mpq_class& distance(int slot) const { return slot_d_.at(static_cast<size_t>(slot)); }

 private:
  int k_;
  int classes_;
  mpq_class a_;
  int top_slot_;
  std::vector<mpq_class> slot_d_;
};

/// Number of circles (removed + handle) per sector, index 0 = sector 1.
std::vector<int> sector_circle_counts(const ValidatedSpec& spec);
/// Offset class of a sector: alternating 0/1, the last sector of an odd
/// cycle gets class 2.
int sector_class(int k, int sector);
/// Highest lattice slot needed by the given sector counts, -1 when empty.
int required_top_slot(int k, const std::vector<int>& counts);
/// Upper bound on (1+a)/(1-a) needed to fit slots 0..top_slot with slack.
mpq_class required_ratio(int k, int top_slot);

/// Smallest a = 1 - 2^-t whose ratio (1+a)/(1-a) exceeds required_ratio; 1/2
/// when no circles are needed. Honours spec.annulus_halfwidth when given and
/// throws Error(Packing) if it is too small.
mpq_class choose_annulus_halfwidth(const ValidatedSpec& spec);

/// Chain of `count` removed disks in one sector.
std::vector<PlacedCircle> place_sector_chain(const ChainLattice& lattice, int sector, int count);
/// Handle circles for every edge channel and stage, interleaved radially with
/// the removed disks of their sector: channel 1 below the first removed disk,
/// channel j' between removed disks j'-1 and j', channel a_j above the last.
std::vector<PlacedCircle> place_handle_circles(const ValidatedSpec& spec, const ChainLattice& lattice);

/// Full arrangement for a validated spec; runs certify_disjointness.
CircleArrangement layout(const ValidatedSpec& spec, mpfr_prec_t prec);

struct MarginEntry {
  int first = 0;
  int second = 0;  ///< circle index, or kInnerBoundary / kOuterBoundary / kEllipse
  BigInterval clearance;
  BigInterval threshold;
  bool ok = false;
};

inline constexpr int kInnerBoundary = -1;
inline constexpr int kOuterBoundary = -2;
inline constexpr int kEllipse = -3;

struct MarginReport {
  std::vector<MarginEntry> entries;
  std::vector<size_t> violations;  ///< indices into entries
  double min_clearance = 0.0;      ///< certified lower bound over all entries
  double min_relative = 0.0;       ///< min clearance / smaller radius
  bool ok() const { return violations.empty(); }
};

/// Certified clearances for every circle pair and every circle against the
/// outer boundary pieces. Never throws.
MarginReport margin_report(const CircleArrangement& arr, mpfr_prec_t prec);
/// margin_report that throws Error(MarginViolation) naming the first failing pair.
MarginReport certify_disjointness(const CircleArrangement& arr, mpfr_prec_t prec);

enum class TangencySide { Entering, Leaving };

struct TangencyEvent {
  mpq_class position;  ///< turn fraction in (0,1] or abscissa
  int circle = 0;
  TangencySide side = TangencySide::Entering;
  BigInterval px, py;  ///< tangency point
};

/// Two events per circle at the sector boundary angles (strip boundaries in
/// line mode), sorted by position then circle index.
std::vector<TangencyEvent> tangency_events(const CircleArrangement& arr, mpfr_prec_t prec);

}  // namespace reebforge

#endif
