#ifndef REEBFORGE_REEB_GRAPH_HPP
#define REEBFORGE_REEB_GRAPH_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace reebforge {

enum class GraphMode { Circle, Line };

struct ReebVertex {
  /// Fraction of a full turn in (0,1] for circle mode, abscissa for line mode.
  mpq_class position;
  int degree = 0;
  int left = 0;   ///< edge ends arriving from smaller positions
  int right = 0;  ///< edge ends leaving towards larger positions
};

struct ReebEdge {
  int sector = 0;  ///< sector (circle) or strip (line) the edge sweeps through
  int index = 0;   ///< 1-based radial channel inside the sector, innermost first
  int from = 0;
  int to = 0;
  std::vector<int> stage_counts;  ///< handle chords per stage in this channel
  std::string fiber;
};

/// Reeb graph of the angular (or abscissa) function, as a multigraph whose
/// vertices are ordered by position.
struct ReebGraphResult {
  GraphMode mode = GraphMode::Circle;
  bool no_vertex_circle = false;
  std::vector<ReebVertex> vertices;
  std::vector<ReebEdge> edges;

  /// Edge counts between consecutive vertices (cyclically in circle mode).
  /// nullopt when some edge joins non-consecutive vertices.
  std::optional<std::vector<int>> multiplicity_sequence() const;
};

}  // namespace reebforge

#endif
