#ifndef REEBFORGE_GRAPH_MODEL_HPP
#define REEBFORGE_GRAPH_MODEL_HPP

#include "reebforge/reeb_graph.hpp"

#include <gmpxx.h>

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reebforge {

/// Edge e_{j,j'}: the j'-th of the a_j edges joining v_j and v_{j+1}.
struct EdgeId {
  int sector = 0;
  int channel = 0;
  auto operator<=>(const EdgeId&) const = default;
};

/// Prescribed Reeb graph: a cycle (or path) of multi-edges.
struct GraphSpec {
  GraphMode mode = GraphMode::Circle;
  int vertices = 0;
  std::vector<int> multiplicities;
  int dimension = 2;
  std::optional<std::map<EdgeId, std::vector<int>>> handles;
  std::optional<mpq_class> annulus_halfwidth;
  std::optional<int> precision_bits;
};

/// Length m' of the handle sequences: the largest integer with m' <= (m-1)/2.
constexpr int handle_sequence_length(int dimension) { return (dimension - 1) / 2; }

enum class ViolationKind {
  TooFewVertices,
  LengthMismatch,
  NonPositiveMultiplicity,
  AdjacentUnitPair,
  DimensionTooSmall,
  WrongSequenceLength,
  AllZeroUnitPair,
  InvalidHandleEdge,
  NegativeHandleCount,
  EndVertexDegree,
  HandlesRequireCircleMode,
  InvalidHalfwidth,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int index = 0;  ///< 1-based position the violation refers to, 0 if none
  std::string message;
};

struct ValidationResult;

class ValidatedSpec {
 public:
  const GraphSpec& spec() const { return spec_; }
  GraphMode mode() const { return spec_.mode; }
  int vertex_count() const { return spec_.vertices; }
  int dimension() const { return spec_.dimension; }
  const std::vector<int>& multiplicities() const { return spec_.multiplicities; }
  bool has_handles() const { return spec_.handles.has_value(); }
  /// m' when handles are present, 0 otherwise.
  int stages() const { return has_handles() ? handle_sequence_length(spec_.dimension) : 0; }
  /// Handle sequence of e_{j,j'}; all zeros when the edge has no entry.
  std::vector<int> handle_sequence(int sector, int channel) const;
  bool no_vertex_circle() const { return spec_.mode == GraphMode::Circle && spec_.vertices == 0; }

 private:
  friend struct ValidationResult;
  friend ValidationResult validate_cycle_spec(const GraphSpec&);
  friend ValidationResult validate_handle_spec(const GraphSpec&);
  friend ValidationResult validate_line_spec(const GraphSpec&);
  explicit ValidatedSpec(GraphSpec spec) : spec_(std::move(spec)) {}
  GraphSpec spec_;
};

struct ValidationResult {
  std::optional<ValidatedSpec> value;
  std::vector<Violation> violations;
  bool ok() const { return value.has_value(); }
};

/// Circle mode without handles. Rejects 0 < k < 3 and cyclic (1,1) pairs.
ValidationResult validate_cycle_spec(const GraphSpec& spec);
/// Circle mode with handles; (1,1) pairs are allowed when rescued by a
/// non-zero handle count on one of the two unit edges.
ValidationResult validate_handle_spec(const GraphSpec& spec);
/// Path of multi-edges realised inside an ellipse.
ValidationResult validate_line_spec(const GraphSpec& spec);
/// Dispatches on mode and handle presence.
ValidationResult validate_spec(const GraphSpec& spec);
/// Like validate_spec but throws Error(Validation) listing every violation.
ValidatedSpec require_valid(const GraphSpec& spec);

/// Lexicographically minimal rotation of the sequence or its reversal.
std::vector<int> canonical_cyclic_form(std::span<const int> multiplicities);
/// Lexicographically smaller of the sequence and its reversal.
std::vector<int> canonical_path_form(std::span<const int> multiplicities);

bool reeb_isomorphic(const GraphSpec& spec, const ReebGraphResult& result);
/// Isomorphism between two swept graphs of the same mode.
bool reeb_isomorphic(const ReebGraphResult& a, const ReebGraphResult& b);

// Combinatorial encoding of a graph mapped into the circle.
struct EmbeddedVertex {
  mpq_class angle;  ///< fraction of a full turn
};

struct EmbeddedEdge {
  int from = 0;
  int to = 0;
  int from_side = 1;  ///< +1 when the edge leaves `from` towards increasing angle
  int to_side = -1;
};

struct EmbeddedGraphDescription {
  std::vector<EmbeddedVertex> vertices;
  std::vector<EmbeddedEdge> edges;
};

struct Theorem1Report {
  bool degrees_one_or_three = true;
  bool vertex_angles_injective = true;
  bool degree_three_interior = true;
  bool edge_sides_consistent = true;
  std::vector<int> degrees;
  std::vector<std::string> findings;
  bool passed() const {
    return degrees_one_or_three && vertex_angles_injective && degree_three_interior &&
           edge_sides_consistent;
  }
};

/// Combinatorial part of the genericity conditions on c_G. The lift into the
/// annulus is not decided.
Theorem1Report check_theorem1_conditions(const EmbeddedGraphDescription& g);

}  // namespace reebforge

#endif
