#include "reebforge/graph_model.hpp"

#include "reebforge/error.hpp"
#include "reebforge/rational.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace reebforge {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::TooFewVertices: return "TooFewVertices";
    case ViolationKind::LengthMismatch: return "LengthMismatch";
    case ViolationKind::NonPositiveMultiplicity: return "NonPositiveMultiplicity";
    case ViolationKind::AdjacentUnitPair: return "AdjacentUnitPair";
    case ViolationKind::DimensionTooSmall: return "DimensionTooSmall";
    case ViolationKind::WrongSequenceLength: return "WrongSequenceLength";
    case ViolationKind::AllZeroUnitPair: return "AllZeroUnitPair";
    case ViolationKind::InvalidHandleEdge: return "InvalidHandleEdge";
    case ViolationKind::NegativeHandleCount: return "NegativeHandleCount";
    case ViolationKind::EndVertexDegree: return "EndVertexDegree";
    case ViolationKind::HandlesRequireCircleMode: return "HandlesRequireCircleMode";
    case ViolationKind::InvalidHalfwidth: return "InvalidHalfwidth";
  }
  return "Violation";
}

std::vector<int> ValidatedSpec::handle_sequence(int sector, int channel) const {
  const int len = handle_sequence_length(spec_.dimension);
  if (!spec_.handles) return std::vector<int>(static_cast<size_t>(std::max(len, 0)), 0);
  auto it = spec_.handles->find({sector, channel});
  if (it == spec_.handles->end()) return std::vector<int>(static_cast<size_t>(len), 0);
  return it->second;
}

namespace {

void add(std::vector<Violation>& out, ViolationKind kind, int index, std::string msg) {
  out.push_back({kind, index, std::move(msg)});
}

// Checks shared by circle-mode validators: vertex count, length, positivity.
void check_cycle_shape(const GraphSpec& spec, std::vector<Violation>& out) {
  const int k = spec.vertices;
  if (k < 0 || (k > 0 && k < 3))
    add(out, ViolationKind::TooFewVertices, 0,
        "circle mode needs k = 0 or k >= 3 vertices, got " + std::to_string(k));
  if (static_cast<int>(spec.multiplicities.size()) != std::max(k, 0))
    add(out, ViolationKind::LengthMismatch, 0,
        "expected " + std::to_string(std::max(k, 0)) + " multiplicities, got " +
            std::to_string(spec.multiplicities.size()));
  for (size_t j = 0; j < spec.multiplicities.size(); ++j)
    if (spec.multiplicities[j] < 1)
      add(out, ViolationKind::NonPositiveMultiplicity, static_cast<int>(j + 1),
          "a_" + std::to_string(j + 1) + " must be positive");
  if (spec.dimension < 2)
    add(out, ViolationKind::DimensionTooSmall, 0, "dimension must be at least 2");
  if (spec.annulus_halfwidth && (*spec.annulus_halfwidth <= 0 || *spec.annulus_halfwidth >= 1))
    add(out, ViolationKind::InvalidHalfwidth, 0, "annulus_halfwidth must lie in (0,1)");
}

bool shape_ok(const std::vector<Violation>& v) {
  return std::none_of(v.begin(), v.end(), [](const Violation& x) {
    return x.kind == ViolationKind::TooFewVertices || x.kind == ViolationKind::LengthMismatch ||
           x.kind == ViolationKind::NonPositiveMultiplicity;
  });
}

}  // namespace

ValidationResult validate_cycle_spec(const GraphSpec& spec) {
  ValidationResult result;
  if (spec.mode != GraphMode::Circle)
    throw Error(ErrorKind::InvalidArgument, "validate_cycle_spec needs a circle-mode spec");
  check_cycle_shape(spec, result.violations);
  if (spec.handles)
    add(result.violations, ViolationKind::InvalidHandleEdge, 0,
        "handles present; use validate_handle_spec");
  if (shape_ok(result.violations)) {
    const auto& a = spec.multiplicities;
    const int k = static_cast<int>(a.size());
    for (int j = 0; j < k; ++j)
      if (a[j] == 1 && a[(j + 1) % k] == 1)
        add(result.violations, ViolationKind::AdjacentUnitPair, j + 1,
            "(a_" + std::to_string(j + 1) + ", a_" + std::to_string((j + 1) % k + 1) + ") = (1,1)");
  }
  if (result.violations.empty()) result.value = ValidatedSpec(spec);
  return result;
}

ValidationResult validate_handle_spec(const GraphSpec& spec) {
  ValidationResult result;
  if (spec.mode != GraphMode::Circle) {
    add(result.violations, ViolationKind::HandlesRequireCircleMode, 0,
        "handle sequences are only defined for circle mode");
    return result;
  }
  if (!spec.handles) throw Error(ErrorKind::InvalidArgument, "validate_handle_spec needs handles");
  check_cycle_shape(spec, result.violations);
  const int m = spec.dimension;
  const int len = handle_sequence_length(m);
  if (m <= 2)
    add(result.violations, ViolationKind::DimensionTooSmall, 0,
        "handle sequences need dimension m > 2, got " + std::to_string(m));
  const auto& a = spec.multiplicities;
  const int k = static_cast<int>(a.size());
  for (const auto& [edge, seq] : *spec.handles) {
    const std::string name = "e_{" + std::to_string(edge.sector) + "," + std::to_string(edge.channel) + "}";
    if (edge.sector < 1 || edge.sector > k || edge.channel < 1 || edge.channel > a[edge.sector - 1])
      add(result.violations, ViolationKind::InvalidHandleEdge, edge.sector, name + " is not an edge");
    if (m > 2 && static_cast<int>(seq.size()) != len)
      add(result.violations, ViolationKind::WrongSequenceLength, edge.sector,
          name + " has length " + std::to_string(seq.size()) + ", expected " + std::to_string(len));
    if (std::any_of(seq.begin(), seq.end(), [](int x) { return x < 0; }))
      add(result.violations, ViolationKind::NegativeHandleCount, edge.sector, name + " has a negative entry");
  }
  if (shape_ok(result.violations) && k > 0) {
    auto nonzero = [&](int sector) {
      auto it = spec.handles->find({sector, 1});
      if (it == spec.handles->end()) return false;
      return std::any_of(it->second.begin(), it->second.end(), [](int x) { return x != 0; });
    };
    for (int j = 0; j < k; ++j) {
      const int nx = (j + 1) % k;
      if (a[j] == 1 && a[nx] == 1 && !nonzero(j + 1) && !nonzero(nx + 1))
        add(result.violations, ViolationKind::AllZeroUnitPair, j + 1,
            "(a_" + std::to_string(j + 1) + ", a_" + std::to_string(nx + 1) +
                ") = (1,1) with all-zero handle sequences");
    }
  }
  if (result.violations.empty()) result.value = ValidatedSpec(spec);
  return result;
}

ValidationResult validate_line_spec(const GraphSpec& spec) {
  ValidationResult result;
  if (spec.mode != GraphMode::Line)
    throw Error(ErrorKind::InvalidArgument, "validate_line_spec needs a line-mode spec");
  const int k = spec.vertices;
  if (k < 2) add(result.violations, ViolationKind::TooFewVertices, 0, "line mode needs k >= 2");
  if (static_cast<int>(spec.multiplicities.size()) != std::max(k - 1, 0))
    add(result.violations, ViolationKind::LengthMismatch, 0,
        "expected " + std::to_string(std::max(k - 1, 0)) + " multiplicities, got " +
            std::to_string(spec.multiplicities.size()));
  if (spec.handles)
    add(result.violations, ViolationKind::HandlesRequireCircleMode, 0,
        "handle sequences are only defined for circle mode");
  if (spec.dimension < 2)
    add(result.violations, ViolationKind::DimensionTooSmall, 0, "dimension must be at least 2");
  const auto& a = spec.multiplicities;
  for (size_t j = 0; j < a.size(); ++j)
    if (a[j] < 1)
      add(result.violations, ViolationKind::NonPositiveMultiplicity, static_cast<int>(j + 1),
          "a_" + std::to_string(j + 1) + " must be positive");
  if (shape_ok(result.violations) && !a.empty()) {
    if (a.front() != 1)
      add(result.violations, ViolationKind::EndVertexDegree, 1, "end vertex v_1 must have degree 1");
    if (a.back() != 1)
      add(result.violations, ViolationKind::EndVertexDegree, static_cast<int>(a.size()),
          "end vertex v_k must have degree 1");
    for (size_t j = 0; j + 1 < a.size(); ++j)
      if (a[j] == 1 && a[j + 1] == 1)
        add(result.violations, ViolationKind::AdjacentUnitPair, static_cast<int>(j + 1),
            "(a_" + std::to_string(j + 1) + ", a_" + std::to_string(j + 2) + ") = (1,1)");
  }
  if (result.violations.empty()) result.value = ValidatedSpec(spec);
  return result;
}

ValidationResult validate_spec(const GraphSpec& spec) {
  if (spec.mode == GraphMode::Line) return validate_line_spec(spec);
  if (spec.handles) return validate_handle_spec(spec);
  return validate_cycle_spec(spec);
}

ValidatedSpec require_valid(const GraphSpec& spec) {
  ValidationResult r = validate_spec(spec);
  if (r.ok()) return *r.value;
  std::ostringstream os;
  for (size_t i = 0; i < r.violations.size(); ++i) {
    if (i) os << "; ";
    os << to_string(r.violations[i].kind);
    if (r.violations[i].index) os << "(" << r.violations[i].index << ")";
    os << " " << r.violations[i].message;
  }
  throw Error(ErrorKind::Validation, os.str());
}

std::vector<int> canonical_cyclic_form(std::span<const int> seq) {
  std::vector<int> best(seq.begin(), seq.end());
  const size_t n = seq.size();
  std::vector<int> rev(seq.rbegin(), seq.rend());
  std::vector<int> cand(n);
  for (const auto* src : {&best, &rev}) {
    const std::vector<int> base = *src;
    for (size_t r = 0; r < n; ++r) {
      for (size_t i = 0; i < n; ++i) cand[i] = base[(i + r) % n];
      if (cand < best) best = cand;
    }
  }
  return best;
}

std::vector<int> canonical_path_form(std::span<const int> seq) {
  std::vector<int> fwd(seq.begin(), seq.end());
  std::vector<int> rev(seq.rbegin(), seq.rend());
  return std::min(fwd, rev);
}

std::optional<std::vector<int>> ReebGraphResult::multiplicity_sequence() const {
  const int n = static_cast<int>(vertices.size());
  if (n == 0) return edges.empty() ? std::optional<std::vector<int>>(std::vector<int>{}) : std::nullopt;
  const int slots = mode == GraphMode::Circle ? n : n - 1;
  std::vector<int> counts(static_cast<size_t>(std::max(slots, 0)), 0);
  for (const auto& e : edges) {
    int lo = std::min(e.from, e.to), hi = std::max(e.from, e.to);
    if (hi == lo + 1) {
      ++counts[static_cast<size_t>(lo)];
    } else if (mode == GraphMode::Circle && lo == 0 && hi == n - 1 && n > 2) {
      ++counts[static_cast<size_t>(n - 1)];
    } else {
      return std::nullopt;
    }
  }
  return counts;
}

bool reeb_isomorphic(const GraphSpec& spec, const ReebGraphResult& result) {
  if (spec.mode != result.mode) return false;
  if (spec.mode == GraphMode::Circle && spec.vertices == 0)
    return result.no_vertex_circle && result.vertices.empty();
  if (result.no_vertex_circle) return false;
  if (static_cast<int>(result.vertices.size()) != spec.vertices) return false;
  auto seq = result.multiplicity_sequence();
  if (!seq) return false;
  if (spec.mode == GraphMode::Circle)
    return canonical_cyclic_form(*seq) == canonical_cyclic_form(spec.multiplicities);
  return canonical_path_form(*seq) == canonical_path_form(spec.multiplicities);
}

bool reeb_isomorphic(const ReebGraphResult& a, const ReebGraphResult& b) {
  if (a.mode != b.mode || a.no_vertex_circle != b.no_vertex_circle) return false;
  if (a.vertices.size() != b.vertices.size()) return false;
  auto sa = a.multiplicity_sequence(), sb = b.multiplicity_sequence();
  if (!sa || !sb) return false;
  if (a.mode == GraphMode::Circle) return canonical_cyclic_form(*sa) == canonical_cyclic_form(*sb);
  return canonical_path_form(*sa) == canonical_path_form(*sb);
}

Theorem1Report check_theorem1_conditions(const EmbeddedGraphDescription& g) {
  Theorem1Report rep;
  const int n = static_cast<int>(g.vertices.size());
  rep.degrees.assign(static_cast<size_t>(n), 0);
  std::vector<std::set<int>> sides(static_cast<size_t>(n));
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw Error(ErrorKind::Parse, "edge " + std::to_string(i) + " references a missing vertex");
    ++rep.degrees[static_cast<size_t>(e.from)];
    ++rep.degrees[static_cast<size_t>(e.to)];
    sides[static_cast<size_t>(e.from)].insert(e.from_side);
    sides[static_cast<size_t>(e.to)].insert(e.to_side);
    if (e.from == e.to) {
      rep.edge_sides_consistent = false;
      rep.findings.push_back("edge " + std::to_string(i) + " is a loop; edges must embed into the curve");
    } else if (e.from_side != -e.to_side || (e.from_side != 1 && e.from_side != -1)) {
      rep.edge_sides_consistent = false;
      rep.findings.push_back("edge " + std::to_string(i) + " is not a monotone arc (sides " +
                             std::to_string(e.from_side) + ", " + std::to_string(e.to_side) + ")");
    }
  }
  for (int v = 0; v < n; ++v) {
    const int d = rep.degrees[static_cast<size_t>(v)];
    if (d != 1 && d != 3) {
      rep.degrees_one_or_three = false;
      rep.findings.push_back("vertex " + std::to_string(v) + " has degree " + std::to_string(d));
    }
    if (d == 3 && sides[static_cast<size_t>(v)].size() < 2) {
      rep.degree_three_interior = false;
      rep.findings.push_back("vertex " + std::to_string(v) +
                             " has all incident edges on one angular side");
    }
  }
  std::map<mpq_class, int> seen;
  for (int v = 0; v < n; ++v) {
    const StructuredAngle ang(g.vertices[static_cast<size_t>(v)].angle);
    auto [it, inserted] = seen.emplace(ang.turns(), v);
    if (!inserted) {
      rep.vertex_angles_injective = false;
      rep.findings.push_back("vertices " + std::to_string(it->second) + " and " + std::to_string(v) +
                             " share the angle " + ang.str());
    }
  }
  return rep;
}

}  // namespace reebforge
