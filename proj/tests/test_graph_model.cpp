#include "support.hpp"

#include <doctest.h>

using namespace rft;

namespace {

bool has(const ValidationResult& r, ViolationKind k, int index = -1) {
  for (const auto& v : r.violations)
    if (v.kind == k && (index < 0 || v.index == index)) return true;
  return false;
}

std::vector<int> rotate(std::vector<int> v, size_t r) {
  std::rotate(v.begin(), v.begin() + static_cast<long>(r % v.size()), v.end());
  return v;
}

}  // namespace

TEST_SUITE("graph_model") {

TEST_CASE("cycle specs") {
  CHECK(validate_cycle_spec(circle({2, 2, 2})).ok());
  const auto empty = validate_cycle_spec(circle({}));
  REQUIRE(empty.ok());
  CHECK(empty.value->no_vertex_circle());
  const auto bad = validate_cycle_spec(circle({1, 2, 1}));
  CHECK_FALSE(bad.ok());
  CHECK(has(bad, ViolationKind::AdjacentUnitPair, 3));
  CHECK(has(validate_cycle_spec(circle({2, 2})), ViolationKind::TooFewVertices));
  CHECK(has(validate_cycle_spec(circle({2, 0, 2})), ViolationKind::NonPositiveMultiplicity));
  GraphSpec mismatch = circle({2, 2, 2});
  mismatch.vertices = 4;
  CHECK(has(validate_cycle_spec(mismatch), ViolationKind::LengthMismatch));
  CHECK(has(validate_cycle_spec(circle({2, 2, 2}, 1)), ViolationKind::DimensionTooSmall));
}

TEST_CASE("handle specs") {
  CHECK(validate_handle_spec(handles(circle({2, 1, 2}), 5, {{{2, 1}, {1, 0}}})).ok());
  const auto zero = validate_handle_spec(handles(circle({1, 1, 2}), 5, {{{1, 1}, {0, 0}}, {{2, 1}, {0, 0}}}));
  CHECK(has(zero, ViolationKind::AllZeroUnitPair, 1));
  // m = 4 gives sequences of length 1.
  CHECK(has(validate_handle_spec(handles(circle({2, 2, 2}), 4, {{{1, 1}, {1, 0}}})), ViolationKind::WrongSequenceLength));
  CHECK(validate_handle_spec(handles(circle({1, 1, 2}), 4, {{{1, 1}, {1}}})).ok());
  CHECK(has(validate_handle_spec(handles(circle({2, 2, 2}), 5, {{{1, 3}, {1, 0}}})), ViolationKind::InvalidHandleEdge));
  CHECK(has(validate_handle_spec(handles(circle({2, 2, 2}), 5, {{{1, 1}, {-1, 0}}})), ViolationKind::NegativeHandleCount));
  CHECK(has(validate_handle_spec(handles(circle({2, 2, 2}), 2, {})), ViolationKind::DimensionTooSmall));
  CHECK(has(validate_spec(handles(line({1, 2, 1}), 5, {})), ViolationKind::HandlesRequireCircleMode));
}

TEST_CASE("handle sequence defaults to zeros") {
  const auto r = validate_spec(handles(circle({2, 1, 2}), 7, {{{2, 1}, {1, 0, 3}}}));
  REQUIRE(r.ok());
  CHECK(r.value->stages() == 3);
  CHECK(r.value->handle_sequence(2, 1) == std::vector<int>{1, 0, 3});
  CHECK(r.value->handle_sequence(1, 2) == std::vector<int>{0, 0, 0});
}

TEST_CASE("line specs") {
  CHECK(validate_line_spec(line({1, 2, 1})).ok());
  CHECK(validate_line_spec(line({1, 3, 2, 1})).ok());
  CHECK(has(validate_line_spec(line({1, 1, 1})), ViolationKind::AdjacentUnitPair));
  CHECK(has(validate_line_spec(line({2, 2})), ViolationKind::EndVertexDegree));
}

TEST_CASE("canonical cyclic form") {
  CHECK(canonical_cyclic_form(std::vector<int>{2, 2, 2}) == std::vector<int>{2, 2, 2});
  CHECK(canonical_cyclic_form(std::vector<int>{3, 1, 2}) == std::vector<int>{1, 2, 3});
  CHECK(canonical_cyclic_form(std::vector<int>{2, 1, 2}) == std::vector<int>{1, 2, 2});
  CHECK(canonical_path_form(std::vector<int>{1, 3, 2, 1}) == std::vector<int>{1, 2, 3, 1});
}

TEST_CASE("canonical form is invariant under rotation and reflection") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 10), val(1, 5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> a(static_cast<size_t>(len(rng)));
    for (auto& x : a) x = val(rng);
    const auto c = canonical_cyclic_form(a);
    std::vector<int> rev(a.rbegin(), a.rend());
    CHECK(canonical_cyclic_form(rev) == c);
    for (size_t r = 0; r < a.size(); ++r) {
      CHECK(canonical_cyclic_form(rotate(a, r)) == c);
      CHECK(validate_spec(circle(rotate(a, r))).ok() == validate_spec(circle(a)).ok());
    }
  }
}

TEST_CASE("isomorphism against swept graphs") {
  ReebGraphResult r;
  r.mode = GraphMode::Circle;
  for (int j = 1; j <= 3; ++j) r.vertices.push_back({mpq_class(j, 3), 4, 2, 2});
  for (int j = 0; j < 3; ++j)
    for (int c = 1; c <= 2; ++c) r.edges.push_back({j + 1, c, j, (j + 1) % 3, {}, "S^1"});
  CHECK(reeb_isomorphic(circle({2, 2, 2}), r));
  CHECK_FALSE(reeb_isomorphic(circle({2, 2, 1}), r));
  ReebGraphResult round;
  round.no_vertex_circle = true;
  CHECK(reeb_isomorphic(circle({}), round));
  CHECK_FALSE(reeb_isomorphic(circle({2, 2, 2}), round));
  CHECK(reeb_isomorphic(r, r));
}

TEST_CASE("conditions on a graph mapped into the circle") {
  EmbeddedGraphDescription g;
  g.vertices = {{mpq_class(1, 4)}, {mpq_class(1, 2)}};
  g.edges = {{0, 1, 1, -1}};
  const auto ok = check_theorem1_conditions(g);
  CHECK(ok.passed());
  CHECK(ok.degrees == std::vector<int>{1, 1});

  EmbeddedGraphDescription star;
  star.vertices = {{mpq_class(1, 8)}, {mpq_class(1, 4)}, {mpq_class(3, 8)}, {mpq_class(1, 2)}};
  star.edges = {{0, 1, 1, -1}, {0, 2, 1, -1}, {0, 3, 1, -1}};
  const auto one_sided = check_theorem1_conditions(star);
  CHECK_FALSE(one_sided.passed());
  CHECK_FALSE(one_sided.degree_three_interior);
  CHECK(one_sided.degrees_one_or_three);

  EmbeddedGraphDescription same;
  same.vertices = {{mpq_class(1, 4)}, {mpq_class(1, 4)}};
  same.edges = {{0, 1, 1, -1}};
  const auto clash = check_theorem1_conditions(same);
  CHECK_FALSE(clash.passed());
  CHECK_FALSE(clash.vertex_angles_injective);
}

}  // TEST_SUITE
