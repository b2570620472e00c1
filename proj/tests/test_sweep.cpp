#include "support.hpp"

#include "reebforge/error.hpp"
#include "reebforge/poly.hpp"
#include "reebforge/sweep.hpp"

#include <doctest.h>

using namespace rft;

namespace {

constexpr mpfr_prec_t P = 128;

CircleArrangement arrangement(const GraphSpec& s) { return layout(require_valid(s), P); }

std::vector<int> degrees(const ReebGraphResult& r) {
  std::vector<int> d;
  for (const auto& v : r.vertices) d.push_back(v.degree);
  return d;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("pure annulus") {
  const auto arr = arrangement(circle({}));
  CHECK(sweep_reeb(arr, P).no_vertex_circle);
  CHECK(brute_oracle_reeb(arr, 256, 128).no_vertex_circle);
  const SweepCertificate c = verify_morse(arr, P);
  CHECK(c.saddles == 0);
  CHECK(c.events.empty());
  CHECK(euler_check(arr, P).chi_morse == 0);
  CHECK(euler_check(arr, P).chi_region == 0);
}

TEST_CASE("(2,2,2)") {
  const auto arr = arrangement(circle({2, 2, 2}));
  const ReebGraphResult r = sweep_reeb(arr, P);
  REQUIRE(r.vertices.size() == 3);
  CHECK(r.vertices[0].position == mpq_class(1, 3));
  CHECK(r.vertices[1].position == mpq_class(2, 3));
  CHECK(r.vertices[2].position == 1);
  CHECK(r.multiplicity_sequence() == std::vector<int>{2, 2, 2});
  CHECK(degrees(r) == std::vector<int>{4, 4, 4});
  CHECK(reeb_isomorphic(circle({2, 2, 2}), r));
  CHECK(reeb_isomorphic(r, brute_oracle_reeb(arr, 2048, 512)));

  const SweepCertificate c = verify_morse(arr, P);
  CHECK(c.saddles == 6);
  CHECK(c.events.size() == 3);
  for (const auto& e : c.events) CHECK(e.tangent.size() == 2);
  CHECK(c.structural_angles);
  CHECK(c.numeric_angles);
  CHECK(c.nondegenerate);

  const EulerReport e = euler_check(arr, P);
  CHECK(e.chi_morse == -6);
  CHECK(e.chi_double == -6);
}

TEST_CASE("(2,2,1) vertex degrees") {
  const auto arr = arrangement(circle({2, 2, 1}));
  const ReebGraphResult r = sweep_reeb(arr, P);
  CHECK(degrees(r) == std::vector<int>{3, 4, 3});
  CHECK(euler_check(arr, P).chi_morse == -4);
  CHECK(reeb_isomorphic(r, brute_oracle_reeb(arr, 2048, 512)));
}

TEST_CASE("(2,1,2) oracle") {
  const auto arr = arrangement(circle({2, 1, 2}));
  CHECK(reeb_isomorphic(circle({2, 1, 2}), brute_oracle_reeb(arr, 2048, 512)));
}

TEST_CASE("oracle resolution floor") {
  const auto arr = arrangement(circle({2, 2, 2}));
  CHECK_THROWS_AS(brute_oracle_reeb(arr, 32, 512), Error);
}

TEST_CASE("a vertex without tangency") {
  // (2,1,1) with validation bypassed: vertex 3 sits between two unit edges.
  CircleArrangement arr;
  arr.k = 3;
  arr.a = mpq_class(7, 8);
  PlacedCircle c;
  c.sector = 1;
  c.chain_index = 1;
  c.d = 1;
  arr.circles.push_back(c);
  try {
    verify_morse(arr, P);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingSingularAngle);
  }
}

TEST_CASE("level components per sector") {
  const GraphSpec s = circle({3, 1, 3, 2});
  const auto arr = arrangement(s);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> num(1, 999);
  for (int j = 1; j <= 4; ++j)
    for (int i = 0; i < 8; ++i) {
      const mpq_class pos = mpq_class(j, 4) + mpq_class(num(rng), 4000);
      CHECK(slice_at(arr, pos, P).components() == s.multiplicities[static_cast<size_t>(j - 1)]);
    }
}

TEST_CASE("saddle and Euler laws on random specs") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 15; ++i) {
    const GraphSpec s = random_cycle(rng, 3, 8, 4);
    int removed = 0;
    for (int x : s.multiplicities) removed += x - 1;
    const auto arr = arrangement(s);
    const SweepCertificate c = verify_morse(arr, P);
    CHECK(c.saddles == 2 * removed);
    const EulerReport e = euler_check(arr, P);
    CHECK(e.chi_morse == -2 * removed);
    CHECK(e.chi_double == -2 * removed);
    CHECK(reeb_isomorphic(s, sweep_reeb(arr, P)));
  }
}

TEST_CASE("sweep does not depend on precision") {
  for (const auto& [name, spec] : corpus()) {
    CAPTURE(name);
    const auto arr = arrangement(spec);
    CHECK(dump_json(reeb_to_json(sweep_reeb(arr, 128))) == dump_json(reeb_to_json(sweep_reeb(arr, 256))));
  }
}

TEST_CASE("line mode") {
  const auto arr = arrangement(line({1, 2, 1}));
  const ReebGraphResult r = sweep_reeb(arr, P);
  CHECK(degrees(r) == std::vector<int>{1, 3, 3, 1});
  CHECK(r.vertices.front().position == -3);
  CHECK(r.vertices.back().position == 3);
  CHECK(reeb_isomorphic(line({1, 2, 1}), r));
  CHECK(reeb_isomorphic(r, brute_oracle_reeb(arr, 512, 512)));
  const SweepCertificate c = verify_morse(arr, P);
  CHECK(c.folds == 2);
  CHECK(c.saddles == 2);
  CHECK(euler_check(arr, P).chi_morse == 0);
}

TEST_CASE("fiber counts") {
  const auto spec = require_valid(handles(circle({2, 1, 2}), 5, {{{2, 1}, {1, 0}}}));
  const auto arr = layout(spec, P);
  const auto rows = fiber_counts_check(arr, spec, P);
  int seen = 0;
  for (const auto& r : rows) {
    CHECK(r.ok());
    if (r.edge.sector == 2 && r.edge.channel == 1) {
      CHECK(r.counted == std::vector<int>{1, 0});
      CHECK(r.word == "S^1xS^3");
      ++seen;
    } else {
      CHECK(r.word == "S^4");
    }
  }
  CHECK(seen == 1);

  const auto zeros = require_valid(handles(circle({2, 2, 2}), 5, {{{1, 1}, {0, 0}}}));
  for (const auto& r : fiber_counts_check(layout(zeros, P), zeros, P)) CHECK(r.word == "S^4");

  const auto two = require_valid(handles(circle({2, 2, 2}), 3, {{{3, 2}, {2}}}));
  for (const auto& r : fiber_counts_check(layout(two, P), two, P))
    if (r.edge.sector == 3 && r.edge.channel == 2) CHECK(r.counted == std::vector<int>{2});
}

TEST_CASE("fiber counts catch a displaced handle") {
  const auto spec = require_valid(handles(circle({2, 2, 2}), 3, {{{1, 1}, {1}}}));
  CircleArrangement arr = layout(spec, P);
  for (auto& c : arr.circles)
    if (!c.is_removed()) c.channel = 2, c.sector = 2;
  CHECK_THROWS_AS(fiber_counts_check(arr, spec, P), Error);
}

TEST_CASE("rescued unit pairs become vertices") {
  const GraphSpec s = handles(circle({1, 1, 2}), 4, {{{1, 1}, {1}}});
  const auto arr = arrangement(s);
  const ReebGraphResult r = sweep_reeb(arr, P);
  CHECK(r.vertices.size() == 3);
  CHECK(reeb_isomorphic(s, r));
  const ReebGraphResult o = brute_oracle_reeb(arr, 2048, 512);
  CHECK(reeb_isomorphic(r, o));
  const SweepCertificate c = verify_morse(arr, P);
  CHECK(c.saddles == 2);
  CHECK(c.handle_tangencies == 2);
}

TEST_CASE("handle specs realize the prescribed graph") {
  std::mt19937_64 rng(31);
  for (int m : {3, 4, 5, 7})
    for (int i = 0; i < 3; ++i) {
      const GraphSpec s = random_handle_spec(rng, m);
      const auto arr = arrangement(s);
      const ReebGraphResult r = sweep_reeb(arr, P);
      CHECK(reeb_isomorphic(s, r));
      CHECK(reeb_isomorphic(r, brute_oracle_reeb(arr, 2048, 512)));
    }
}

}  // TEST_SUITE
