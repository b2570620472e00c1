#include "support.hpp"

#include "reebforge/error.hpp"
#include "reebforge/poly.hpp"
#include "reebforge/sweep.hpp"

#include <doctest.h>

using namespace rft;

namespace {

constexpr mpfr_prec_t P = 128;

ErrorKind parse_kind(const std::string& text) {
  try {
    (void)spec_from_json(parse_json(text));
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("spec round trip") {
  GraphSpec s = handles(circle({2, 1, 2}), 5, {{{2, 1}, {1, 0}}});
  s.annulus_halfwidth = mpq_class(255, 256);
  s.precision_bits = 192;
  const Json j = spec_to_json(s);
  CHECK(j["vertices"] == 3);
  CHECK(j["handles"][0]["edge"] == Json::array({2, 1}));
  CHECK(j["annulus_halfwidth"] == "255/256");
  const GraphSpec back = spec_from_json(parse_json(dump_json(j)));
  CHECK(back.multiplicities == s.multiplicities);
  CHECK(back.handles == s.handles);
  CHECK(back.annulus_halfwidth == s.annulus_halfwidth);
  CHECK(back.precision_bits == s.precision_bits);
  CHECK(dump_json(spec_to_json(back)) == dump_json(j));
}

TEST_CASE("spec defaults") {
  const GraphSpec s = spec_from_json(parse_json(R"({"vertices": 3, "multiplicities": [2, 2, 2]})"));
  CHECK(s.mode == GraphMode::Circle);
  CHECK(s.dimension == 2);
  CHECK_FALSE(s.handles.has_value());
}

TEST_CASE("malformed specs") {
  CHECK(parse_kind("{") == ErrorKind::Parse);
  CHECK(parse_kind("[]") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"multiplicities": [2, 2, 2]})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"vertices": "3", "multiplicities": [2, 2, 2]})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"mode": "spiral", "vertices": 3, "multiplicities": [2, 2, 2]})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"vertices": 3, "multiplicities": [2, 2, 2], "dimension": 5,
    "handles": [{"edge": [1, 1], "sequence": [1, 0]}, {"edge": [1, 1], "sequence": [0, 1]}]})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"vertices": 3, "multiplicities": [2, 2, 2], "annulus_halfwidth": "a/b"})") == ErrorKind::Parse);
}

TEST_CASE("arrangement round trip") {
  for (const auto& [name, spec] : corpus()) {
    CAPTURE(name);
    const CircleArrangement arr = layout(require_valid(spec), P);
    const Json j = arrangement_to_json(arr, spec);
    const CircleArrangement back = arrangement_from_json(parse_json(dump_json(j)));
    CHECK(dump_json(arrangement_to_json(back, spec)) == dump_json(j));
    CHECK(arrangement_multiplicities(j) == spec.multiplicities);
    if (spec.mode == GraphMode::Circle) {
      CHECK(j["a"].is_string());
      for (const auto& c : j["circles"]) CHECK(c["d"].is_string());
    }
  }
}

TEST_CASE("arrangement documents are checked") {
  const GraphSpec s = circle({2, 2, 2});
  Json j = arrangement_to_json(layout(require_valid(s), P), s);
  Json bad = j;
  bad["circles"][0]["sector"] = 9;
  CHECK_THROWS_AS(arrangement_from_json(bad), Error);
  bad = j;
  bad["a"] = "3/2";
  CHECK_THROWS_AS(arrangement_from_json(bad), Error);
  bad = j;
  bad.erase("circles");
  CHECK_THROWS_AS(arrangement_from_json(bad), Error);
}

TEST_CASE("reeb graph document") {
  const auto arr = layout(require_valid(circle({2, 2, 1})), P);
  const Json j = reeb_to_json(sweep_reeb(arr, P));
  CHECK(j["no_vertex_circle"] == false);
  REQUIRE(j["vertices"].size() == 3);
  CHECK(j["vertices"][0]["angle"] == "1/3");
  CHECK(j["vertices"][1]["degree"] == 4);
  CHECK(j["edges"].size() == 5);
  for (const auto& e : j["edges"]) {
    CHECK(e["channel"].size() == 2);
    CHECK(e["fiber"] == "S^1");
  }
}

TEST_CASE("polynomial documents") {
  const auto m = synthesize(require_valid(circle({2, 2, 2})), P);
  const Json j = polynomial_to_json(m.polynomial, decimal_digits(P));
  CHECK(j["degree"] == 10);
  CHECK(j["variables"] == 3);
  CHECK(j["factors"].size() == 5);
  CHECK(j["factors"][0]["kind"] == "annulus_outer");
  CHECK(j["factors"][1]["kind"] == "annulus_inner");
  CHECK(j["steps"].back()["op"] == "subtract_squares");
  const Json x = expansion_to_json(expand(m.polynomial, P), decimal_digits(P));
  CHECK(x["ordering"] == "grlex");
  for (const auto& mono : x["monomials"]) CHECK(mono["coefficient"].is_string());
  CHECK(decimal_digits(128) == 39);
  CHECK(decimal_digits(53) == 16);
}

TEST_CASE("model document") {
  const auto m = synthesize(require_valid(handles(circle({2, 1, 2}), 5, {{{2, 1}, {1, 0}}})), P);
  const Json j = model_to_json(m);
  CHECK(j["format"] == "reebforge-model");
  CHECK(j["degree"] == 10);
  CHECK(j["variables"] == 6);
  CHECK(j["precision_bits"] == 128);
  CHECK(j["ellipsoids"].size() == 1);
  CHECK(j["ellipsoids"][0]["height"].is_string());
  bool found = false;
  for (const auto& f : j["fibers"])
    if (f["edge"] == Json::array({2, 1})) {
      CHECK(f["word"] == "S^1xS^3");
      found = true;
    }
  CHECK(found);
}

TEST_CASE("embedded graph documents") {
  const auto g = embedded_graph_from_json(parse_json(read_file(data_dir() / "graphs" / "pass_edge.json")));
  CHECK(g.vertices.size() == 2);
  CHECK(g.edges.size() == 1);
  const Json r = theorem1_to_json(check_theorem1_conditions(g));
  CHECK(r["passed"] == true);
  CHECK(r["lift_into_annulus"] == "not decided");
  CHECK_THROWS_AS(embedded_graph_from_json(parse_json(read_file(data_dir() / "graphs" / "malformed.json"))), Error);
  CHECK_THROWS_AS(embedded_graph_from_json(parse_json(R"({"vertices": [{"angle": "1/2"}], "edges": [{"from": 0, "to": 3}]})")),
                  Error);
  CHECK_THROWS_AS(embedded_graph_from_json(parse_json(
                      R"({"vertices": [{"angle": "1/4"}, {"angle": "1/2"}], "edges": [{"from": 0, "to": 1, "from_side": 2}]})")),
                  Error);
}

}  // TEST_SUITE
