#include "reebforge/serialize.hpp"

#include "reebforge/error.hpp"
#include "reebforge/rational.hpp"

#include <cmath>

namespace reebforge {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

int as_int(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) bad(std::string("field \"") + name + "\" must be an integer");
  return v.get<int>();
}

std::vector<int> as_int_list(const Json& v, const char* name) {
  if (!v.is_array()) bad(std::string("field \"") + name + "\" must be an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) bad(std::string("field \"") + name + "\" must be an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

mpq_class as_rational(const Json& v, const char* name) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  bad(std::string("field \"") + name + "\" must be a decimal or p/q string");
}

const char* mode_name(GraphMode m) { return m == GraphMode::Circle ? "circle" : "line"; }

GraphMode parse_mode(const Json& j) {
  if (!j.contains("mode")) return GraphMode::Circle;
  const Json& m = j.at("mode");
  if (m == "circle") return GraphMode::Circle;
  if (m == "line") return GraphMode::Line;
  bad("mode must be \"circle\" or \"line\"");
}

std::string interval_text(const BigInterval& v, int digits) { return v.mid_decimal(digits); }

}  // namespace

int decimal_digits(mpfr_prec_t prec) {
  return std::max(6, static_cast<int>(std::floor(static_cast<double>(prec) * std::log10(2.0))) + 1);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json spec_to_json(const GraphSpec& s) {
  Json j;
  j["mode"] = mode_name(s.mode);
  j["vertices"] = s.vertices;
  j["multiplicities"] = s.multiplicities;
  j["dimension"] = s.dimension;
  if (s.handles) {
    Json hs = Json::array();
    for (const auto& [e, seq] : *s.handles) hs.push_back({{"edge", {e.sector, e.channel}}, {"sequence", seq}});
    j["handles"] = hs;
  }
  if (s.annulus_halfwidth) j["annulus_halfwidth"] = format_rational(*s.annulus_halfwidth);
  if (s.precision_bits) j["precision_bits"] = *s.precision_bits;
  return j;
}

GraphSpec spec_from_json(const Json& j) {
  if (!j.is_object()) bad("spec must be a JSON object");
  GraphSpec s;
  s.mode = parse_mode(j);
  s.vertices = as_int(j, "vertices");
  s.multiplicities = as_int_list(field(j, "multiplicities"), "multiplicities");
  if (j.contains("dimension")) s.dimension = as_int(j, "dimension");
  if (j.contains("handles")) {
    const Json& hs = j.at("handles");
    if (!hs.is_array()) bad("handles must be an array");
    std::map<EdgeId, std::vector<int>> m;
    for (const auto& h : hs) {
      const auto edge = as_int_list(field(h, "edge"), "edge");
      if (edge.size() != 2) bad("handle edge must be [j, jprime]");
      if (!m.emplace(EdgeId{edge[0], edge[1]}, as_int_list(field(h, "sequence"), "sequence")).second)
        bad("duplicate handle edge");
    }
    s.handles = std::move(m);
  }
  if (j.contains("annulus_halfwidth")) s.annulus_halfwidth = as_rational(j.at("annulus_halfwidth"), "annulus_halfwidth");
  if (j.contains("precision_bits")) s.precision_bits = as_int(j, "precision_bits");
  return s;
}

Json arrangement_to_json(const CircleArrangement& arr, const GraphSpec& spec) {
  Json j;
  j["mode"] = mode_name(arr.mode);
  j["k"] = arr.k;
  j["dimension"] = arr.dimension;
  j["epsilon"] = format_rational(arr.epsilon);
  j["multiplicities"] = spec.multiplicities;
  if (arr.mode == GraphMode::Circle) {
    j["a"] = format_rational(arr.a);
  } else {
    j["ellipse"] = {{"a", format_rational(arr.ellipse_a)}, {"b", format_rational(arr.ellipse_b)}};
    Json xs = Json::array();
    for (const auto& x : arr.vertex_x) xs.push_back(format_rational(x));
    j["vertex_x"] = xs;
  }
  Json cs = Json::array();
  for (const auto& c : arr.circles) {
    Json o;
    o["sector"] = c.sector;
    if (c.is_removed()) {
      o["role"] = "removed_disk";
      o["chain_index"] = c.chain_index;
    } else {
      o["role"] = "handle";
      o["channel"] = c.channel;
      o["stage"] = c.stage;
      o["index"] = c.index;
    }
    if (arr.mode == GraphMode::Circle) {
      o["d"] = format_rational(c.d);
      o["slot"] = c.slot;
      o["angle"] = format_rational(StructuredAngle(arr.bisector(c.sector)).turns());
    } else {
      o["cx"] = format_rational(c.cx);
      o["cy"] = format_rational(c.cy);
      o["radius"] = format_rational(c.radius);
    }
    cs.push_back(o);
  }
  j["circles"] = cs;
  return j;
}

std::vector<int> arrangement_multiplicities(const Json& j) {
  return as_int_list(field(j, "multiplicities"), "multiplicities");
}

CircleArrangement arrangement_from_json(const Json& j) {
  if (!j.is_object()) bad("arrangement must be a JSON object");
  CircleArrangement arr;
  arr.mode = parse_mode(j);
  arr.k = as_int(j, "k");
  if (j.contains("dimension")) arr.dimension = as_int(j, "dimension");
  arr.epsilon = as_rational(field(j, "epsilon"), "epsilon");
  if (arr.epsilon <= 0) bad("epsilon must be positive");
  if (arr.mode == GraphMode::Circle) {
    arr.a = as_rational(field(j, "a"), "a");
    if (arr.a <= 0 || arr.a >= 1) bad("a must lie in (0,1)");
    if (arr.k != 0 && arr.k < 3) bad("k must be 0 or at least 3");
  } else {
    const Json& e = field(j, "ellipse");
    arr.a = 0;
    arr.ellipse_a = as_rational(field(e, "a"), "a");
    arr.ellipse_b = as_rational(field(e, "b"), "b");
    if (arr.ellipse_a <= 0 || arr.ellipse_b <= 0) bad("ellipse semi-axes must be positive");
    for (const auto& x : field(j, "vertex_x")) arr.vertex_x.push_back(as_rational(x, "vertex_x"));
    if (static_cast<int>(arr.vertex_x.size()) != arr.k) bad("vertex_x must list k abscissae");
  }
  for (const auto& o : field(j, "circles")) {
    PlacedCircle c;
    c.sector = as_int(o, "sector");
    const int limit = arr.mode == GraphMode::Circle ? arr.k : arr.k - 1;
    if (c.sector < 1 || c.sector > limit) bad("circle sector out of range");
    const Json& role = field(o, "role");
    if (role == "removed_disk") {
      c.role = CircleRole::RemovedDisk;
      c.chain_index = as_int(o, "chain_index");
    } else if (role == "handle") {
      c.role = CircleRole::Handle;
      c.channel = as_int(o, "channel");
      c.stage = as_int(o, "stage");
      c.index = as_int(o, "index");
    } else {
      bad("circle role must be \"removed_disk\" or \"handle\"");
    }
    if (arr.mode == GraphMode::Circle) {
      c.d = as_rational(field(o, "d"), "d");
      if (c.d <= 0) bad("circle distance must be positive");
      if (o.contains("slot")) c.slot = as_int(o, "slot");
    } else {
      c.cx = as_rational(field(o, "cx"), "cx");
      c.cy = as_rational(field(o, "cy"), "cy");
      c.radius = as_rational(field(o, "radius"), "radius");
      if (c.radius <= 0) bad("circle radius must be positive");
    }
    arr.circles.push_back(std::move(c));
  }
  return arr;
}

Json reeb_to_json(const ReebGraphResult& r) {
  Json j;
  j["mode"] = mode_name(r.mode);
  j["no_vertex_circle"] = r.no_vertex_circle;
  Json vs = Json::array();
  for (const auto& v : r.vertices) {
    Json o;
    o[r.mode == GraphMode::Circle ? "angle" : "abscissa"] = format_rational(v.position);
    o["degree"] = v.degree;
    o["left"] = v.left;
    o["right"] = v.right;
    vs.push_back(o);
  }
  j["vertices"] = vs;
  Json es = Json::array();
  for (const auto& e : r.edges)
    es.push_back({{"channel", {e.sector, e.index}},
                  {"from", e.from},
                  {"to", e.to},
                  {"fiber", e.fiber},
                  {"stage_counts", e.stage_counts}});
  j["edges"] = es;
  return j;
}

Json polynomial_to_json(const FactoredPolynomial& f, int digits) {
  Json j;
  j["variables"] = f.variables();
  j["degree"] = f.factors().empty() ? 0 : f.degree();
  j["digits"] = digits;
  Json fs = Json::array();
  for (const auto& fac : f.factors()) {
    Json o;
    o["kind"] = to_string(fac.kind);
    o["constant"] = interval_text(fac.constant, digits);
    Json terms = Json::array();
    for (size_t i = 0; i < fac.vars.size(); ++i)
      terms.push_back({{"variable", fac.vars[i] + 1},
                       {"weight", interval_text(fac.weight[i], digits)},
                       {"center", interval_text(fac.center[i], digits)}});
    o["terms"] = terms;
    if (fac.circle >= 0) o["circle"] = fac.circle;
    if (fac.kind == FactorKind::Ellipsoid) {
      o["stage"] = fac.stage;
      o["height"] = format_rational(fac.height);
    }
    fs.push_back(o);
  }
  j["factors"] = fs;
  Json steps = Json::array();
  for (const auto& st : f.steps()) {
    if (st.subtract) {
      Json vars = Json::array();
      for (int i = st.begin; i < st.begin + st.count; ++i) vars.push_back(i + 1);
      steps.push_back({{"op", "subtract_squares"}, {"variables", vars}});
    } else {
      steps.push_back({{"op", "multiply"}, {"factor", st.factor}});
    }
  }
  j["steps"] = steps;
  return j;
}

Json expansion_to_json(const ExpandedPolynomial& e, int digits) {
  Json ms = Json::array();
  for (const auto& m : e.monomials)
    ms.push_back({{"exponents", m.exponents},
                  {"coefficient", m.coefficient.mid_decimal(digits)},
                  {"radius", m.coefficient.radius_decimal()}});
  return {{"ordering", "grlex"}, {"monomials", ms}, {"variables", e.variables}};
}

Json model_to_json(const SynthesisResult& m) {
  Json j;
  j["format"] = "reebforge-model";
  j["spec"] = spec_to_json(m.spec);
  j["variables"] = m.polynomial.variables();
  j["degree"] = m.polynomial.degree();
  j["precision_bits"] = static_cast<long>(m.precision);
  j["polynomial"] = polynomial_to_json(m.polynomial, decimal_digits(m.precision));
  Json fibers = Json::array();
  for (const auto& f : m.fibers)
    fibers.push_back({{"edge", {f.edge.sector, f.edge.channel}}, {"sequence", f.sequence}, {"word", f.word}});
  j["fibers"] = fibers;
  Json ell = Json::array();
  for (const auto& f : m.polynomial.factors())
    if (f.kind == FactorKind::Ellipsoid)
      ell.push_back({{"circle", f.circle}, {"stage", f.stage}, {"height", format_rational(f.height)}});
  j["ellipsoids"] = ell;
  return j;
}

Json extension_to_json(const ExtensionArtifact& e, const SynthesisResult& m) {
  Json j;
  j["inequality"] = e.inequality;
  j["region"] = e.region;
  j["map"] = e.map;
  j["variables"] = e.variables;
  j["degree"] = e.degree;
  j["restriction_nonsingular"] = e.restriction_nonsingular_claimed ? "claimed" : "unknown";
  j["boundary"] = "{P = 0}, the synthesized manifold";
  j["polynomial"] = polynomial_to_json(m.polynomial, decimal_digits(m.precision));
  return j;
}

EmbeddedGraphDescription embedded_graph_from_json(const Json& j) {
  EmbeddedGraphDescription g;
  for (const auto& v : field(j, "vertices")) g.vertices.push_back({as_rational(field(v, "angle"), "angle")});
  for (const auto& e : field(j, "edges")) {
    EmbeddedEdge edge;
    edge.from = as_int(e, "from");
    edge.to = as_int(e, "to");
    if (e.contains("from_side")) edge.from_side = as_int(e, "from_side");
    if (e.contains("to_side")) edge.to_side = as_int(e, "to_side");
    if (std::abs(edge.from_side) != 1 || std::abs(edge.to_side) != 1) bad("edge sides must be +1 or -1");
    const int n = static_cast<int>(g.vertices.size());
    if (edge.from < 0 || edge.from >= n || edge.to < 0 || edge.to >= n) bad("edge endpoint out of range");
    g.edges.push_back(edge);
  }
  return g;
}

Json theorem1_to_json(const Theorem1Report& r) {
  return {{"degrees_one_or_three", r.degrees_one_or_three},
          {"vertex_angles_injective", r.vertex_angles_injective},
          {"degree_three_interior", r.degree_three_interior},
          {"edge_sides_consistent", r.edge_sides_consistent},
          {"lift_into_annulus", "not decided"},
          {"degrees", r.degrees},
          {"findings", r.findings},
          {"passed", r.passed()}};
}

Json violations_to_json(const std::vector<Violation>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back({{"kind", to_string(x.kind)}, {"index", x.index}, {"message", x.message}});
  return out;
}

}  // namespace reebforge
