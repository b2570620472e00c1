#include "reebforge/pipeline.hpp"

#include "reebforge/error.hpp"
#include "reebforge/rational.hpp"
#include "reebforge/sampling.hpp"
#include "reebforge/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <numeric>

namespace reebforge {

namespace {

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

int removed_from_spec(const GraphSpec& s) {
  int n = 0;
  for (int a : s.multiplicities) n += a - 1;
  return n;
}

Json region_json(const RegionIdentityReport& r) {
  return {{"samples", r.samples},   {"compared", r.compared},   {"band_skipped", r.band_skipped},
          {"mismatches", r.mismatches}, {"undecided", r.undecided}, {"mpfr_fallbacks", r.fallbacks},
          {"band", sci(r.band)}};
}

}  // namespace

bool Certificate::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

LoadedModel load_model(const Json& model_doc, const Json& arrangement_doc, mpfr_prec_t prec) {
  if (!model_doc.is_object() || model_doc.value("format", "") != "reebforge-model")
    throw Error(ErrorKind::Parse, "model document lacks \"format\": \"reebforge-model\"");
  if (!model_doc.contains("spec")) throw Error(ErrorKind::Parse, "model document lacks \"spec\"");
  const GraphSpec spec = spec_from_json(model_doc.at("spec"));
  const ValidatedSpec valid = require_valid(spec);
  CircleArrangement arr = arrangement_from_json(arrangement_doc);

  LoadedModel out;
  auto& bad = out.inconsistencies;
  if (arr.mode != spec.mode) bad.push_back("arrangement mode differs from the input spec");
  if (arr.k != spec.vertices) bad.push_back("arrangement k differs from the input spec vertex count");
  if (arr.dimension != spec.dimension) bad.push_back("arrangement dimension differs from the input spec");
  if (arrangement_multiplicities(arrangement_doc) != spec.multiplicities)
    bad.push_back("arrangement multiplicities differ from the input spec");
  for (const auto& c : arr.circles)
    if (!c.is_removed() && (c.stage < 1 || c.stage > valid.stages()))
      bad.push_back("handle circle with stage outside 1.." + std::to_string(valid.stages()));
  if (!bad.empty()) {
    // The stages cannot be rebuilt from mismatched documents; keep the planar part.
    out.model.spec = spec;
    out.model.precision = prec;
    out.model.arrangement = std::move(arr);
    out.model.polynomial = us_construct(region_polynomial(out.model.arrangement, prec), spec.dimension - 1);
    return out;
  }
  out.model = assemble(valid, std::move(arr), prec);
  const auto& poly = out.model.polynomial;
  if (model_doc.value("degree", -1) != poly.degree()) bad.push_back("recorded degree differs from the rebuilt polynomial");
  if (model_doc.value("variables", -1) != poly.variables())
    bad.push_back("recorded variable count differs from the rebuilt polynomial");
  Json ell = Json::array();
  for (const auto& f : poly.factors())
    if (f.kind == FactorKind::Ellipsoid) ell.push_back({{"circle", f.circle}, {"stage", f.stage}});
  Json recorded = Json::array();
  for (const auto& e : model_doc.value("ellipsoids", Json::array()))
    recorded.push_back({{"circle", e.value("circle", -1)}, {"stage", e.value("stage", -1)}});
  if (ell != recorded) bad.push_back("recorded ellipsoids differ from the rebuilt stages");
  Json words = Json::array();
  for (const auto& f : out.model.fibers) words.push_back(f.word);
  Json recorded_words = Json::array();
  for (const auto& f : model_doc.value("fibers", Json::array())) recorded_words.push_back(f.value("word", ""));
  if (words != recorded_words) bad.push_back("recorded fiber words differ from the input spec");
  return out;
}

Certificate certify(const SynthesisResult& model, const CertifyOptions& opts,
                    const std::vector<std::string>& inconsistencies, const std::vector<int>& arrangement_mults) {
  Certificate cert;
  Json& body = cert.body;
  const auto& arr = model.arrangement;
  const mpfr_prec_t prec = model.precision;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    cert.checks.push_back({name, ok, detail});
  };
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      check(name, false, e.what());
    }
  };

  body["config"] = {{"precision_bits", static_cast<long>(prec)},
                    {"oracle_resolution", {opts.oracle_radial, opts.oracle_angular}},
                    {"seed", opts.seed},
                    {"region_samples", opts.region_samples},
                    {"staged_samples", opts.staged_samples},
                    {"zero_set_samples", opts.zero_samples}};
  body["spec"] = spec_to_json(model.spec);

  std::vector<std::string> incons = inconsistencies;
  if (!arrangement_mults.empty() && arrangement_mults != model.spec.multiplicities)
    incons.push_back("arrangement multiplicities differ from the input spec");
  check("documents_consistent", incons.empty(), incons.empty() ? "ok" : incons.front());
  body["inconsistencies"] = incons;

  const ValidationResult vr = validate_spec(model.spec);
  check("spec_valid", vr.ok(), vr.ok() ? "ok" : vr.violations.front().message);
  if (!vr.ok()) {
    body["violations"] = violations_to_json(vr.violations);
    body["checks"] = Json::array();
    for (const auto& c : cert.checks) body["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    body["passed"] = false;
    return cert;
  }
  const ValidatedSpec& spec = *vr.value;
  const int removed = removed_from_spec(model.spec);

  guarded("degree_law", [&] {
    const int d = model.polynomial.degree(), want = formula_degree(spec);
    body["degree"] = {{"polynomial", d}, {"formula", want}, {"variables", model.polynomial.variables()}};
    check("degree_law", d == want && model.polynomial.variables() == spec.dimension() + 1,
          std::to_string(d) + " vs " + std::to_string(want));
  });

  guarded("disjointness", [&] {
    const MarginReport m = margin_report(arr, prec);
    body["margins"] = {{"entries", m.entries.size()},
                       {"violations", m.violations.size()},
                       {"min_clearance", sci(m.entries.empty() ? 0.0 : m.min_clearance)},
                       {"min_relative", sci(m.entries.empty() ? 0.0 : m.min_relative)},
                       {"epsilon", format_rational(arr.epsilon)}};
    check("disjointness", m.ok(), m.ok() ? "min clearance " + sci(m.min_clearance) : "margin violation");
  });

  ReebGraphResult swept;
  bool have_sweep = false;
  guarded("realization", [&] {
    swept = sweep_reeb(arr, prec);
    have_sweep = true;
    body["reeb"] = reeb_to_json(swept);
    check("realization", reeb_isomorphic(model.spec, swept), "sweep graph against the prescribed graph");
  });

  guarded("oracle_equivalence", [&] {
    const ReebGraphResult oracle = brute_oracle_reeb(arr, opts.oracle_radial, opts.oracle_angular);
    const bool iso = have_sweep && reeb_isomorphic(swept, oracle);
    // Fiber words seen by the raster must match the swept ones as a multiset.
    std::vector<std::string> fa, fb;
    for (const auto& e : swept.edges) fa.push_back(e.fiber);
    for (const auto& e : oracle.edges) fb.push_back(e.fiber);
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    const bool fibers = !spec.has_handles() || fa == fb;
    body["oracle"] = {{"graph", reeb_to_json(oracle)}, {"isomorphic", iso}, {"fibers_match", fibers}};
    check("oracle_equivalence", iso && fibers, "grid oracle against the sweep");
  });

  guarded("morse", [&] {
    const SweepCertificate m = verify_morse(arr, prec);
    Json events = Json::array();
    for (const auto& e : m.events)
      events.push_back({{"position", format_rational(e.position)},
                        {"tangent", e.tangent},
                        {"fold", e.fold},
                        {"components", e.components}});
    body["morse"] = {{"events", events},
                     {"gap_components", m.gap_components},
                     {"tangencies", m.tangencies},
                     {"handle_tangencies", m.handle_tangencies},
                     {"saddles", m.saddles},
                     {"folds", m.folds},
                     {"expected_saddles", 2 * removed},
                     {"structural_angles", m.structural_angles},
                     {"numeric_angles", m.numeric_angles},
                     {"nondegenerate", m.nondegenerate}};
    const bool ok = m.saddles == 2 * removed && m.saddles == m.expected_saddles && m.structural_angles &&
                    m.numeric_angles && m.nondegenerate;
    check("morse", ok, std::to_string(m.saddles) + " saddles");
  });

  if (spec.dimension() == 2) {
    guarded("euler", [&] {
      const EulerReport e = euler_check(arr, prec);
      const long formula = (arr.mode == GraphMode::Circle ? 0 : 2) - 2L * removed;
      body["euler"] = {{"chi_morse", e.chi_morse},
                       {"chi_region", e.chi_region},
                       {"chi_double", e.chi_double},
                       {"chi_formula", formula}};
      check("euler", e.ok() && e.chi_morse == formula, "chi = " + std::to_string(e.chi_morse));
    });
  }

  if (spec.mode() == GraphMode::Circle && spec.vertex_count() > 0) {
    guarded("fiber_counts", [&] {
      const auto rows = fiber_counts_check(arr, spec, prec);
      Json table = Json::array();
      std::map<std::pair<int, int>, std::string> words;
      for (const auto& r : rows) {
        table.push_back({{"edge", {r.edge.sector, r.edge.channel}},
                         {"expected", r.expected},
                         {"counted", r.counted},
                         {"word", r.word}});
        words[{r.edge.sector, r.edge.channel}] = r.word;
      }
      body["fiber_counts"] = table;
      bool ok = true;
      for (const auto& f : model.fibers) ok = ok && words[{f.edge.sector, f.edge.channel}] == f.word;
      if (have_sweep)
        for (const auto& e : swept.edges) ok = ok && words[{e.sector, e.index}] == e.fiber;
      check("fiber_counts", ok, "per-channel handle crossings");
    });
  }

  guarded("region_identity", [&] {
    const auto r = region_identity(model, opts.region_samples, opts.seed);
    body["region_identity"] = region_json(r);
    check("region_identity", r.ok(), std::to_string(r.mismatches) + " mismatches");
  });

  if (spec.has_handles()) {
    guarded("staged_identity", [&] {
      const auto reps = staged_identity(model, opts.staged_samples, opts.seed);
      Json arrj = Json::array();
      bool ok = true;
      for (const auto& r : reps) {
        arrj.push_back(region_json(r));
        ok = ok && r.ok();
      }
      body["staged_identity"] = arrj;
      check("staged_identity", ok, std::to_string(reps.size()) + " stages");
    });
  }

  guarded("regularity", [&] {
    const auto r = regularity_check(model, opts.zero_samples, opts.seed);
    body["regularity"] = {{"samples", r.samples},
                          {"boundary", r.boundary},
                          {"interior", r.interior},
                          {"ellipsoid", r.ellipsoid},
                          {"off_zero_set", r.off_zero_set},
                          {"gradient_contains_zero", r.gradient_zero},
                          {"min_gradient", sci(r.min_gradient)}};
    check("regularity", r.ok(), std::to_string(r.gradient_zero) + " gradient enclosures contain 0");
  });

  body["checks"] = Json::array();
  for (const auto& c : cert.checks) body["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  body["passed"] = cert.passed();
  return cert;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

struct Svg {
  std::string out;
  void add(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    out += buf;
  }
};

}  // namespace

std::string render_svg(const CircleArrangement& arr, const ReebGraphResult& reeb, mpfr_prec_t prec) {
  Svg s;
  const double W = 720, H = 720;
  s.add("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n", W, H, W, H);
  s.add("<rect width=\"%.0f\" height=\"%.0f\" fill=\"#ffffff\"/>\n", W, H);
  const auto tangencies = tangency_events(arr, prec);
  if (arr.mode == GraphMode::Circle) {
    const double a = arr.a.get_d(), cx = W / 2, cy = H / 2, sc = 250.0 / (1 + a);
    auto X = [&](double x) { return cx + sc * x; };
    auto Y = [&](double y) { return cy - sc * y; };
    s.add("<path d=\"M %.3f %.3f a %.3f %.3f 0 1 0 %.3f 0 a %.3f %.3f 0 1 0 %.3f 0 Z M %.3f %.3f a %.3f %.3f 0 1 0 %.3f 0 "
          "a %.3f %.3f 0 1 0 %.3f 0 Z\" fill=\"#ecf0f1\" fill-rule=\"evenodd\" stroke=\"#2c3e50\" stroke-width=\"1.2\"/>\n",
          X(-(1 + a)), Y(0), sc * (1 + a), sc * (1 + a), 2 * sc * (1 + a), sc * (1 + a), sc * (1 + a),
          -2 * sc * (1 + a), X(-(1 - a)), Y(0), sc * (1 - a), sc * (1 - a), 2 * sc * (1 - a), sc * (1 - a),
          sc * (1 - a), -2 * sc * (1 - a));
    for (int j = 1; j <= arr.k; ++j) {
      const double th = 2 * M_PI * arr.vertex_position(j).get_d();
      s.add("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#7f8c8d\" stroke-width=\"0.8\" "
            "stroke-dasharray=\"4 3\"/>\n",
            X((1 - a) * std::cos(th)), Y((1 - a) * std::sin(th)), X((1 + a) * std::cos(th)), Y((1 + a) * std::sin(th)));
    }
    for (const auto& c : arr.circles) {
      const CircleNumeric n = circle_numeric(arr, c, prec);
      if (c.is_removed())
        s.add("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"#ffffff\" stroke=\"#c0392b\" stroke-width=\"1\"/>\n",
              X(n.cx.mid_double()), Y(n.cy.mid_double()), sc * n.r.mid_double());
      else
        s.add("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"none\" stroke=\"#2471a3\" stroke-width=\"1\" "
              "stroke-dasharray=\"3 2\"/>\n",
              X(n.cx.mid_double()), Y(n.cy.mid_double()), sc * n.r.mid_double());
    }
    for (const auto& t : tangencies)
      if (arr.circles[static_cast<size_t>(t.circle)].is_removed())
        s.add("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"2.5\" fill=\"#c0392b\"/>\n", X(t.px.mid_double()), Y(t.py.mid_double()));
    // Reeb graph on a circle outside the annulus.
    const double R = sc * (1 + a) + 55;
    if (reeb.no_vertex_circle)
      s.add("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1.5\"/>\n", cx, cy, R);
    std::map<std::pair<int, int>, int> mult, seen;
    for (const auto& e : reeb.edges) ++mult[{e.from, e.to}];
    for (const auto& e : reeb.edges) {
      const int m = mult[{e.from, e.to}], i = seen[{e.from, e.to}]++;
      const double rr = R + 9.0 * (i - (m - 1) / 2.0);
      double t0 = reeb.vertices[static_cast<size_t>(e.from)].position.get_d();
      double t1 = reeb.vertices[static_cast<size_t>(e.to)].position.get_d();
      if (t1 <= t0) t1 += 1.0;
      const int large = (t1 - t0) > 0.5 ? 1 : 0;
      s.add("<path d=\"M %.3f %.3f A %.3f %.3f 0 %d 0 %.3f %.3f\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1.5\"/>\n",
            cx + rr * std::cos(2 * M_PI * t0), cy - rr * std::sin(2 * M_PI * t0), rr, rr, large,
            cx + rr * std::cos(2 * M_PI * t1), cy - rr * std::sin(2 * M_PI * t1));
    }
    for (size_t v = 0; v < reeb.vertices.size(); ++v) {
      const double t = 2 * M_PI * reeb.vertices[v].position.get_d();
      s.add("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"#1e8449\"/>\n", cx + R * std::cos(t), cy - R * std::sin(t));
      s.add("<text x=\"%.3f\" y=\"%.3f\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">v%zu</text>\n",
            cx + (R + 28) * std::cos(t), cy - (R + 28) * std::sin(t) + 4, v + 1);
    }
  } else {
    const double A = arr.ellipse_a.get_d(), B = arr.ellipse_b.get_d();
    const double sc = std::min(300.0 / A, 220.0 / B), cx = W / 2, cy = 280;
    auto X = [&](double x) { return cx + sc * x; };
    auto Y = [&](double y) { return cy - sc * y; };
    s.add("<ellipse cx=\"%.3f\" cy=\"%.3f\" rx=\"%.3f\" ry=\"%.3f\" fill=\"#ecf0f1\" stroke=\"#2c3e50\" stroke-width=\"1.2\"/>\n",
          cx, cy, sc * A, sc * B);
    for (const auto& x : arr.vertex_x) {
      const double xv = x.get_d(), yv = B * std::sqrt(std::max(0.0, 1 - xv * xv / (A * A)));
      s.add("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#7f8c8d\" stroke-width=\"0.8\" "
            "stroke-dasharray=\"4 3\"/>\n",
            X(xv), Y(yv), X(xv), Y(-yv));
    }
    for (const auto& c : arr.circles)
      s.add("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"#ffffff\" stroke=\"#c0392b\" stroke-width=\"1\"/>\n",
            X(c.cx.get_d()), Y(c.cy.get_d()), sc * c.radius.get_d());
    for (const auto& t : tangencies)
      s.add("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"2.5\" fill=\"#c0392b\"/>\n", X(t.px.mid_double()), Y(t.py.mid_double()));
    const double gy = 620;
    std::map<std::pair<int, int>, int> mult, seen;
    for (const auto& e : reeb.edges) ++mult[{e.from, e.to}];
    for (const auto& e : reeb.edges) {
      const int m = mult[{e.from, e.to}], i = seen[{e.from, e.to}]++;
      const double x0 = X(reeb.vertices[static_cast<size_t>(e.from)].position.get_d());
      const double x1 = X(reeb.vertices[static_cast<size_t>(e.to)].position.get_d());
      s.add("<path d=\"M %.3f %.3f Q %.3f %.3f %.3f %.3f\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1.5\"/>\n", x0, gy,
            (x0 + x1) / 2, gy + 24.0 * (i - (m - 1) / 2.0), x1, gy);
    }
    for (size_t v = 0; v < reeb.vertices.size(); ++v) {
      const double x = X(reeb.vertices[v].position.get_d());
      s.add("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"#1e8449\"/>\n", x, gy);
      s.add("<text x=\"%.3f\" y=\"%.3f\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">v%zu</text>\n", x,
            gy - 14, v + 1);
    }
  }
  s.add("</svg>\n");
  return s.out;
}

}  // namespace reebforge
