#include "reebforge/reebforge.h"

#include "reebforge/error.hpp"
#include "reebforge/pipeline.hpp"
#include "reebforge/serialize.hpp"
#include "reebforge/sweep.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

using namespace reebforge;

struct rf_model {
  SynthesisResult model;
  std::vector<std::string> inconsistencies;
  std::vector<int> arrangement_multiplicities;
};

namespace {

thread_local std::string g_last_error;

constexpr int kMinPrecision = 53;
constexpr int kMaxPrecision = 4096;

rf_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return RF_ERR_PARSE;
    case ErrorKind::Validation: return RF_ERR_VALIDATION;
    case ErrorKind::Packing:
    case ErrorKind::MarginViolation: return RF_ERR_PACKING;
    case ErrorKind::HeightFailure:
    case ErrorKind::DegenerateEvent:
    case ErrorKind::MissingSingularAngle:
    case ErrorKind::EulerMismatch:
    case ErrorKind::CountMismatch:
    case ErrorKind::ResolutionTooCoarse: return RF_ERR_CERTIFICATION;
    case ErrorKind::ExpansionTooLarge: return RF_ERR_EXPANSION_TOO_LARGE;
    case ErrorKind::InvalidArgument: return RF_ERR_INVALID_ARGUMENT;
    case ErrorKind::NoFactors: return RF_ERR_INTERNAL;
  }
  return RF_ERR_INTERNAL;
}

template <class Fn>
rf_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return RF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RF_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorKind::InvalidArgument, std::string(what) + " is null");
}

rf_options defaults() {
  rf_options o;
  rf_options_init(&o);
  return o;
}

mpfr_prec_t resolve_precision(const rf_options& o, const GraphSpec& spec) {
  long bits = 128;
  if (o.precision_bits > 0) {
    bits = o.precision_bits;
  } else if (spec.precision_bits) {
    bits = *spec.precision_bits;
  } else if (const char* env = std::getenv("REEBFORGE_PRECISION"); env && *env) {
    char* end = nullptr;
    bits = std::strtol(env, &end, 10);
    if (*end) throw Error(ErrorKind::InvalidArgument, std::string("REEBFORGE_PRECISION is not an integer: ") + env);
  }
  if (bits < kMinPrecision || bits > kMaxPrecision)
    throw Error(ErrorKind::InvalidArgument, "precision must lie in [53, 4096] bits, got " + std::to_string(bits));
  return static_cast<mpfr_prec_t>(bits);
}

CertifyOptions certify_options(const rf_options& o) {
  if (o.oracle_radial < 64 || o.oracle_angular < 64)
    throw Error(ErrorKind::InvalidArgument, "oracle resolution must be at least 64x64");
  if (o.region_samples < 1 || o.staged_samples < 1 || o.zero_samples < 1)
    throw Error(ErrorKind::InvalidArgument, "sample counts must be positive");
  CertifyOptions c;
  c.oracle_radial = o.oracle_radial;
  c.oracle_angular = o.oracle_angular;
  c.seed = o.seed;
  c.region_samples = o.region_samples;
  c.staged_samples = o.staged_samples;
  c.zero_samples = o.zero_samples;
  return c;
}

}  // namespace

extern "C" {

void rf_options_init(rf_options* opts) {
  if (!opts) return;
  const CertifyOptions c;
  opts->precision_bits = 0;
  opts->oracle_radial = c.oracle_radial;
  opts->oracle_angular = c.oracle_angular;
  opts->seed = c.seed;
  opts->region_samples = c.region_samples;
  opts->staged_samples = c.staged_samples;
  opts->zero_samples = c.zero_samples;
}

rf_status rf_validate_spec(const char* spec_json, char** report) {
  return guard([&] {
    need(spec_json, "spec_json");
    need(report, "report");
    *report = nullptr;
    const GraphSpec spec = spec_from_json(parse_json(spec_json));
    const ValidationResult r = validate_spec(spec);
    Json j = {{"valid", r.ok()}, {"violations", violations_to_json(r.violations)}};
    if (r.ok()) j["spec"] = spec_to_json(spec);
    *report = dup(dump_json(j));
  });
}

rf_status rf_synthesize(const char* spec_json, const rf_options* opts, rf_model** out) {
  return guard([&] {
    need(spec_json, "spec_json");
    need(out, "out");
    *out = nullptr;
    const rf_options o = opts ? *opts : defaults();
    const GraphSpec spec = spec_from_json(parse_json(spec_json));
    const ValidatedSpec valid = require_valid(spec);
    auto* m = new rf_model;
    try {
      m->model = synthesize(valid, resolve_precision(o, spec));
    } catch (...) {
      delete m;
      throw;
    }
    *out = m;
  });
}

rf_status rf_model_load(const char* model_json, const char* arrangement_json, const rf_options* opts,
                        rf_model** out) {
  return guard([&] {
    need(model_json, "model_json");
    need(arrangement_json, "arrangement_json");
    need(out, "out");
    *out = nullptr;
    const rf_options o = opts ? *opts : defaults();
    const Json model_doc = parse_json(model_json);
    const Json arr_doc = parse_json(arrangement_json);
    if (!model_doc.is_object() || !model_doc.contains("spec")) throw Error(ErrorKind::Parse, "model document lacks \"spec\"");
    const mpfr_prec_t prec = resolve_precision(o, spec_from_json(model_doc.at("spec")));
    LoadedModel loaded = load_model(model_doc, arr_doc, prec);
    auto* m = new rf_model;
    m->model = std::move(loaded.model);
    m->inconsistencies = std::move(loaded.inconsistencies);
    m->arrangement_multiplicities = arrangement_multiplicities(arr_doc);
    *out = m;
  });
}

rf_status rf_model_certify(const rf_model* model, const rf_options* opts, char** certificate, int* passed) {
  return guard([&] {
    need(model, "model");
    need(certificate, "certificate");
    *certificate = nullptr;
    if (passed) *passed = 0;
    const rf_options o = opts ? *opts : defaults();
    const Certificate c = certify(model->model, certify_options(o), model->inconsistencies,
                                  model->arrangement_multiplicities);
    *certificate = dup(dump_json(c.body));
    if (passed) *passed = c.passed() ? 1 : 0;
  });
}

rf_status rf_model_render(const rf_model* model, rf_artifact what, char** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = nullptr;
    const SynthesisResult& m = model->model;
    const int digits = decimal_digits(m.precision);
    switch (what) {
      case RF_MODEL_JSON: *out = dup(dump_json(model_to_json(m))); break;
      case RF_ARRANGEMENT_JSON: *out = dup(dump_json(arrangement_to_json(m.arrangement, m.spec))); break;
      case RF_REEB_JSON: *out = dup(dump_json(reeb_to_json(sweep_reeb(m.arrangement, m.precision)))); break;
      case RF_POLY_JSON: *out = dup(dump_json(polynomial_to_json(m.polynomial, digits))); break;
      case RF_POLY_EXPANDED_JSON:
        *out = dup(dump_json(expansion_to_json(expand(m.polynomial, m.precision), digits)));
        break;
      case RF_POLY_TEXT: *out = dup(to_text(m.polynomial, digits) + "\n"); break;
      case RF_EXTENSION_JSON: *out = dup(dump_json(extension_to_json(nonsingular_extension(m), m))); break;
      case RF_SVG: *out = dup(render_svg(m.arrangement, sweep_reeb(m.arrangement, m.precision), m.precision)); break;
      default: throw Error(ErrorKind::InvalidArgument, "unknown artifact " + std::to_string(static_cast<int>(what)));
    }
  });
}

int rf_model_degree(const rf_model* model) {
  if (!model) return -1;
  try {
    return model->model.polynomial.degree();
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return -1;
  }
}

int rf_model_variables(const rf_model* model) { return model ? model->model.polynomial.variables() : -1; }

int rf_model_precision(const rf_model* model) { return model ? static_cast<int>(model->model.precision) : -1; }

void rf_model_free(rf_model* model) { delete model; }

rf_status rf_arrangement_svg(const char* arrangement_json, const rf_options* opts, char** svg) {
  return guard([&] {
    need(arrangement_json, "arrangement_json");
    need(svg, "svg");
    *svg = nullptr;
    const rf_options o = opts ? *opts : defaults();
    const CircleArrangement arr = arrangement_from_json(parse_json(arrangement_json));
    const mpfr_prec_t prec = resolve_precision(o, GraphSpec{});
    *svg = dup(render_svg(arr, sweep_reeb(arr, prec), prec));
  });
}

rf_status rf_check_graph(const char* graph_json, char** report, int* passed) {
  return guard([&] {
    need(graph_json, "graph_json");
    need(report, "report");
    *report = nullptr;
    const Theorem1Report r = check_theorem1_conditions(embedded_graph_from_json(parse_json(graph_json)));
    *report = dup(dump_json(theorem1_to_json(r)));
    if (passed) *passed = r.passed() ? 1 : 0;
  });
}

const char* rf_last_error(void) { return g_last_error.c_str(); }

const char* rf_status_string(rf_status status) {
  switch (status) {
    case RF_OK: return "ok";
    case RF_ERR_VALIDATION: return "validation error";
    case RF_ERR_PACKING: return "packing error";
    case RF_ERR_CERTIFICATION: return "certification error";
    case RF_ERR_PARSE: return "parse error";
    case RF_ERR_EXPANSION_TOO_LARGE: return "expansion too large";
    case RF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void rf_free_string(char* s) { std::free(s); }

const char* rf_version(void) { return "0.1.0"; }

}  // extern "C"
