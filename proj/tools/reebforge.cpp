// reebforge command line. Uses only the C API.
#include "reebforge/reebforge.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kPacking = 3, kCertification = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_code(rf_status s) {
  switch (s) {
    case RF_OK: return kOk;
    case RF_ERR_VALIDATION:
    case RF_ERR_PARSE:
    case RF_ERR_INVALID_ARGUMENT: return kUsage;
    case RF_ERR_PACKING: return kPacking;
    case RF_ERR_CERTIFICATION: return kCertification;
    default: return kFail;
  }
}

void check(rf_status s) {
  if (s != RF_OK) throw Failure{exit_code(s), std::string(rf_status_string(s)) + ": " + rf_last_error()};
}

struct CString {
  char* p = nullptr;
  ~CString() { rf_free_string(p); }
  std::string str() const { return p ? p : ""; }
};

struct ModelDeleter {
  void operator()(rf_model* m) const { rf_model_free(m); }
};
using Model = std::unique_ptr<rf_model, ModelDeleter>;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{kFail, "cannot write " + path.string()};
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") std::cout << text << std::flush;
  else write_file(out, text);
}

struct Common {
  std::string spec, model, arrangement, out, oracle_res, format = "json";
  int precision_bits = 0;
  std::uint64_t seed = 0;
};

rf_options options(const Common& c) {
  rf_options o;
  rf_options_init(&o);
  o.precision_bits = c.precision_bits;
  o.seed = c.seed;
  if (!c.oracle_res.empty()) {
    int r = 0, a = 0;
    char tail = 0;
    if (std::sscanf(c.oracle_res.c_str(), "%dx%d%c", &r, &a, &tail) != 2)
      throw Failure{kUsage, "--oracle-res expects RxA, e.g. 2048x512"};
    o.oracle_radial = r;
    o.oracle_angular = a;
  }
  return o;
}

// A model from --spec, or from --model together with --arrangement.
Model obtain_model(const Common& c) {
  const rf_options o = options(c);
  rf_model* m = nullptr;
  if (!c.spec.empty()) {
    check(rf_synthesize(slurp(c.spec).c_str(), &o, &m));
  } else if (!c.model.empty() && !c.arrangement.empty()) {
    check(rf_model_load(slurp(c.model).c_str(), slurp(c.arrangement).c_str(), &o, &m));
  } else {
    throw Failure{kUsage, "need --spec, or --model with --arrangement"};
  }
  return Model(m);
}

std::string render(const rf_model* m, rf_artifact what) {
  CString s;
  check(rf_model_render(m, what, &s.p));
  return s.str();
}

int cmd_synthesize(const Common& c) {
  const Model m = obtain_model(c);
  const rf_options o = options(c);
  const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{kFail, "cannot create " + dir.string() + ": " + ec.message()};
  write_file(dir / "model.json", render(m.get(), RF_MODEL_JSON));
  write_file(dir / "arrangement.json", render(m.get(), RF_ARRANGEMENT_JSON));
  if (c.format == "svg") write_file(dir / "arrangement.svg", render(m.get(), RF_SVG));
  CString cert;
  int passed = 0;
  check(rf_model_certify(m.get(), &o, &cert.p, &passed));
  write_file(dir / "certificate.json", cert.str());
  std::cout << "degree " << rf_model_degree(m.get()) << " in " << rf_model_variables(m.get()) << " variables, "
            << "certificate " << (passed ? "passed" : "FAILED") << " -> " << dir.string() << "\n";
  return passed ? kOk : kCertification;
}

// One line per check, for --format text.
std::string check_table(const std::string& cert_json) {
  std::string out;
  // The certificate lists checks as {"detail","name","passed"} objects; the
  // CLI has no JSON dependency, so pick them out textually.
  size_t pos = 0;
  while ((pos = cert_json.find("\"name\": \"", pos)) != std::string::npos) {
    pos += 9;
    const size_t end = cert_json.find('"', pos);
    const std::string name = cert_json.substr(pos, end - pos);
    const size_t p = cert_json.find("\"passed\": ", end);
    const bool ok = p != std::string::npos && cert_json.compare(p + 10, 4, "true") == 0;
    out += (ok ? "PASS " : "FAIL ") + name + "\n";
    pos = end;
  }
  return out;
}

int cmd_verify(const Common& c) {
  if (c.model.empty() || c.arrangement.empty()) throw Failure{kUsage, "verify needs --model and --arrangement"};
  const Model m = obtain_model(c);
  const rf_options o = options(c);
  CString cert;
  int passed = 0;
  check(rf_model_certify(m.get(), &o, &cert.p, &passed));
  emit(c.out, c.format == "text" ? check_table(cert.str()) : cert.str());
  if (!passed) std::cerr << "reebforge: certificate failed\n";
  return passed ? kOk : kCertification;
}

int cmd_plot(const Common& c) {
  if (c.spec.empty() && c.model.empty() && !c.arrangement.empty()) {
    const rf_options o = options(c);
    CString svg;
    check(rf_arrangement_svg(slurp(c.arrangement).c_str(), &o, &svg.p));
    emit(c.out, svg.str());
    return kOk;
  }
  const Model m = obtain_model(c);
  emit(c.out, render(m.get(), RF_SVG));
  return kOk;
}

int cmd_export(const Common& c, bool expanded) {
  const Model m = obtain_model(c);
  if (c.format == "svg") emit(c.out, render(m.get(), RF_SVG));
  else if (c.format == "text") emit(c.out, render(m.get(), RF_POLY_TEXT));
  else emit(c.out, render(m.get(), expanded ? RF_POLY_EXPANDED_JSON : RF_POLY_JSON));
  return kOk;
}

int cmd_extend(const Common& c) {
  const Model m = obtain_model(c);
  emit(c.out, render(m.get(), RF_EXTENSION_JSON));
  return kOk;
}

int cmd_check_graph(const std::string& graph, const Common& c) {
  CString report;
  int passed = 0;
  check(rf_check_graph(slurp(graph).c_str(), &report.p, &passed));
  emit(c.out, c.format == "text" ? std::string(passed ? "PASS\n" : "FAIL\n") : report.str());
  return passed ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial models of prescribed Reeb graphs"};
  app.set_version_flag("--version", rf_version());
  app.require_subcommand(1);
  Common c;
  std::string graph;
  bool expanded = false;

  auto precision = [&](CLI::App* sub) {
    sub->add_option("--precision-bits", c.precision_bits, "Interval precision (default: spec, REEBFORGE_PRECISION, 128)")
        ->check(CLI::Range(53, 4096));
  };
  auto source = [&](CLI::App* sub) {
    sub->add_option("--spec", c.spec, "Graph spec JSON")->check(CLI::ExistingFile);
    sub->add_option("--model", c.model, "model.json")->check(CLI::ExistingFile);
    sub->add_option("--arrangement", c.arrangement, "arrangement.json")->check(CLI::ExistingFile);
  };
  auto certify_flags = [&](CLI::App* sub) {
    sub->add_option("--oracle-res", c.oracle_res, "Oracle grid RxA (default 2048x512)");
    sub->add_option("--seed", c.seed, "Sampling seed");
  };

  auto* syn = app.add_subcommand("synthesize", "Build and certify a model; writes model.json, arrangement.json, certificate.json");
  syn->add_option("--spec", c.spec, "Graph spec JSON")->required()->check(CLI::ExistingFile);
  syn->add_option("--out", c.out, "Output directory (default .)");
  syn->add_option("--format", c.format, "json, or svg to also write arrangement.svg")
      ->check(CLI::IsMember({"json", "svg"}));
  precision(syn);
  certify_flags(syn);

  auto* ver = app.add_subcommand("verify", "Re-certify a model against its arrangement");
  source(ver);
  ver->add_option("--out", c.out, "Certificate file (default stdout)");
  ver->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  precision(ver);
  certify_flags(ver);

  auto* plot = app.add_subcommand("plot", "SVG of the arrangement and its Reeb graph");
  source(plot);
  plot->add_option("--out", c.out, "SVG file (default stdout)");
  precision(plot);

  auto* exp = app.add_subcommand("export", "Polynomial as JSON, text or SVG");
  source(exp);
  exp->add_option("--out", c.out, "Output file (default stdout)");
  exp->add_option("--format", c.format, "json, text or svg")->check(CLI::IsMember({"json", "text", "svg"}));
  exp->add_flag("--expanded", expanded, "Expand into monomials (json only)");
  precision(exp);

  auto* ext = app.add_subcommand("extend", "Non-singular extension of the model");
  source(ext);
  ext->add_option("--out", c.out, "Output file (default stdout)");
  precision(ext);

  auto* chk = app.add_subcommand("check-graph", "Vertex and edge conditions for a graph mapped into the circle");
  chk->add_option("--graph", graph, "Embedded graph JSON")->required()->check(CLI::ExistingFile);
  chk->add_option("--out", c.out, "Report file (default stdout)");
  chk->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*syn) return cmd_synthesize(c);
    if (*ver) return cmd_verify(c);
    if (*plot) return cmd_plot(c);
    if (*exp) return cmd_export(c, expanded);
    if (*ext) return cmd_extend(c);
    if (*chk) return cmd_check_graph(graph, c);
  } catch (const Failure& f) {
    std::cerr << "reebforge: " << f.message << "\n";
    return f.code;
  }
  return kFail;
}
