#ifndef REEBFORGE_PIPELINE_HPP
#define REEBFORGE_PIPELINE_HPP

#include "reebforge/poly.hpp"
#include "reebforge/serialize.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace reebforge {

struct CertifyOptions {
  int oracle_radial = 2048;
  int oracle_angular = 512;
  std::uint64_t seed = 0;
  long region_samples = 100000;
  long staged_samples = 20000;
  int zero_samples = 1000;
};

struct CheckEntry {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Certificate {
  Json body;
  std::vector<CheckEntry> checks;
  bool passed() const;
};

/// A model rebuilt from its documents, with any disagreement between them.
struct LoadedModel {
  SynthesisResult model;
  std::vector<std::string> inconsistencies;
};

/// Rebuilds the polynomial from the arrangement document and compares it
/// with the recorded model. Error(Parse) / Error(Validation) on bad input.
LoadedModel load_model(const Json& model_doc, const Json& arrangement_doc, mpfr_prec_t prec);

/// Runs every check on the model; never throws for a failing check.
Certificate certify(const SynthesisResult& model, const CertifyOptions& opts,
                    const std::vector<std::string>& inconsistencies = {},
                    const std::vector<int>& arrangement_multiplicities = {});

/// SVG of the arrangement and the swept Reeb graph.
std::string render_svg(const CircleArrangement& arr, const ReebGraphResult& reeb, mpfr_prec_t prec);

}  // namespace reebforge

#endif
