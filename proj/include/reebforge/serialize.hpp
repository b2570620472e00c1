#ifndef REEBFORGE_SERIALIZE_HPP
#define REEBFORGE_SERIALIZE_HPP

#include "reebforge/graph_model.hpp"
#include "reebforge/layout.hpp"
#include "reebforge/poly.hpp"
#include "reebforge/reeb_graph.hpp"

#include <json.hpp>

#include <string>

namespace reebforge {

using Json = nlohmann::json;

/// Parses text as JSON; Error(Parse) on malformed input.
Json parse_json(const std::string& text);
/// Two-space indented, keys sorted, trailing newline.
std::string dump_json(const Json& j);

Json spec_to_json(const GraphSpec& spec);
/// Error(Parse) on missing or mistyped fields.
GraphSpec spec_from_json(const Json& j);

Json arrangement_to_json(const CircleArrangement& arr, const GraphSpec& spec);
CircleArrangement arrangement_from_json(const Json& j);
/// Target multiplicities recorded in an arrangement document.
std::vector<int> arrangement_multiplicities(const Json& j);

Json reeb_to_json(const ReebGraphResult& r);
Json polynomial_to_json(const FactoredPolynomial& f, int digits);
Json expansion_to_json(const ExpandedPolynomial& e, int digits);
Json model_to_json(const SynthesisResult& m);
Json extension_to_json(const ExtensionArtifact& e, const SynthesisResult& m);

EmbeddedGraphDescription embedded_graph_from_json(const Json& j);
Json theorem1_to_json(const Theorem1Report& r);
Json violations_to_json(const std::vector<Violation>& v);

/// Decimal digits matching a binary precision.
int decimal_digits(mpfr_prec_t prec);

}  // namespace reebforge

#endif
