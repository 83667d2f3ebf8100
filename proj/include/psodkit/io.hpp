#pragma once

// JSON documents for every domain object. Parsers throw ParseError on
// malformed documents.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "psodkit/abgroup.hpp"
#include "psodkit/colimit.hpp"
#include "psodkit/preorder.hpp"
#include "psodkit/psod.hpp"
#include "psodkit/root_index.hpp"
#include "psodkit/stratification.hpp"

namespace psodkit::io {

using Json = nlohmann::ordered_json;

/// Parses text, wrapping syntax errors in ParseError.
Json parse_document(const std::string& text);

Json integer_to_json(const mpz_class& v);
mpz_class integer_from_json(const Json& j);

Json to_json(const FinitePreorder& p);
FinitePreorder preorder_from_json(const Json& j);

Json to_json(const OrderReflectingMap& f);
Json to_json(const LabelMap& f);
LabelMap label_map_from_json(const Json& j);

/// {"vertices":[{"id","preorder"}], "arrows":[{"id","source","target","orientation","map"}]}
Json to_json(const PreorderDiagram& d);
PreorderDiagram diagram_from_json(const Json& j);

Json to_json(const Cocone& c, const PreorderDiagram& d, const FinitePreorder& colimit);
Cocone cocone_from_json(const Json& j, const PreorderDiagram& d, const FinitePreorder& colimit);
Json to_json(const ColimitCertificate& c, const PreorderDiagram& d);

Json to_json(const Residue& r);
Residue residue_from_json(const Json& j);
Json to_json(const CharTuple& chi);
CharTuple tuple_from_json(const Json& j);
Json to_json(const FactorialForm& f);

Json to_json(const Stratification& s);
Stratification stratification_from_json(const Json& j);
Json to_json(const ChartAtlas& a);
ChartAtlas atlas_from_json(const Json& j);

Json to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j, std::size_t cols_if_empty = 0);
Json to_json(const FgAbGroup& g);
FgAbGroup group_from_json(const Json& j);
Json to_json(const GradedGroup& g);
GradedGroup graded_from_json(const Json& j);

Json to_json(const PsodIndex& p);
PsodIndex psod_from_json(const Json& j);

/// Either {"vertices","arrows"} or {"cech":{"psod"|"index", "depth", "graded"?}}.
GluingScenario scenario_from_json(const Json& j);
Json to_json(const GluingResult& r);

Json to_json(const std::vector<FiltrationStep>& steps, const GradedGroup& g);
std::vector<std::vector<mpz_class>> graded_object_from_json(const Json& j, const GradedGroup& g);

Json to_json(const KReport& r);
std::map<std::string, FgAbGroup> kdata_from_json(const Json& j);

}  // namespace psodkit::io
