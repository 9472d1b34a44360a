#pragma once

// DOT and JSON exporters plus the JSON importers used for round-trips.
// The JSON schema is fixed and versioned as "dualcx/1".

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "dualcx/corpus.hpp"
#include "dualcx/delta_complex.hpp"
#include "dualcx/homology.hpp"

namespace dualcx {

/// 1-skeleton as an undirected DOT graph; vertices are labeled E<i> and
/// parallel 1-cells stay parallel edges.
std::string export_dot(const DeltaComplex& complex);

nlohmann::json complex_to_json(const DeltaComplex& complex);
nlohmann::json report_to_json(const HomologyReport& report);
nlohmann::json record_to_json(const FuzzRunRecord& record);

DeltaComplex complex_from_json(const nlohmann::json& j);
HomologyReport report_from_json(const nlohmann::json& j);

std::string export_json(const DeltaComplex& complex);
std::string export_json(const HomologyReport& report);
std::string export_json(const FuzzRunRecord& record);

}  // namespace dualcx
