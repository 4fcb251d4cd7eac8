#pragma once

#include <string>

#include <json.hpp>

#include "nettrack/estimator.hpp"
#include "nettrack/lmi_design.hpp"
#include "nettrack/local_design.hpp"
#include "nettrack/model.hpp"
#include "nettrack/norm_design.hpp"
#include "nettrack/scalar_design.hpp"

namespace nettrack {

using json = nlohmann::ordered_json;

/// Plant files look like
///   { "A": [[...]], "H": [[[...]], ...], "V": [[...]], "R": [[[...]], ...],
///     "graph": "circulant:N=4,m=1" }
/// with row-major numeric arrays. Throws SchemaError on malformed input
/// and DimensionMismatch on inconsistent sizes.
Plant plant_from_json(const json& j);
Plant load_plant(const std::string& path);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& what);

/// Infinite capacity serializes as {"capacity": null, "infinite": true}.
json to_json(const CapacityReport& r);
json to_json(const ScalarGainReport& r);
json to_json(const LocalBoundReport& r);
json to_json(const CclResult& r);
json to_json(const SimulationResult& r);
json to_json(const Design& d);

}  // namespace nettrack
