#pragma once

// JSON form of subgroups: {"ambient_dim": n, "continuous_basis": [[...]],
// "discrete_basis": [[...]]}, basis vectors as rows. Reading canonicalises.

#include "chabauty/subgroup.hpp"

#include <json.hpp>

#include <string>

namespace chabauty {

using Json = nlohmann::ordered_json;

Json to_json(const ClosedSubgroup& g);
ClosedSubgroup subgroup_from_json(const Json& j);

/// Real number, with infinities as the string "inf".
Json real_to_json(double x);
double real_from_json(const Json& j);

Json vector_to_json(const Vec& v);
Json matrix_rows(const Mat& columns);

/// Compact serialisation with 17 significant digits for every float.
std::string dump(const Json& j);

}  // namespace chabauty
