#pragma once

#include "schutz/fragment.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace schutz {

// One `digraph` per fragment; vertices by normal form, edges by generator text.
std::string to_dot(const std::vector<Fragment>& fragments);

// {family, seed, radius, prefix, cap, complete, vertices[], edges[{x,label,y}], distances[]}
nlohmann::json to_json(const Fragment& f);
// Rebuilds a fragment and re-validates every vertex and edge against the oracle.
Fragment fragment_from_json(const nlohmann::json& j, OraclePtr oracle);

}  // namespace schutz
