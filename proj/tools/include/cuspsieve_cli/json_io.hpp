#pragma once

#include <json.hpp>

#include "cuspsieve/cusps.hpp"
#include "cuspsieve/report.hpp"
#include "cuspsieve/transference.hpp"

namespace cuspsieve::cli {

using json = nlohmann::ordered_json;

json to_json(const CheckRow& row);
json to_json(const CheckReport& report);
json to_json(const CuspReport& report);
json to_json(const CompanionResult& result);
json to_json(const Decomposition& d);

/// Shortest round-trip decimal.
std::string format_shortest(double x);
/// Same, but integral values keep a trailing ".0".
std::string format_real(double x);

}  // namespace cuspsieve::cli
