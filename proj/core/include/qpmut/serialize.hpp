#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

#include "qpmut/generators.hpp"
#include "qpmut/jacobian.hpp"
#include "qpmut/mutation.hpp"
#include "qpmut/search.hpp"

namespace qpmut {

using Json = nlohmann::ordered_json;

Json to_json(const Degree& d);
Json to_json(const PathSum& s);
Json to_json(const QPState& qp);
Json to_json(const MutationReport& report);
Json to_json(const ObstructionCertificate& cert);
Json to_json(const Witness& witness);
/// `with_timing` adds wall_time_ms, which makes output run-dependent.
Json to_json(const SearchReport& report, bool with_timing = false);
Json to_json(const DimensionTable& table);
Json to_json(const LambdaReport& report);

/// Structural validation included; throws Error(Parse) with a path-like
/// location on schema violations.
QPState qp_from_json(const Json& j);

/// Parses text; syntax errors become Error(Parse) carrying line and column.
Json parse_json_text(std::string_view text);
QPState qp_from_text(std::string_view text);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);

/// Aligned columns: degree, functional value, dimension.
std::string to_text(const DimensionTable& table, std::string_view title);
std::string to_text(const SearchReport& report);

}  // namespace qpmut
