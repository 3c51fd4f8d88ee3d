#pragma once

#include <string>

#include "peakcount/classify.hpp"

namespace peakcount {

/// Parses a JSON run configuration. Throws ParseError for malformed input
/// (with position attribution) and ValidationError naming the violated
/// field. Flags parsed elsewhere may override the file values.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Serializes the profile back to its config form (round-trip support).
std::string profile_to_config_json(const SparsePoly& q);

}  // namespace peakcount
