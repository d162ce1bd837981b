#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "tomeria/lever_world.hpp"

namespace tomeria {

using Json = nlohmann::ordered_json;

Json cell_to_json(Cell c);
Cell cell_from_json(const Json& j);

Json params_to_json(const GenParams& params);
/// Missing fields fall back to GenParams defaults; the result is validated.
GenParams params_from_json(const Json& j);

Json lever_to_json(const Lever& lever);
Lever lever_from_json(const Json& j);

/// Canonical field order: base, levers, start, exit, treasures, initialConfig.
/// "preview": false is appended only for levels with previews disabled.
Json level_to_json(const LevelSpec& spec);
LevelSpec level_from_json(const Json& j);

/// Parses text as JSON, mapping syntax errors to invalid-argument.
Json parse_json(std::string_view text);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace tomeria
