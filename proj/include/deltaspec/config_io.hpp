#pragma once

// JSON ingestion: {"alpha": [a_1, ..., a_N], "points": [[x, y, z], ...]}.

#include <string>
#include <string_view>

#include "deltaspec/model.hpp"

namespace deltaspec {

/// Throws ConfigError (with a JSON pointer) on missing keys, wrong types,
/// non-finite numbers, length mismatch and coincident points. A file that
/// cannot be read or parsed reports the pointer "".
PointConfig parse_config_text(std::string_view text);
PointConfig parse_config(const std::string& path);

}  // namespace deltaspec
