#pragma once

#include <ostream>

namespace deltaspec::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one `deltaspec` invocation. Returns 0 on success, 1 when the library
/// rejects the input (JSON error object on `err`), 2 on usage errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deltaspec::cli
