#pragma once

#include <iosfwd>

namespace devkit {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 verdict true, 1 verdict false, 2 library error,
/// 3 schema or usage error. Reports go to `out`, errors (as JSON) to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace devkit
