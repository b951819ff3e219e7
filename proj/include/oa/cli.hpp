#pragma once

#include <iosfwd>

namespace oa::cli {

enum ExitCode : int {
  kSuccess = 0,
  kIoError = 1,
  kConfigError = 2,
  kSchemaCeiling = 3,
};

// Entry point of the oa-indicators tool. Every flag can also be set through
// an OAIND_* environment variable (e.g. OAIND_MIN_UNIVERSITIES).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oa::cli
