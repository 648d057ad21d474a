#pragma once

#include <iosfwd>

namespace folia::cli {

// Runs one command; returns the process exit code:
//   0  success / verdict produced
//   1  input or usage error
//   2  mathematical failure, with a machine-checkable witness in the report
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace folia::cli
