#ifndef LAWTRACE_CLI_HPP
#define LAWTRACE_CLI_HPP

#include <ostream>

namespace lawtrace::cli {

enum ExitStatus : int {
  kOk = 0,
  kUsage = 1,
  kInputError = 2,  // unreadable or unparsable files
  kNoRights = 3,    // the engine derived no bundle
  kGatewayError = 4,
};

/// Entry point of the `lawtrace` tool: subcommands solve, explain, compare
/// and evaluate. Results go to `out` and to files, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lawtrace::cli

#endif  // LAWTRACE_CLI_HPP
