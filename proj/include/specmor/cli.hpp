#ifndef SPECMOR_CLI_HPP
#define SPECMOR_CLI_HPP

#include <specmor/error.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace specmor
{

///
/// Command-line front end. `args` excludes the program name. Subcommands:
/// reduce, decompose, eval-freq, simulate, pmor-build, pmor-eval, info.
///
/// Exit codes: 0 success, 1 usage or malformed input (unknown option keys,
/// unreadable manifests, dimension mismatches), 2 numerical failure. The
/// error name goes to `err` and, when an info path is known, to the info JSON.
///
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 1 for input and usage errors, 2 for numerical failures.
int exit_code_for(ErrorKind kind);

} // namespace specmor

#endif // SPECMOR_CLI_HPP
