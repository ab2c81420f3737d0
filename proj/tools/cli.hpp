#ifndef MIMOCAP_TOOLS_CLI_HPP
#define MIMOCAP_TOOLS_CLI_HPP

#include <iosfwd>

namespace mimocap::cli
{

enum ExitCode
{
    ok            = 0,
    solver_failed = 1,
    bad_input     = 2
};

/// Runs the command line with explicit streams so it can be driven in-process.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mimocap::cli

#endif
