#pragma once

// The dyadfrac command line: schedule, dim, sumset, measure, convexity and report subcommands.

#include <iosfwd>

namespace dyadfrac {

/// Parses and runs one command; returns the process exit code (see ExitCode).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace dyadfrac
