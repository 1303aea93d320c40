#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace streamrate::cli {

enum ExitCode : int { ok = 0, validation_error = 1, numerical_error = 2, lemma_failure = 3 };

/// Runs one subcommand. args excludes the program name. Tables and reports go
/// to --out when given, otherwise to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace streamrate::cli
