#ifndef ELMLC_CLI_HPP
#define ELMLC_CLI_HPP

#include <iosfwd>

namespace elmlc {

/// Process exit codes of the elmlc command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,     // unexpected internal error
  kExitUsage = 2,       // unknown flag, bad flag value, missing subcommand
  kExitIo = 3,          // missing or unreadable/unwritable file
  kExitMalformed = 4,   // malformed CSV, model or config file
  kExitDimension = 5,   // shape mismatch, e.g. model vs. input feature count
  kExitNumerical = 6,   // SVD non-convergence, diverging training, non-finite data
  kExitConfig = 7,      // hyperparameter or split specification out of range
};

/// Runs the tool. Normal output goes to `out`; a failure prints exactly one
/// diagnostic line to `err` and returns the matching ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace elmlc

#endif  // ELMLC_CLI_HPP
