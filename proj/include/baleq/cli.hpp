#pragma once

namespace baleq {

// Batch front-end: parses argv, runs one subcommand among classify, decompose,
// label, oracle, group, bilinear, fixtures, prints a JSON report on standard
// output and diagnostics on standard error. Returns the process exit code:
// 0 = decided, 2 = Unknown outcome, 1 = input error.
int run(int argc, const char* const* argv);

}  // namespace baleq
