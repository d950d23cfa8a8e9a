#pragma once

// Command-line front end. Every invocation writes one report record to `out`:
//
//   command  subcommand name
//   inputs   canonical serializations of the parsed inputs
//   result   canonical serializations of the outputs and diagnostics
//   status   ok | closure-failed | error
//
// as "key: value" lines, or as a single line of JSON with sorted keys under
// --json. --verbose adds a human-readable summary on `err`.
//
// Exit codes: 0 ok, 1 mathematical negative result (closure failed, not
// closed, outside the supported function class), 2 usage, parse or
// configuration error.

#include <iosfwd>
#include <string>
#include <vector>

namespace formcalc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace formcalc::cli
