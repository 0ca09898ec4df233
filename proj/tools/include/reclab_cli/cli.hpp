#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reclab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPrecision = 3;
inline constexpr int kExitVerification = 4;

inline constexpr int kDefaultEvaluationDigits = 200;

// RECLAB_DIGITS when set, otherwise kDefaultEvaluationDigits. Throws
// ParseError on a malformed value.
int evaluation_digits();

// args[0] is the program name. Results go to `out`; failures are reported on
// `err` as a one-line JSON object and mapped onto the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reclab::cli
