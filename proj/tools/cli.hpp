#pragma once

// Command surface of the consys tool. Exit codes: 0 success or consistent,
// 1 negative but valid (inconsistent, not certified), 2 input error,
// 3 resource cap, 4 internal error.

#include <ostream>
#include <string>
#include <vector>

namespace consys::cli {

enum Exit { kOk = 0, kNegative = 1, kInputError = 2, kResourceCap = 3, kInternal = 4 };

// args excludes the program name. JSON results go to `out` (or to the
// --output file), diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace consys::cli
