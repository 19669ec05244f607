#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mosqdyn::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 2,
    kIoFailure = 3,
    kCheckFailed = 4,
};

/// Runs one command line. args excludes the program name, e.g. {"simulate", "--alpha", "0.6", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mosqdyn::cli
