#pragma once

#include <iosfwd>

namespace qcorr::cli {

// Exit codes: 0 = success / all checks passed, 1 = a check failed,
// 2 = usage or input error.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace qcorr::cli
