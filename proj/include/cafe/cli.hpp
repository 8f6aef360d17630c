#pragma once

#include <iosfwd>

namespace cafe {

/// Exit codes: 0 success, 1 domain failure (including failed checks), 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cafe
