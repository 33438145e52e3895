#pragma once

#include <iosfwd>

namespace swperc {

/// Entry point of the `swperc` tool. Returns 0 on success, 1 on bad input
/// or usage errors, 2 when `report` finds a failing regime.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swperc
