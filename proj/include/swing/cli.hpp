#pragma once

#include <iosfwd>

namespace swing {

/// Exit codes: 0 success / verification pass, 2 verification failure,
/// 1 operational error (bad flags, unreadable case, solver failure).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swing
