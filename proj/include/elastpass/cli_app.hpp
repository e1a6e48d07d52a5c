#pragma once

namespace elastpass {

// Entry point behind the command-line binary, exposed so the exit-code
// contract is testable in-process. Returns 0 on success (passive/feasible
// where applicable), 2 for a clean non-passive/infeasible verdict, 1 for
// any error.
int runCli(int argc, const char* const* argv);

}  // namespace elastpass
