#pragma once

#include <atomic>
#include <ostream>
#include <string>
#include <vector>

namespace ragloop::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Runs one `ragloop` command line. `args` excludes the program name.
/// Returns 0 on success, 1 on a domain failure and 2 on a usage or config
/// error. `cancel`, when set asynchronously, stops batch commands from
/// starting new items; their reports are then marked incomplete.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* cancel = nullptr);

} // namespace ragloop::cli
