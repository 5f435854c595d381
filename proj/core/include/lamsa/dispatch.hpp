// CLI entry point, shared by the lamsa tool and the tests. Subcommands:
// validate, simulate, sweep, steer, calibrate, optimize. Each invocation
// writes its outputs (config echo, CSVs, JSON summaries) into a fresh run
// directory and never overwrites an existing one.
#pragma once

#include <string>
#include <vector>

namespace lamsa {

// Returns the process exit code: 0 ok, 2 config error, 3 simulation failure,
// 4 infeasible design.
int dispatch(const std::vector<std::string>& args);

}  // namespace lamsa
