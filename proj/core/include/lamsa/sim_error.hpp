#pragma once

#include <stdexcept>
#include <string>

namespace lamsa {

// Exit-code contract used by the CLI: 0 ok, 2 config error, 3 simulation
// failure, 4 infeasible design.
enum class ExitCode : int { Ok = 0, ConfigError = 2, SimulationError = 3, Infeasible = 4 };

struct ConfigError : std::runtime_error {
  int line = 0;
  explicit ConfigError(const std::string& msg, int line_no = 0)
      : std::runtime_error(line_no > 0 ? msg + " (line " + std::to_string(line_no) + ")" : msg),
        line(line_no) {}
};

struct InfeasibleDesignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a precondition on a model operation is violated.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class SimFailure { NoFire, Chatter, Instability };

struct SimulationError : std::runtime_error {
  SimFailure kind;
  // Diagnostics, filled depending on kind.
  double max_tilt_n = 0.0;      // NoFire: largest latch tilt achieved
  double net_fin_flip_deg = 0.0;  // NoFire: net fin-angle change over the cycle
  int snap_count = 0;             // Chatter: number of snap events seen
  double time_s = 0.0;            // Instability: time of the failed step

  SimulationError(SimFailure k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
};

}  // namespace lamsa
