// Timed fin-deflection command script. Text format, one command per line:
//
//   time_s  fin_id  beta_deg
//
// fin_id is 0..3 (azimuths +x, +y, -x, -y). Commands take effect at the first
// cycle boundary at or after time_s; two commands for the same fin at the same
// time with different angles conflict and are rejected at parse time.
#pragma once

#include <array>
#include <string>
#include <vector>

namespace lamsa {

struct SteeringCommand {
  double time_s = 0.0;
  int fin_id = 0;
  double beta_deg = 0.0;
};

struct SteeringScript {
  std::vector<SteeringCommand> commands;  // sorted by time

  double last_command_time_s() const;
  // Deflections in effect for the cycle starting at cycle_start_s.
  std::array<double, 4> deflections_at(double cycle_start_s) const;
};

SteeringScript parse_steering_script(const std::string& text);
SteeringScript load_steering_script(const std::string& path);

// The y -> -y mirror image of a script under the fin handedness convention:
// fins on the x axis flip sign, fins on the y axis swap roles.
SteeringScript mirrored(const SteeringScript& script);

}  // namespace lamsa
