// Rigid-body locomotion under four-fin thrust: vertical cycle displacement,
// diagonal motion under deflection, and differential-fin yaw steering.
//
// Planar + yaw dynamics (x, y, z, yaw); pitch is integrated from the thrust
// asymmetry as a reported diagnostic but not fed back into the forces. Drag
// is quadratic per axis with a single Cd*A product. Per-cycle displacement
// windows are aligned to snap events: rise is the height gained from a snap
// to the following apex, dip the drop from that apex to the next snap.
#pragma once

#include <functional>
#include <vector>

#include "lamsa/actuator.hpp"
#include "lamsa/scenario.hpp"
#include "lamsa/steering_script.hpp"

namespace lamsa {

struct RobotState {
  double x_mm = 0.0, y_mm = 0.0, z_mm = 0.0;
  double vx_mm_s = 0.0, vy_mm_s = 0.0, vz_mm_s = 0.0;
  double yaw_deg = 0.0, yaw_rate_deg_s = 0.0;
  double pitch_deg = 0.0;
};

struct Trajectory {
  std::vector<double> time_s;
  std::vector<double> x_mm, y_mm, z_mm;
  std::vector<double> vz_mm_s;
  std::vector<double> yaw_deg, pitch_deg;
  std::vector<double> thrust_n;  // total vertical fin force (body frame)
  std::vector<ActuatorPhase> phase;
  std::vector<double> snap_times_s;
  double period_s = 0.0;
  RobotState final_state;
};

struct CycleWindowSummary {
  int index = 0;
  double start_s = 0.0, end_s = 0.0;
  double rise_mm = 0.0;   // snap -> apex
  double dip_mm = 0.0;    // apex -> next snap
  double net_mm = 0.0;    // rise - dip
  double horizontal_mm = 0.0;
};

struct PerCycleReport {
  std::vector<CycleWindowSummary> cycles;
  bool partial_trailing_excluded = false;
};

using DeflectionScheduleFn = std::function<std::array<double, 4>(int cycle)>;

// Integrates the body under the four beam-fin chains for n_cycles crank
// revolutions. Raises SimulationError (with the failure time) on integrator
// instability; NoFire/Chatter from any completed cycle propagate.
Trajectory simulate_locomotion(int n_cycles, const DeflectionScheduleFn& schedule,
                               const ScenarioParams& params);

// Convenience overload: constant per-fin deflections.
Trajectory simulate_locomotion(int n_cycles, const std::array<double, 4>& deflections_deg,
                               const ScenarioParams& params);

// Runs a timed steering script. The script horizon must fit inside
// params.sim.cycles crank revolutions.
Trajectory steering_scenario(const SteeringScript& script, const ScenarioParams& params);

// Snap-aligned per-cycle displacement summaries. Requires at least two snap
// events; the partial window after the last snap is excluded and flagged.
PerCycleReport per_cycle_summary(const Trajectory& traj);

}  // namespace lamsa
