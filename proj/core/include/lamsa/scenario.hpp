// Aggregated scenario parameters: everything a simulation run needs, grouped
// the same way as the config file sections. Defaults reproduce the shipped
// calibrated design (see configs/default.ini for provenance notes).
#pragma once

#include <array>
#include <cstdint>

#include "lamsa/beam.hpp"
#include "lamsa/geometry.hpp"
#include "lamsa/hydro.hpp"

namespace lamsa {

struct DriveParams {
  double rpm = 167.0;
  double speed_scale = 1.0;  // <1 slows the motor (quasi-static diagnostics)
  double dt_s = 1e-4;
};

struct ConnectorParams {
  double stiffness_nmm_per_rad = 3000.0;  // k_c, calibrated
  double damping_nmm_s_per_rad = 30.0;    // c_c, calibrated
  double lever_mm = 14.0;                 // theta_beam = asin(q / lever)
};

struct LatchParams {
  // 0 auto-sizes the stiffness so the tilt reaches the trigger force at
  // snap_target_fraction * H on the rising stroke.
  double stiffness_n_per_mm = 0.0;
  double snap_target_fraction = 0.944;
};

struct BeamDynamicsParams {
  double modal_mass_g = 1.76;        // first-mode effective mass of the strip
  double damping_n_s_per_mm = 0.004;
};

struct BlockParams {
  double zone_fraction = 0.16;       // active for s < zone_fraction * H
  double stiffness_n_per_mm = 3.5;
};

struct RobotBody {
  double mass_g = 350.0;
  double drag_cd = 3.0;
  double ref_area_mm2 = 7000.0;
  double buoyancy_offset_n = -0.075;  // net static vertical force; negative sinks
  double yaw_inertia_g_mm2 = 6.0e5;
  double yaw_drag_nmm_s2 = 2.0e-4;   // quadratic rotational drag coefficient
  double pitch_inertia_g_mm2 = 6.0e5;
  double pitch_drag_nmm_s2 = 2.0e-4;
  double mount_radius_mm = 60.0;     // fins on a symmetric cross at this radius

  void validate() const;
};

struct SimParams {
  int cycles = 6;
  double output_dt_s = 1e-4;  // trace sampling interval
};

// One experimental target for the calibration fit: value, objective weight
// and acceptance tolerance (relative).
struct TargetSpec {
  double value = 0.0;
  double weight = 1.0;
  double tol = 0.15;
};

struct CalibrationTargets {
  TargetSpec peak_thrust_n{0.528, 0.0, 0.15};
  TargetSpec impulse_ns{0.147, 1.0, 0.15};
  TargetSpec rise_mm{40.0, 1.0, 0.20};
  TargetSpec dip_mm{10.0, 0.6, 0.40};
  TargetSpec net_rise_mm{30.0, 1.0, 0.20};
  TargetSpec load_release_ratio{10.0, 0.5, 0.20};
  TargetSpec optimum_area_mm2{4000.0, 0.25, 0.125};

  void validate() const;
};

struct ScenarioParams {
  LinkageGeometry geometry;
  BeamSpec beam;
  FinSpec fin;       // base fin; per-fin deflections are applied on top
  FluidEnv fluid;
  DriveParams drive;
  ConnectorParams connector;
  LatchParams latch;
  BeamDynamicsParams beam_dyn;
  BlockParams block;
  RobotBody body;
  SimParams sim;
  CalibrationTargets targets;
  double fin_aspect_ratio = 1.5;  // span^2 / area, held fixed when sweeping
  double fin_taper = 0.6;         // tip/root chord
  double servo_torsion_gain = 0.5;  // beam-end torsion per unit fin deflection
  std::uint64_t seed = 12345;

  double period_s() const;  // one crank revolution at the scaled motor speed
  void validate() const;
};

// Script/schedule convention for the four fins. Fins sit at azimuths 0, 90,
// 180 and 270 degrees (+x, +y, -x, -y); opposing fins are mirror-handed, so
// equal scripted deflections on a pair tilt their thrust the same lateral way
// (pure translation) and opposite signs form a couple (pure yaw).
inline constexpr std::array<double, 4> kFinHandedness = {+1.0, +1.0, -1.0, -1.0};

}  // namespace lamsa
