#include "lamsa/body.hpp"

#include <algorithm>
#include <cmath>

#include "lamsa/sim_error.hpp"
#include "lamsa/units.hpp"

namespace lamsa {

namespace {

// Fin azimuth frame: radial and tangential unit vectors in the body x-y plane.
constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};

double quad_drag_n(double coef_g_per_mm, double v_mm_s) {
  return coef_g_per_mm * v_mm_s * std::abs(v_mm_s) / units::kNewtonToGmmPerS2;
}

}  // namespace

Trajectory simulate_locomotion(int n_cycles, const DeflectionScheduleFn& schedule,
                               const ScenarioParams& params) {
  if (n_cycles < 1) throw DomainError("simulate_locomotion: need at least one cycle");
  CycleEngine engine(params, [&](int k) { return schedule(k); });

  const RobotBody& body = params.body;
  const double kd = 0.5 * params.fluid.rho_kg_m3 * units::kKgPerM3ToGPerMm3 *
                    body.drag_cd * body.ref_area_mm2;  // g/mm
  const double buoy_n = body.buoyancy_offset_n;
  const double d = body.mount_radius_mm;
  const double dt = engine.dt_s();
  const int stride = std::max(1, static_cast<int>(std::lround(params.sim.output_dt_s /
                                                              params.drive.dt_s)));

  RobotState st;
  double pitch_rate_deg_s = 0.0;
  Trajectory traj;
  traj.period_s = engine.period_s();
  auto record = [&](double t, double thrust, ActuatorPhase ph) {
    traj.time_s.push_back(t);
    traj.x_mm.push_back(st.x_mm);
    traj.y_mm.push_back(st.y_mm);
    traj.z_mm.push_back(st.z_mm);
    traj.vz_mm_s.push_back(st.vz_mm_s);
    traj.yaw_deg.push_back(st.yaw_deg);
    traj.pitch_deg.push_back(st.pitch_deg);
    traj.thrust_n.push_back(thrust);
    traj.phase.push_back(ph);
  };
  record(0.0, 0.0, ActuatorPhase::Preparation);

  int checked_cycles = 0;
  int step_count = 0;
  while (engine.completed_cycles() < n_cycles) {
    CycleEngine::StepOutput out;
    try {
      out = engine.step();
    } catch (SimulationError& e) {
      e.time_s = traj.time_s.back();
      throw;
    }
    ++step_count;

    double fz = 0.0, fbx = 0.0, fby = 0.0, tau_yaw = 0.0, tau_pitch = 0.0;
    for (int i = 0; i < 4; ++i) {
      fz += out.vertical_n[i];
      // tangential along t_i = (-sin, cos), radial along r_i = (cos, sin)
      fbx += -kSin[i] * out.tangential_n[i] + kCos[i] * out.radial_n[i];
      fby += kCos[i] * out.tangential_n[i] + kSin[i] * out.radial_n[i];
      tau_yaw += d * out.tangential_n[i];
      tau_pitch += d * kCos[i] * out.vertical_n[i];
    }

    const double psi = units::deg_to_rad(st.yaw_deg);
    const double fwx = std::cos(psi) * fbx - std::sin(psi) * fby;
    const double fwy = std::sin(psi) * fbx + std::cos(psi) * fby;

    const double ax = (fwx - quad_drag_n(kd, st.vx_mm_s)) * units::kNewtonToGmmPerS2 / body.mass_g;
    const double ay = (fwy - quad_drag_n(kd, st.vy_mm_s)) * units::kNewtonToGmmPerS2 / body.mass_g;
    const double az = (fz + buoy_n - quad_drag_n(kd, st.vz_mm_s)) * units::kNewtonToGmmPerS2 /
                      body.mass_g;
    st.vx_mm_s += dt * ax;
    st.vy_mm_s += dt * ay;
    st.vz_mm_s += dt * az;
    st.x_mm += dt * st.vx_mm_s;
    st.y_mm += dt * st.vy_mm_s;
    st.z_mm += dt * st.vz_mm_s;

    const double psi_rate = units::deg_to_rad(st.yaw_rate_deg_s);
    const double tau_drag = body.yaw_drag_nmm_s2 * psi_rate * std::abs(psi_rate);
    const double yaw_acc = (tau_yaw - tau_drag) * units::kNmmToGmm2PerS2 / body.yaw_inertia_g_mm2;
    st.yaw_rate_deg_s += dt * units::rad_to_deg(yaw_acc);
    st.yaw_deg += dt * st.yaw_rate_deg_s;

    // Pitch diagnostic from the fore-aft thrust imbalance; damped, never fed
    // back into the forces.
    const double pr = units::deg_to_rad(pitch_rate_deg_s);
    const double pitch_drag = body.pitch_drag_nmm_s2 * pr * std::abs(pr);
    const double pitch_acc =
        (tau_pitch - pitch_drag) * units::kNmmToGmm2PerS2 / body.pitch_inertia_g_mm2;
    pitch_rate_deg_s += dt * units::rad_to_deg(pitch_acc);
    pitch_rate_deg_s *= (1.0 - 5.0 * dt);  // linear leak keeps the diagnostic bounded
    st.pitch_deg += dt * pitch_rate_deg_s;

    if (!std::isfinite(st.z_mm) || !std::isfinite(st.yaw_deg)) {
      SimulationError err(SimFailure::Instability, "body integrator diverged");
      err.time_s = traj.time_s.back();
      throw err;
    }

    if (step_count % stride == 0) record(out.t_s, fz, out.phase);

    while (checked_cycles < engine.completed_cycles()) {
      engine.check_cycle(checked_cycles);
      ++checked_cycles;
    }
  }

  traj.snap_times_s = engine.snap_times_s();
  traj.final_state = st;
  return traj;
}

Trajectory simulate_locomotion(int n_cycles, const std::array<double, 4>& deflections_deg,
                               const ScenarioParams& params) {
  return simulate_locomotion(n_cycles, [&](int) { return deflections_deg; }, params);
}

Trajectory steering_scenario(const SteeringScript& script, const ScenarioParams& params) {
  const double period = params.period_s();
  const double horizon = params.sim.cycles * period;
  if (script.last_command_time_s() > horizon)
    throw DomainError("steering script extends beyond the simulation horizon");
  return simulate_locomotion(
      params.sim.cycles,
      [&, period](int k) { return script.deflections_at(k * period); }, params);
}

PerCycleReport per_cycle_summary(const Trajectory& traj) {
  if (traj.snap_times_s.size() < 2)
    throw DomainError("per_cycle_summary: trajectory spans fewer than one full cycle");
  PerCycleReport report;
  const auto& t = traj.time_s;
  auto index_at = [&](double time) {
    const auto it = std::lower_bound(t.begin(), t.end(), time);
    return static_cast<size_t>(std::distance(t.begin(), it));
  };
  for (size_t k = 0; k + 1 < traj.snap_times_s.size(); ++k) {
    const size_t i0 = std::min(index_at(traj.snap_times_s[k]), t.size() - 1);
    const size_t i1 = std::min(index_at(traj.snap_times_s[k + 1]), t.size() - 1);
    if (i1 <= i0) continue;
    CycleWindowSummary cw;
    cw.index = static_cast<int>(k);
    cw.start_s = t[i0];
    cw.end_s = t[i1];
    double zmax = traj.z_mm[i0];
    for (size_t i = i0; i <= i1; ++i) zmax = std::max(zmax, traj.z_mm[i]);
    cw.rise_mm = zmax - traj.z_mm[i0];
    cw.dip_mm = zmax - traj.z_mm[i1];
    cw.net_mm = traj.z_mm[i1] - traj.z_mm[i0];
    cw.horizontal_mm = std::hypot(traj.x_mm[i1] - traj.x_mm[i0], traj.y_mm[i1] - traj.y_mm[i0]);
    report.cycles.push_back(cw);
  }
  report.partial_trailing_excluded = traj.time_s.back() > traj.snap_times_s.back();
  return report;
}

}  // namespace lamsa
