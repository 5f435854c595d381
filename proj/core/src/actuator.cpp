#include "lamsa/actuator.hpp"

#include <algorithm>
#include <cmath>

#include "lamsa/sim_error.hpp"
#include "lamsa/units.hpp"

namespace lamsa {

using units::kPi;

void RobotBody::validate() const {
  if (!(mass_g > 0.0)) throw DomainError("body: mass must be positive");
  if (!(yaw_inertia_g_mm2 > 0.0)) throw DomainError("body: yaw inertia must be positive");
  if (!(mount_radius_mm > 0.0)) throw DomainError("body: mount radius must be positive");
}

double ScenarioParams::period_s() const {
  return 2.0 * kPi / (units::rpm_to_rad_per_s(drive.rpm) * drive.speed_scale);
}

void CalibrationTargets::validate() const {
  for (const TargetSpec* t : {&peak_thrust_n, &impulse_ns, &rise_mm, &dip_mm,
                              &net_rise_mm, &load_release_ratio, &optimum_area_mm2}) {
    if (!(t->value > 0.0)) throw DomainError("calibration target values must be positive");
    if (t->weight < 0.0) throw DomainError("calibration target weights must be non-negative");
  }
}

void ScenarioParams::validate() const {
  geometry.validate();
  beam.validate();
  fin.validate();
  fluid.validate();
  body.validate();
  targets.validate();
  if (!(drive.rpm > 0.0 && drive.dt_s > 0.0 && drive.speed_scale > 0.0))
    throw DomainError("drive: rpm, dt and speed scale must be positive");
  if (!(connector.lever_mm > 0.0))
    throw DomainError("connector: lever must be positive");
  if (sim.cycles < 1) throw DomainError("sim: at least one cycle");
}

const char* to_string(ActuatorPhase p) {
  switch (p) {
    case ActuatorPhase::Preparation: return "preparation";
    case ActuatorPhase::Loading: return "loading";
    case ActuatorPhase::Ultimate: return "ultimate";
    case ActuatorPhase::Release: return "release";
    case ActuatorPhase::Recovery: return "recovery";
  }
  return "?";
}

double latch_tilt(double s_mm, double q_mm, const LinkageGeometry& geom,
                  double latch_stiffness_n_per_mm) {
  const double s_engage = geom.latch_fraction * geom.h_mm;
  if (s_mm <= s_engage) return 0.0;
  if (q_mm >= 0.0) return 0.0;  // latch only contacts the loaded side
  return latch_stiffness_n_per_mm * (s_mm - s_engage);
}

double limited_block_constraint(double q_candidate_mm, double s_mm,
                                const LinkageGeometry& geom, const BlockParams& block) {
  if (!geom.limited_block) return q_candidate_mm;
  if (s_mm >= block.zone_fraction * geom.h_mm) return q_candidate_mm;
  return q_candidate_mm <= 0.0 ? q_candidate_mm : -q_candidate_mm;
}

namespace {

// One-sided penalty realization of the limited block: a ceiling that descends
// through the well as the slider approaches BDC, pushing an up-well beam over
// the barrier into the loaded branch.
double block_force(double q_mm, double s_mm, double qbar_mm,
                   const LinkageGeometry& geom, const BlockParams& block) {
  if (!geom.limited_block) return 0.0;
  const double zone = block.zone_fraction * geom.h_mm;
  if (s_mm >= zone || qbar_mm <= 0.0) return 0.0;
  const double frac = s_mm / zone;  // 1 at zone entry, 0 at BDC
  const double ceiling = qbar_mm * std::max(-0.5, 2.4 * frac - 1.2);
  if (q_mm <= ceiling) return 0.0;
  return -block.stiffness_n_per_mm * (q_mm - ceiling);
}

double stored_energy_mj(const ChainState& st, double delta_mm, const ChainContext& ctx) {
  const double de = effective_compression(delta_mm, ctx.phi_deg, ctx.beam);
  const double axial = de > 0.0 ? ctx.beam.buckling_load_n() * de : 0.0;
  const double u = potential_energy(st.q_mm, delta_mm, ctx.phi_deg, ctx.beam);
  const double ke = 0.5 * ctx.beam_dyn.modal_mass_g * st.v_mm_s * st.v_mm_s /
                    units::kNmmToGmm2PerS2;
  return axial + u + ke;
}

// dU/d(delta) at fixed q, central difference so the audit always tracks the
// implemented potential.
double du_ddelta(double q_mm, double delta_mm, const ChainContext& ctx) {
  const double h = 1e-6 * std::max(1.0, std::abs(delta_mm));
  const double up = potential_energy(q_mm, delta_mm + h, ctx.phi_deg, ctx.beam);
  const double dn = potential_energy(q_mm, delta_mm - h, ctx.phi_deg, ctx.beam);
  return (up - dn) / (2.0 * h);
}

double block_force_public(double q_mm, double s_mm, const ChainContext& ctx) {
  const double delta = ctx.beam.length_mm - joint_distance(s_mm, ctx.geometry);
  return block_force(q_mm, s_mm, stable_amplitude(delta, ctx.phi_deg, ctx.beam),
                     ctx.geometry, ctx.block);
}

double axial_force_n(const ChainState& st, double delta_mm, const ChainContext& ctx) {
  const double phi = units::deg_to_rad(ctx.phi_deg);
  const double gain = 1.0 + ctx.beam.torsion_gain * phi * phi;
  const double de = delta_mm * gain;
  const double plateau = de > 0.0 ? ctx.beam.buckling_load_n() * gain : 0.0;
  return plateau + du_ddelta(st.q_mm, delta_mm, ctx);
}

}  // namespace

ChainContext ChainContext::make(const ScenarioParams& p, double beta_deg) {
  ChainContext ctx;
  ctx.geometry = p.geometry;
  ctx.beam = p.beam;
  ctx.fin = p.fin;
  ctx.fin.deflection_beta_deg = beta_deg;  // caller pre-applies handedness
  ctx.fluid = p.fluid;
  ctx.connector = p.connector;
  ctx.beam_dyn = p.beam_dyn;
  ctx.block = p.block;
  ctx.phi_deg = p.servo_torsion_gain * beta_deg;
  ctx.latch_stiffness_n_per_mm = latch_stiffness_for(p);
  ctx.fin_inertia_g_mm2 = structural_inertia(ctx.fin) + added_mass_inertia(ctx.fin, p.fluid);
  return ctx;
}

double latch_stiffness_for(const ScenarioParams& params) {
  if (params.latch.stiffness_n_per_mm > 0.0) return params.latch.stiffness_n_per_mm;
  const double h = params.geometry.h_mm;
  const double s_engage = params.geometry.latch_fraction * h;
  const double s_target = params.latch.snap_target_fraction * h;
  const double penetration = s_target - s_engage;
  if (penetration <= 0.0) return 0.0;  // latch removed (fraction >= target)
  const double delta = params.beam.length_mm - joint_distance(s_target, params.geometry);
  try {
    return trigger_force(delta, 0.0, params.beam) / penetration;
  } catch (const DomainError&) {
    return 0.0;  // monostable design: nothing to trigger
  }
}

ChainState fin_dynamics_step(const ChainState& st, double s_mm, double dt_s,
                             const ChainContext& ctx) {
  if (!(dt_s > 0.0)) throw DomainError("fin_dynamics_step: dt must be positive");
  const double lever = ctx.connector.lever_mm;
  const double delta = ctx.beam.length_mm - joint_distance(s_mm, ctx.geometry);
  const double scale = units::kNewtonToGmmPerS2;  // N -> g*mm/s^2, N*mm -> g*mm^2/s^2

  // Position-dependent forces on q, N.
  double f_static = restoring_force(st.q_mm, delta, ctx.phi_deg, ctx.beam);
  f_static += latch_tilt(s_mm, st.q_mm, ctx.geometry, ctx.latch_stiffness_n_per_mm);
  const double de = effective_compression(delta, ctx.phi_deg, ctx.beam);
  f_static += block_force(st.q_mm, s_mm, stable_amplitude(delta, ctx.phi_deg, ctx.beam),
                          ctx.geometry, ctx.block);

  const double x = std::clamp(st.q_mm / lever, -0.999, 0.999);
  const double theta_b = std::asin(x);
  const double jac = 1.0 / (lever * std::sqrt(1.0 - x * x));  // d theta_b / d q
  const double k_c = ctx.connector.stiffness_nmm_per_rad;
  const double c_c = ctx.connector.damping_nmm_s_per_rad;
  const double tau_spring = k_c * (theta_b - st.theta_rad);

  // Semi-implicit Euler with the velocity-proportional terms treated
  // implicitly: the connector damping reflected through the lever makes the
  // light beam coordinate far too stiff for an explicit damping update.
  const double m = ctx.beam_dyn.modal_mass_g;
  const double num_v = st.v_mm_s + dt_s * (f_static - tau_spring * jac +
                                           c_c * jac * st.omega_rad_s) * scale / m;
  const double den_v = 1.0 + dt_s * (ctx.beam_dyn.damping_n_s_per_mm + c_c * jac * jac) *
                                 scale / m;
  ChainState next;
  next.v_mm_s = num_v / den_v;
  next.q_mm = st.q_mm + dt_s * next.v_mm_s;

  // Fin: I w' = tau_spring + c_c (J v - w) - c3 w|w|, quadratic drag
  // linearized about the current rate.
  const double inertia = ctx.fin_inertia_g_mm2;
  const double rho = ctx.fluid.rho_kg_m3 * units::kKgPerM3ToGPerMm3;
  const double c3_gmm2 = 0.5 * rho * ctx.fin.c_n * ctx.fin.moment3_mm5();
  const double num_w = st.omega_rad_s +
                       dt_s * (tau_spring + c_c * jac * next.v_mm_s) * scale / inertia;
  const double den_w = 1.0 + dt_s * c_c * scale / inertia +
                       dt_s * c3_gmm2 * std::abs(st.omega_rad_s) / inertia;
  next.omega_rad_s = num_w / den_w;
  next.theta_rad = st.theta_rad + dt_s * next.omega_rad_s;

  // A step that teleports across the workspace is an integration failure,
  // not physics.
  if (!std::isfinite(next.q_mm) || !std::isfinite(next.omega_rad_s) ||
      std::abs(next.q_mm - st.q_mm) > 0.5 * lever ||
      std::abs(next.theta_rad - st.theta_rad) > 0.5 * kPi) {
    SimulationError err(SimFailure::Instability,
                        "integrator step too large: beam coordinate left the valid domain");
    throw err;
  }
  // Travel stop of the revolute pair: the linkage cannot carry q past the
  // lever length; contact is plastic.
  const double q_stop = 0.98 * lever;
  if (next.q_mm > q_stop) {
    next.q_mm = q_stop;
    next.v_mm_s = std::min(next.v_mm_s, 0.0);
  } else if (next.q_mm < -q_stop) {
    next.q_mm = -q_stop;
    next.v_mm_s = std::max(next.v_mm_s, 0.0);
  }
  return next;
}

CycleEngine::CycleEngine(const ScenarioParams& params, DeflectionSchedule schedule)
    : params_(params), schedule_(std::move(schedule)) {
  params_.validate();
  dt_ = params_.drive.dt_s;
  period_ = params_.period_s();
  omega_crank_ = units::rpm_to_rad_per_s(params_.drive.rpm) * params_.drive.speed_scale;
  latch_k_ = latch_stiffness_for(params_);

  const auto betas = schedule_ ? schedule_(0) : std::array<double, 4>{0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    chains_[i].ctx = ChainContext::make(params_, kFinHandedness[i] * betas[i]);
    chains_[i].ctx.phi_deg = params_.servo_torsion_gain * betas[i];
    chains_[i].ctx.latch_stiffness_n_per_mm = latch_k_;
    const double s0 = slider_at(0.0);
    const double delta0 = params_.beam.length_mm - joint_distance(s0, params_.geometry);
    const double q0 = -stable_amplitude(delta0, chains_[i].ctx.phi_deg, params_.beam);
    chains_[i].state.q_mm = q0;
    chains_[i].prev_q_mm = q0;
    chains_[i].state.theta_rad = std::asin(std::clamp(q0 / params_.connector.lever_mm, -0.999, 0.999));
  }
  start_cycle();
}

double CycleEngine::slider_at(double t_s) const {
  // Crank starts at BDC (angle pi).
  return slider_height(kPi + omega_crank_ * t_s, params_.geometry);
}

void CycleEngine::start_cycle() {
  cycle_start_t_ = t_;
  current_ = CycleRecord{};
  current_.start_s = t_;
  current_.theta_start_deg = units::rad_to_deg(chains_[0].state.theta_rad);
  phase_ = ActuatorPhase::Preparation;
  loading_start_t_ = -1.0;
  audit_active_ = false;
  prev_delta_mm_ = params_.beam.length_mm - joint_distance(slider_at(t_), params_.geometry);
  prev_q0_mm_ = chains_[0].state.q_mm;

  if (schedule_ && cycle_index_ > 0) {
    const auto betas = schedule_(cycle_index_);
    for (int i = 0; i < 4; ++i) {
      const ChainState keep = chains_[i].state;
      const bool armed = chains_[i].armed;
      chains_[i].ctx = ChainContext::make(params_, kFinHandedness[i] * betas[i]);
      chains_[i].ctx.phi_deg = params_.servo_torsion_gain * betas[i];
      chains_[i].ctx.latch_stiffness_n_per_mm = latch_k_;
      chains_[i].state = keep;
      chains_[i].armed = armed;
    }
  }
}

void CycleEngine::detect_snap(ChainRuntime& c, double t_prev, double t_now) {
  // Root-loss condition: latch tilt reaches the trigger force while the beam
  // occupies the loaded well. Kinematic in time, so bisect on it directly.
  auto margin = [&](double t) -> double {
    const double s = slider_at(t);
    const double s_engage = c.ctx.geometry.latch_fraction * c.ctx.geometry.h_mm;
    if (s <= s_engage) return -1.0;
    const double tilt = latch_k_ * (s - s_engage);
    const double delta = c.ctx.beam.length_mm - joint_distance(s, c.ctx.geometry);
    if (!bistability_intact(delta, c.ctx.phi_deg, c.ctx.beam)) return -1.0;
    return tilt - trigger_force(delta, c.ctx.phi_deg, c.ctx.beam);
  };
  if (!c.armed || c.state.q_mm >= 0.0) {
    c.prev_margin = margin(t_now);
    return;
  }
  const double m_now = margin(t_now);
  if (m_now >= 0.0) {
    double snap_t = t_now;
    if (c.prev_margin < 0.0) {
      double lo = t_prev, hi = t_now;
      while (hi - lo > 1e-5) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) >= 0.0 ? hi : lo) = mid;
      }
      snap_t = 0.5 * (lo + hi);
    }
    c.armed = false;
    if (&c == &chains_[0]) {
      current_.snap_count += 1;
      if (current_.snap_count == 1) {
        current_.snap_s = snap_t;
        snap_times_.push_back(snap_t);
        // Energy input runs from BDC to the snap; the short Preparation dwell
        // inside the block zone is part of it.
        current_.loading_duration_s = snap_t - cycle_start_t_;
        if (audit_active_) {
          const double delta = c.ctx.beam.length_mm -
                               joint_distance(slider_at(t_now), c.ctx.geometry);
          current_.stored_gain_mj =
              stored_energy_mj(c.state, delta, c.ctx) - stored_at_loading_start_mj_;
          audit_active_ = false;
        }
        phase_ = ActuatorPhase::Release;
        release_peak_omega_ = 0.0;
      }
    }
  }
  c.prev_margin = m_now;
}

CycleEngine::StepOutput CycleEngine::step() {
  const double t_prev = t_;
  t_ += dt_;
  ++step_in_cycle_;
  const double s = slider_at(t_);

  for (auto& c : chains_) {
    try {
      c.state = fin_dynamics_step(c.state, s, dt_, c.ctx);
    } catch (SimulationError& e) {
      e.time_s = t_;
      throw;
    }
    // Re-arm when the beam re-enters the loaded branch from the released
    // side (downward crossing of the half-well mark), so the escape
    // transient of the snap it just fired cannot re-trigger.
    if (!c.armed) {
      const double delta = c.ctx.beam.length_mm - joint_distance(s, c.ctx.geometry);
      const double mark = -0.5 * stable_amplitude(delta, c.ctx.phi_deg, c.ctx.beam);
      if (c.prev_q_mm >= mark && c.state.q_mm < mark) c.armed = true;
    }
    c.prev_q_mm = c.state.q_mm;
    detect_snap(c, t_prev, t_);
  }

  auto& c0 = chains_[0];
  const double delta0 = c0.ctx.beam.length_mm - joint_distance(s, c0.ctx.geometry);
  const double tilt0 = latch_tilt(s, c0.state.q_mm, c0.ctx.geometry, latch_k_);
  current_.max_tilt_n =
      std::max(current_.max_tilt_n, latch_k_ * std::max(0.0, s - c0.ctx.geometry.latch_fraction *
                                                                  c0.ctx.geometry.h_mm));

  // Phase machine (chain 0) and the loading-work audit.
  const double s_blk = params_.block.zone_fraction * params_.geometry.h_mm;
  const double s_eng = params_.geometry.latch_fraction * params_.geometry.h_mm;
  switch (phase_) {
    case ActuatorPhase::Preparation:
      if (s > s_blk) {
        phase_ = ActuatorPhase::Loading;
        loading_start_t_ = t_;
        stored_at_loading_start_mj_ = stored_energy_mj(c0.state, delta0, c0.ctx);
        audit_active_ = true;
        current_.work_input_mj = 0.0;
      }
      break;
    case ActuatorPhase::Loading:
      if (s >= s_eng) phase_ = ActuatorPhase::Ultimate;
      break;
    case ActuatorPhase::Ultimate:
      break;  // exits via snap detection
    case ActuatorPhase::Release: {
      release_peak_omega_ = std::max(release_peak_omega_, std::abs(c0.state.omega_rad_s));
      const double target = std::asin(std::clamp(
          stable_amplitude(delta0, c0.ctx.phi_deg, c0.ctx.beam) / params_.connector.lever_mm,
          0.0, 0.999));
      const bool arrived = c0.state.theta_rad >= 0.9 * target &&
                           std::abs(c0.state.omega_rad_s) <= 0.05 * release_peak_omega_;
      if (arrived || s < s_blk) {
        current_.release_duration_s = t_ - current_.snap_s;
        phase_ = arrived && s >= s_blk ? ActuatorPhase::Recovery : ActuatorPhase::Preparation;
      }
      break;
    }
    case ActuatorPhase::Recovery:
      if (s < s_blk) phase_ = ActuatorPhase::Preparation;
      break;
  }
  if (audit_active_) {
    const double f_ax = axial_force_n(c0.state, delta0, c0.ctx);
    current_.work_input_mj += f_ax * (delta0 - prev_delta_mm_);
    const double f_contact =
        tilt0 + block_force_public(c0.state.q_mm, s, c0.ctx);
    current_.work_input_mj += f_contact * (c0.state.q_mm - prev_q0_mm_);
  }
  prev_delta_mm_ = delta0;
  prev_q0_mm_ = c0.state.q_mm;

  StepOutput out;
  out.t_s = t_;
  out.s_mm = s;
  out.q_mm = c0.state.q_mm;
  out.latch_force_n = tilt0;
  out.phase = phase_;
  for (int i = 0; i < 4; ++i) {
    const auto& c = chains_[i];
    const double theta_deg = units::rad_to_deg(c.state.theta_rad);
    const FinForce f = fin_force(c.state.omega_rad_s, theta_deg, c.ctx.fin, c.ctx.fluid);
    out.vertical_n[i] = f.vertical_n;
    out.tangential_n[i] = f.tangential_n;
    out.radial_n[i] = f.radial_n;
    out.theta_deg[i] = theta_deg;
  }

  // Cycle boundary bookkeeping.
  if (t_ >= (cycle_index_ + 1) * period_ - 0.5 * dt_) {
    current_.theta_end_deg = units::rad_to_deg(c0.state.theta_rad);
    records_.push_back(current_);
    ++cycle_index_;
    step_in_cycle_ = 0;
    start_cycle();
  }
  return out;
}

void CycleEngine::check_cycle(int cycle) const {
  if (cycle < 0 || cycle >= static_cast<int>(records_.size()))
    throw DomainError("check_cycle: cycle not finished");
  const CycleRecord& r = records_[cycle];
  if (r.snap_count == 0) {
    SimulationError err(SimFailure::NoFire, "design does not fire: no snap event detected");
    err.max_tilt_n = r.max_tilt_n;
    err.net_fin_flip_deg = r.theta_end_deg - r.theta_start_deg;
    throw err;
  }
  if (r.snap_count > 1) {
    SimulationError err(SimFailure::Chatter,
                        "chatter: multiple snap events in one cycle (check damping calibration)");
    err.snap_count = r.snap_count;
    throw err;
  }
}

CycleTrace run_cycle(const ScenarioParams& params, const std::array<double, 4>& deflections_deg) {
  auto schedule = [&](int) { return deflections_deg; };
  CycleEngine engine(params, schedule);

  const int stride = std::max(1, static_cast<int>(std::lround(params.sim.output_dt_s /
                                                              params.drive.dt_s)));
  CycleTrace trace;
  trace.period_s = engine.period_s();

  // Initial sample at t = 0.
  trace.time_s.push_back(0.0);
  trace.slider_mm.push_back(slider_height(kPi, params.geometry));
  {
    const double s0 = trace.slider_mm.back();
    trace.q_mm.push_back(-stable_amplitude(
        params.beam.length_mm - joint_distance(s0, params.geometry), 0.0, params.beam));
    trace.fin_angle_deg.push_back(units::rad_to_deg(
        std::asin(std::clamp(trace.q_mm.back() / params.connector.lever_mm, -0.999, 0.999))));
  }
  trace.latch_force_n.push_back(0.0);
  trace.phase.push_back(ActuatorPhase::Preparation);
  trace.thrust_n.push_back(0.0);

  int step_count = 0;
  while (engine.completed_cycles() < 1) {
    const auto out = engine.step();
    ++step_count;
    if (step_count % stride != 0 && engine.completed_cycles() < 1) continue;
    trace.time_s.push_back(out.t_s);
    trace.slider_mm.push_back(out.s_mm);
    trace.q_mm.push_back(out.q_mm);
    trace.fin_angle_deg.push_back(out.theta_deg[0]);
    trace.latch_force_n.push_back(out.latch_force_n);
    trace.phase.push_back(out.phase);
    double thrust = 0.0;
    for (double v : out.vertical_n) thrust += v;
    trace.thrust_n.push_back(thrust);
  }

  engine.check_cycle(0);
  const auto& rec = engine.cycle_records()[0];
  trace.snap_time_s = rec.snap_s;
  trace.loading_duration_s = rec.loading_duration_s;
  trace.release_duration_s = rec.release_duration_s;
  trace.work_input_mj = rec.work_input_mj;
  trace.stored_gain_mj = rec.stored_gain_mj;
  trace.peak_thrust_n = *std::max_element(trace.thrust_n.begin(), trace.thrust_n.end());
  trace.impulse_ns = cycle_impulse(trace.time_s, trace.thrust_n);
  return trace;
}

}  // namespace lamsa
