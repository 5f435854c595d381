// The LaMSA cycle engine: prescribed slider motion, beam double well, latch
// tilt, limited block and fin rotation coupled into actuation cycles.
//
// Each of the four fins is an independent beam-fin chain driven by the shared
// slider. A chain has two mechanical degrees of freedom: the beam modal
// coordinate q and the fin angle theta_fin, coupled by the spring-steel
// reinforced connector (lumped rotational spring-damper). Snap-through is
// resolved dynamically; the release duration emerges from the connector and
// fin (added-mass) inertia, not from an imposed timescale.
//
// run_cycle() itself does not re-check the Eq. 3 feasibility of the beam; the
// CLI validates designs up front, and deliberately infeasible inputs are
// reported through the no-fire error path.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lamsa/scenario.hpp"

namespace lamsa {

enum class ActuatorPhase : std::uint8_t { Preparation, Loading, Ultimate, Release, Recovery };

const char* to_string(ActuatorPhase p);

// Latch tilt force on the beam coordinate, N, directed toward the released
// (+q) well. Zero below engagement and zero unless the beam occupies the
// loaded (fin-down) side.
double latch_tilt(double s_mm, double q_mm, const LinkageGeometry& geom,
                  double latch_stiffness_n_per_mm);

// Limited-block selection near BDC: forces the fin-down well (q <= 0) when
// the slider sits inside the block zone, identity elsewhere. This is the
// idealized projection; the engine realizes it as a one-sided penalty ramp
// over the same zone.
double limited_block_constraint(double q_candidate_mm, double s_mm,
                                const LinkageGeometry& geom, const BlockParams& block);

// One beam-fin chain.
struct ChainState {
  double q_mm = 0.0;
  double v_mm_s = 0.0;
  double theta_rad = 0.0;   // fin angle
  double omega_rad_s = 0.0;
};

// Constants a chain needs per step; built once per (scenario, deflection).
struct ChainContext {
  LinkageGeometry geometry;
  BeamSpec beam;
  FinSpec fin;               // carries this fin's deflection angle
  FluidEnv fluid;
  ConnectorParams connector;
  BeamDynamicsParams beam_dyn;
  BlockParams block;
  double phi_deg = 0.0;      // beam-end torsion induced by the servo
  double latch_stiffness_n_per_mm = 0.0;
  double fin_inertia_g_mm2 = 0.0;  // structural + added mass

  static ChainContext make(const ScenarioParams& p, double beta_deg);
};

// Advances one chain by dt with the slider at height s. Semi-implicit Euler.
// Throws SimulationError(Instability) when the state leaves the valid domain.
ChainState fin_dynamics_step(const ChainState& st, double s_mm, double dt_s,
                             const ChainContext& ctx);

struct CycleTrace {
  std::vector<double> time_s;
  std::vector<double> slider_mm;
  std::vector<double> q_mm;           // chain 0
  std::vector<double> fin_angle_deg;  // chain 0
  std::vector<double> latch_force_n;  // chain 0
  std::vector<ActuatorPhase> phase;   // chain 0
  std::vector<double> thrust_n;       // total vertical thrust, all chains

  double period_s = 0.0;
  double snap_time_s = -1.0;          // chain 0, bisected to 1e-5 s
  double loading_duration_s = 0.0;    // loading start -> snap
  double release_duration_s = 0.0;    // snap -> fin flip complete
  double peak_thrust_n = 0.0;
  double impulse_ns = 0.0;            // signed, trapezoidal

  // Energy audit over the Loading+Ultimate window (chain 0): work put into
  // the beam through every mechanism channel (axial compression, latch tilt,
  // block contact) against the stored elastic energy gain.
  double work_input_mj = 0.0;
  double stored_gain_mj = 0.0;
};

// Simulates one full crank revolution from rest at BDC and returns the trace.
// Errors: no snap -> SimulationError(NoFire) carrying the max tilt achieved
// and the net fin flip; more than one snap -> SimulationError(Chatter).
CycleTrace run_cycle(const ScenarioParams& params,
                     const std::array<double, 4>& deflections_deg = {0, 0, 0, 0});

// Multi-cycle engine used by run_cycle and by the body integrator. Chains are
// stepped in lockstep on the drive's dt grid; deflections are re-read at each
// cycle boundary (servos reposition between snaps).
class CycleEngine {
 public:
  using DeflectionSchedule = std::function<std::array<double, 4>(int cycle)>;

  CycleEngine(const ScenarioParams& params, DeflectionSchedule schedule);

  struct StepOutput {
    double t_s = 0.0;
    double s_mm = 0.0;
    std::array<double, 4> vertical_n{};
    std::array<double, 4> tangential_n{};  // handedness applied
    std::array<double, 4> radial_n{};
    std::array<double, 4> theta_deg{};
    double latch_force_n = 0.0;  // chain 0
    double q_mm = 0.0;           // chain 0
    ActuatorPhase phase = ActuatorPhase::Preparation;
  };

  // Advances by one dt and reports forces at the new time.
  StepOutput step();

  double dt_s() const { return dt_; }
  double period_s() const { return period_; }
  int completed_cycles() const { return cycle_index_; }
  const std::vector<double>& snap_times_s() const { return snap_times_; }

  // Per-cycle records, filled as cycles complete.
  struct CycleRecord {
    double start_s = 0.0;
    double snap_s = -1.0;
    double loading_duration_s = 0.0;
    double release_duration_s = 0.0;
    int snap_count = 0;
    double max_tilt_n = 0.0;
    double theta_start_deg = 0.0;
    double theta_end_deg = 0.0;
    double work_input_mj = 0.0;
    double stored_gain_mj = 0.0;
  };
  const std::vector<CycleRecord>& cycle_records() const { return records_; }

  // Raises the per-cycle errors (NoFire/Chatter) for the given finished cycle.
  void check_cycle(int cycle) const;

 private:
  struct ChainRuntime {
    ChainContext ctx;
    ChainState state;
    bool armed = true;          // snap detector armed (beam settled in down well)
    double prev_margin = -1.0;  // tilt - trigger at previous step
    double prev_q_mm = 0.0;
  };

  void start_cycle();
  double slider_at(double t_s) const;
  void detect_snap(ChainRuntime& c, double t_prev, double t_now);

  ScenarioParams params_;
  DeflectionSchedule schedule_;
  double dt_ = 1e-4;
  double period_ = 0.0;
  double omega_crank_ = 0.0;
  double latch_k_ = 0.0;
  double t_ = 0.0;
  int cycle_index_ = 0;
  double cycle_start_t_ = 0.0;
  int step_in_cycle_ = 0;
  std::array<ChainRuntime, 4> chains_;
  ActuatorPhase phase_ = ActuatorPhase::Preparation;
  double loading_start_t_ = -1.0;
  double release_peak_omega_ = 0.0;
  std::vector<double> snap_times_;
  std::vector<CycleRecord> records_;
  CycleRecord current_;
  double prev_delta_mm_ = 0.0;
  double prev_q0_mm_ = 0.0;
  double stored_at_loading_start_mj_ = 0.0;
  bool audit_active_ = false;
};

// Auto-sized latch stiffness for the scenario (see LatchParams).
double latch_stiffness_for(const ScenarioParams& params);

}  // namespace lamsa
