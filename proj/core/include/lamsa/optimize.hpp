// Calibration of the model constants against the measured targets, and
// constrained design-space search over beam length and fin area.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lamsa/fin_sweep.hpp"
#include "lamsa/scenario.hpp"

namespace lamsa {

// Observables the calibration fits: everything the targets table names.
struct Observables {
  double peak_thrust_n = 0.0;
  double impulse_ns = 0.0;
  double rise_mm = 0.0;
  double dip_mm = 0.0;
  double net_rise_mm = 0.0;
  double load_release_ratio = 0.0;
  double optimum_area_mm2 = 0.0;
  bool valid = false;
  std::string failure;
};

// Which observable blocks to simulate; calibrate() skips blocks whose
// targets all carry zero weight.
struct MeasureOptions {
  bool locomotion = true;
  bool area_sweep = true;
};

// Simulates the nominal cycle and, per options, the zero-deflection
// locomotion and the fin sweep for one parameter vector.
Observables measure_observables(const ScenarioParams& params, const MeasureOptions& opts = {});

// The declared calibration parameters with their boxes. Values are read from
// and written to a ScenarioParams.
struct CalibrationParam {
  std::string name;
  double lo, hi;
  std::function<double(const ScenarioParams&)> get;
  std::function<void(ScenarioParams&, double)> set;
};
const std::vector<CalibrationParam>& calibration_params();

struct CalibrationResult {
  std::map<std::string, double> fitted;     // every declared parameter
  std::map<std::string, double> residuals;  // per-target relative error
  std::map<std::string, double> observed;   // per-target model value
  bool converged = false;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

// Derivative-free fit (Nelder-Mead + coordinate polish) of the active
// parameters against the weighted targets. Deterministic for fixed inputs.
// An empty active set means "fit every declared parameter". Residuals are
// reported for every target even when the budget runs out (converged=false).
// Throws InfeasibleDesignError before simulating when the base design fails
// the geometric constraints.
CalibrationResult calibrate(const CalibrationTargets& targets, const ScenarioParams& base,
                            int budget_evals,
                            const std::vector<std::string>& active = {});

std::string calibration_to_json(const CalibrationResult& result);
void save_calibration(const std::string& path, const CalibrationResult& result);

// Beam-length search: maximizes stored-energy-at-torsion x bistability-margin
// (the declared proxy for "balanced performance") over the feasible lengths.
struct BeamLengthCandidate {
  double length_mm = 0.0;
  double trigger_n = 0.0;
  double output_at_torsion_n = 0.0;
  double phi_kill_deg = 0.0;
  double objective = 0.0;
};
struct BeamLengthReport {
  double best_length_mm = 0.0;
  std::vector<BeamLengthCandidate> candidates;
};
// The probe torsion angle used by the balance objective.
inline constexpr double kBalanceTorsionDeg = 10.0;

BeamLengthReport optimize_beam_length(
    const std::vector<double>& grid_mm, const ScenarioParams& params,
    const std::function<double(double)>& objective_override = nullptr);

// Fin-area search: golden-section on impulse(area), validated by a grid
// unimodality check; non-unimodal grids fall back to the exhaustive argmax.
struct FinAreaReport {
  double best_area_mm2 = 0.0;
  double best_impulse_ns = 0.0;
  std::vector<SweepRow> grid;
  bool used_grid_fallback = false;
  double tolerance_mm2 = 25.0;
};
FinAreaReport optimize_fin_area(
    double lo_mm2, double hi_mm2, const ScenarioParams& params,
    const std::function<double(double)>& objective_override = nullptr,
    double tolerance_mm2 = 25.0);

}  // namespace lamsa
