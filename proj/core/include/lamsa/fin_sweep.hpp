// Fin-size sweep: one actuation cycle per candidate area with self-similar
// trapezoid scaling. Per-area failures are reported in the row status, never
// abort the sweep.
#pragma once

#include <string>
#include <vector>

#include "lamsa/scenario.hpp"

namespace lamsa {

struct SweepRow {
  double area_mm2 = 0.0;
  double peak_thrust_n = 0.0;
  double impulse_ns = 0.0;
  std::string status = "ok";  // or the failure kind
};

std::vector<SweepRow> fin_size_sweep(const std::vector<double>& areas_mm2,
                                     const ScenarioParams& params, int jobs = 1);

// Scenario with the fin rescaled to the given area (aspect and taper held).
ScenarioParams with_fin_area(const ScenarioParams& params, double area_mm2);

}  // namespace lamsa
