#include "lamsa/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "lamsa/actuator.hpp"
#include "lamsa/body.hpp"
#include "lamsa/config.hpp"
#include "lamsa/nelder_mead.hpp"
#include "lamsa/sim_error.hpp"
#include "lamsa/units.hpp"

namespace lamsa {

namespace {

const std::vector<double> kSweepGrid = {1000, 1500, 2000, 2500, 3000, 3500, 4000, 4500};

double argmax_area(const std::vector<SweepRow>& rows) {
  double best_area = 0.0, best_impulse = -1e300;
  for (const auto& r : rows) {
    if (r.status == "ok" && r.impulse_ns > best_impulse) {
      best_impulse = r.impulse_ns;
      best_area = r.area_mm2;
    }
  }
  return best_area;
}

}  // namespace

ScenarioParams with_fin_area(const ScenarioParams& params, double area_mm2) {
  ScenarioParams p = params;
  const double density = p.fin.areal_density_g_mm2;
  p.fin = make_fin(area_mm2, p.fin_aspect_ratio, p.fin_taper, p.fin.c_n, p.fin.c_a,
                   p.fin.deflection_beta_deg);
  p.fin.areal_density_g_mm2 = density;
  return p;
}

std::vector<SweepRow> fin_size_sweep(const std::vector<double>& areas_mm2,
                                     const ScenarioParams& params, int jobs) {
  std::vector<SweepRow> rows(areas_mm2.size());
  auto run_row = [&](size_t i) {
    SweepRow& row = rows[i];
    row.area_mm2 = areas_mm2[i];
    try {
      const CycleTrace trace = run_cycle(with_fin_area(params, areas_mm2[i]));
      row.peak_thrust_n = trace.peak_thrust_n;
      row.impulse_ns = trace.impulse_ns;
    } catch (const SimulationError& e) {
      row.status = e.kind == SimFailure::NoFire    ? "no_fire"
                   : e.kind == SimFailure::Chatter ? "chatter"
                                                   : "instability";
    } catch (const DomainError&) {
      row.status = "invalid";
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (size_t i = 0; i < rows.size(); ++i) run_row(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (size_t i = next++; i < rows.size(); i = next++) run_row(i);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

Observables measure_observables(const ScenarioParams& params, const MeasureOptions& opts) {
  Observables obs;
  try {
    const CycleTrace trace = run_cycle(params);
    obs.peak_thrust_n = trace.peak_thrust_n;
    obs.impulse_ns = trace.impulse_ns;
    obs.load_release_ratio =
        trace.release_duration_s > 0.0 ? trace.loading_duration_s / trace.release_duration_s
                                       : 0.0;

    if (opts.locomotion) {
      ScenarioParams loco = params;
      loco.sim.cycles = std::max(4, params.sim.cycles);
      const Trajectory traj = simulate_locomotion(loco.sim.cycles, {0, 0, 0, 0}, loco);
      const PerCycleReport report = per_cycle_summary(traj);
      if (report.cycles.empty()) throw DomainError("no full cycle windows");
      const CycleWindowSummary& last = report.cycles.back();
      obs.rise_mm = last.rise_mm;
      obs.dip_mm = last.dip_mm;
      obs.net_rise_mm = last.net_mm;
    }
    if (opts.area_sweep)
      obs.optimum_area_mm2 = argmax_area(fin_size_sweep(kSweepGrid, params));
    obs.valid = true;
  } catch (const SimulationError& e) {
    obs.failure = e.what();
  } catch (const DomainError& e) {
    obs.failure = e.what();
  }
  return obs;
}

const std::vector<CalibrationParam>& calibration_params() {
  static const std::vector<CalibrationParam> params = {
      {"beam.stiffness_scale", 0.5, 40.0,
       [](const ScenarioParams& p) { return p.beam.stiffness_scale; },
       [](ScenarioParams& p, double v) { p.beam.stiffness_scale = v; }},
      {"fin.c_n", 0.01, 5.0, [](const ScenarioParams& p) { return p.fin.c_n; },
       [](ScenarioParams& p, double v) { p.fin.c_n = v; }},
      {"fin.c_a", 0.01, 2.0, [](const ScenarioParams& p) { return p.fin.c_a; },
       [](ScenarioParams& p, double v) { p.fin.c_a = v; }},
      {"connector.stiffness_nmm_per_rad", 100.0, 50000.0,
       [](const ScenarioParams& p) { return p.connector.stiffness_nmm_per_rad; },
       [](ScenarioParams& p, double v) { p.connector.stiffness_nmm_per_rad = v; }},
      {"connector.damping_nmm_s_per_rad", 0.5, 200.0,
       [](const ScenarioParams& p) { return p.connector.damping_nmm_s_per_rad; },
       [](ScenarioParams& p, double v) { p.connector.damping_nmm_s_per_rad = v; }},
      {"body.buoyancy_offset_n", -2.0, 0.5,
       [](const ScenarioParams& p) { return p.body.buoyancy_offset_n; },
       [](ScenarioParams& p, double v) { p.body.buoyancy_offset_n = v; }},
      {"body.drag_cd", 0.1, 8.0, [](const ScenarioParams& p) { return p.body.drag_cd; },
       [](ScenarioParams& p, double v) { p.body.drag_cd = v; }},
      {"beam.torsion_gain_per_rad2", 1.5, 2.5,
       [](const ScenarioParams& p) { return p.beam.torsion_gain; },
       [](ScenarioParams& p, double v) { p.beam.torsion_gain = v; }},
      {"beam.torsion_kill_per_rad2", 10.0, 14.0,
       [](const ScenarioParams& p) { return p.beam.torsion_kill; },
       [](ScenarioParams& p, double v) { p.beam.torsion_kill = v; }},
  };
  return params;
}

namespace {

struct TargetView {
  const char* name;
  const TargetSpec* spec;
  double Observables::* value;
};

std::vector<TargetView> target_views(const CalibrationTargets& t) {
  return {
      {"peak_thrust_n", &t.peak_thrust_n, &Observables::peak_thrust_n},
      {"impulse_ns", &t.impulse_ns, &Observables::impulse_ns},
      {"rise_mm", &t.rise_mm, &Observables::rise_mm},
      {"dip_mm", &t.dip_mm, &Observables::dip_mm},
      {"net_rise_mm", &t.net_rise_mm, &Observables::net_rise_mm},
      {"load_release_ratio", &t.load_release_ratio, &Observables::load_release_ratio},
      {"optimum_area_mm2", &t.optimum_area_mm2, &Observables::optimum_area_mm2},
  };
}

}  // namespace

CalibrationResult calibrate(const CalibrationTargets& targets, const ScenarioParams& base,
                            int budget_evals, const std::vector<std::string>& active) {
  targets.validate();
  const DesignFeasibility feas =
      validate_design(base.beam.length_mm, base.beam.thickness_mm, base.geometry);
  if (!feas.feasible)
    throw InfeasibleDesignError("calibrate: base design violates the geometric constraints");

  const auto& all_params = calibration_params();
  std::vector<const CalibrationParam*> fitted_params;
  for (const auto& p : all_params) {
    if (active.empty() || std::find(active.begin(), active.end(), p.name) != active.end())
      fitted_params.push_back(&p);
  }
  if (fitted_params.empty()) throw DomainError("calibrate: no active parameters");

  const auto views = target_views(targets);
  MeasureOptions mopts;
  mopts.locomotion = targets.rise_mm.weight > 0.0 || targets.dip_mm.weight > 0.0 ||
                     targets.net_rise_mm.weight > 0.0;
  mopts.area_sweep = targets.optimum_area_mm2.weight > 0.0;

  // Strictly positive boxes are searched in log space; the physics is
  // power-law in those constants, which straightens the objective valleys.
  auto to_internal = [](const CalibrationParam& p, double v) {
    return p.lo > 0.0 ? std::log(v) : v;
  };
  auto from_internal = [](const CalibrationParam& p, double y) {
    return p.lo > 0.0 ? std::exp(y) : y;
  };
  auto apply = [&](ScenarioParams& p, const std::vector<double>& y) {
    for (size_t i = 0; i < fitted_params.size(); ++i)
      fitted_params[i]->set(p, from_internal(*fitted_params[i], y[i]));
  };
  auto objective = [&](const std::vector<double>& y) {
    ScenarioParams p = base;
    apply(p, y);
    const Observables obs = measure_observables(p, mopts);
    if (!obs.valid) return 1e6;
    double sse = 0.0;
    for (const auto& v : views) {
      if (v.spec->weight <= 0.0) continue;
      const double rel = (obs.*(v.value) - v.spec->value) / v.spec->value;
      sse += v.spec->weight * rel * rel;
    }
    return sse;
  };

  std::vector<double> x0, lo, hi;
  for (const auto* p : fitted_params) {
    x0.push_back(to_internal(*p, std::clamp(p->get(base), p->lo, p->hi)));
    lo.push_back(to_internal(*p, p->lo));
    hi.push_back(to_internal(*p, p->hi));
  }

  NelderMeadOptions opts;
  opts.max_evals = budget_evals;
  opts.seed = base.seed;
  const NelderMeadResult nm = nelder_mead(objective, x0, lo, hi, opts);

  ScenarioParams best = base;
  apply(best, nm.x);
  const Observables obs = measure_observables(best);

  CalibrationResult result;
  for (const auto& p : all_params) result.fitted[p.name] = p.get(best);
  for (const auto& v : views) {
    const double model = obs.valid ? obs.*(v.value) : 0.0;
    result.observed[v.name] = model;
    result.residuals[v.name] = (model - v.spec->value) / v.spec->value;
  }
  result.converged = nm.converged && obs.valid;
  result.iterations = nm.evals;
  result.seed = base.seed;
  result.config_hash = config_hash(base);
  return result;
}

std::string calibration_to_json(const CalibrationResult& result) {
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = result.config_hash;
  j["seed"] = result.seed;
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  j["parameters"] = result.fitted;
  j["residuals"] = result.residuals;
  j["observed"] = result.observed;
  return j.dump(2) + "\n";
}

void save_calibration(const std::string& path, const CalibrationResult& result) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write calibration file " + path);
  out << calibration_to_json(result);
}

BeamLengthReport optimize_beam_length(const std::vector<double>& grid_mm,
                                      const ScenarioParams& params,
                                      const std::function<double(double)>& objective_override) {
  const BeamLengthBounds bounds = beam_length_bounds(params.geometry);
  if (bounds.empty())
    throw InfeasibleDesignError(
        "beam length design space is empty: sqrt(D1^2+H^2) >= (10/7) D1");

  BeamLengthReport report;
  double best = -1e300;
  for (double length : grid_mm) {
    const DesignFeasibility feas =
        validate_design(length, params.beam.thickness_mm, params.geometry);
    if (!feas.feasible) continue;

    BeamSpec beam = params.beam;
    beam.length_mm = length;
    const double delta = length - params.geometry.d1_mm;  // ultimate compression
    const double phi = kBalanceTorsionDeg;

    BeamLengthCandidate cand;
    cand.length_mm = length;
    cand.trigger_n = trigger_force(delta, 0.0, beam);
    cand.output_at_torsion_n =
        bistability_intact(delta, phi, beam) ? output_force(delta, phi, beam) : 0.0;
    const double dcrit = beam.critical_compression_ratio * length;
    const double denom = delta * beam.torsion_gain + dcrit * beam.torsion_kill;
    cand.phi_kill_deg =
        denom > 0.0 ? units::rad_to_deg(std::sqrt(std::max(0.0, (dcrit - delta) / denom)))
                    : 90.0;
    if (objective_override) {
      cand.objective = objective_override(length);
    } else {
      // Stored-energy-at-torsion x margin-to-collapse balance proxy.
      const double phir = units::deg_to_rad(phi);
      const double de = delta * (1.0 + beam.torsion_gain * phir * phir);
      const double dmax = dcrit * (1.0 - beam.torsion_kill * phir * phir);
      const double margin = dmax > 0.0 ? 1.0 - de / dmax : -1.0;
      cand.objective = margin > 0.0 ? barrier_energy(delta, phi, beam) * margin : -1.0;
    }
    report.candidates.push_back(cand);
    if (cand.objective > best) {
      best = cand.objective;
      report.best_length_mm = length;
    }
  }
  if (report.candidates.empty())
    throw InfeasibleDesignError(
        "no candidate length inside the feasible interval (" +
        std::to_string(bounds.l_min_mm) + ", " + std::to_string(bounds.l_max_mm) + ") mm");
  return report;
}

FinAreaReport optimize_fin_area(double lo_mm2, double hi_mm2, const ScenarioParams& params,
                                const std::function<double(double)>& objective_override,
                                double tolerance_mm2) {
  if (!(lo_mm2 >= 500.0 && hi_mm2 <= 6000.0 && lo_mm2 < hi_mm2))
    throw DomainError("optimize_fin_area: range must sit inside [500, 6000] mm^2");

  auto impulse_at = [&](double area) -> double {
    if (objective_override) return objective_override(area);
    try {
      return run_cycle(with_fin_area(params, area)).impulse_ns;
    } catch (const SimulationError&) {
      return -1e300;
    }
  };

  FinAreaReport report;
  report.tolerance_mm2 = tolerance_mm2;
  // Grid pass: both the unimodality check and the golden-section bracket.
  const int grid_n = 8;
  std::vector<double> grid_vals(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    SweepRow row;
    row.area_mm2 = lo_mm2 + (hi_mm2 - lo_mm2) * i / double(grid_n - 1);
    row.impulse_ns = impulse_at(row.area_mm2);
    row.peak_thrust_n = 0.0;
    if (row.impulse_ns <= -1e299) row.status = "failed";
    grid_vals[i] = row.impulse_ns;
    report.grid.push_back(row);
  }
  int peak_idx = int(std::max_element(grid_vals.begin(), grid_vals.end()) - grid_vals.begin());
  bool unimodal = true;
  for (int i = 1; i <= peak_idx; ++i)
    if (grid_vals[i] < grid_vals[i - 1]) unimodal = false;
  for (int i = peak_idx + 1; i < grid_n; ++i)
    if (grid_vals[i] > grid_vals[i - 1]) unimodal = false;

  if (!unimodal) {
    report.used_grid_fallback = true;
    double best_area = report.grid[peak_idx].area_mm2, best_val = grid_vals[peak_idx];
    for (double a = lo_mm2; a <= hi_mm2; a += report.tolerance_mm2) {
      const double v = impulse_at(a);
      if (v > best_val) {
        best_val = v;
        best_area = a;
      }
    }
    report.best_area_mm2 = best_area;
    report.best_impulse_ns = best_val;
    return report;
  }

  // Golden-section inside the bracketing grid cells around the peak.
  double a = report.grid[std::max(0, peak_idx - 1)].area_mm2;
  double b = report.grid[std::min(grid_n - 1, peak_idx + 1)].area_mm2;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = impulse_at(c), fd = impulse_at(d);
  while (b - a > report.tolerance_mm2) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = impulse_at(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = impulse_at(d);
    }
  }
  report.best_area_mm2 = 0.5 * (a + b);
  report.best_impulse_ns = impulse_at(report.best_area_mm2);
  return report;
}

}  // namespace lamsa
