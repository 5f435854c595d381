#include "lamsa/dispatch.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lamsa/body.hpp"
#include "lamsa/config.hpp"
#include "lamsa/optimize.hpp"
#include "lamsa/sim_error.hpp"
#include "lamsa/trace_io.hpp"

namespace lamsa {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

ScenarioConfig load_scenario(const CommonOpts& opts) {
  ScenarioConfig cfg =
      opts.config_path.empty() ? ScenarioConfig{default_params(), ""} : parse_config(opts.config_path);
  if (opts.seed) cfg.params.seed = *opts.seed;
  cfg.hash = config_hash(cfg.params);
  return cfg;
}

// One run directory per invocation, timestamp + config-hash prefix; never
// reuse an existing directory.
fs::path make_run_dir(const CommonOpts& opts, const std::string& hash) {
  fs::path dir;
  if (!opts.out_dir.empty()) {
    dir = opts.out_dir;
    if (fs::exists(dir)) throw ConfigError("output directory already exists: " + dir.string());
  } else {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(now).count();
    dir = fs::path("runs") / ("run-" + std::to_string(us) + "-" + hash.substr(0, 8));
    int salt = 0;
    while (fs::exists(dir))
      dir = fs::path("runs") / ("run-" + std::to_string(us) + "-" + hash.substr(0, 8) + "-" +
                                std::to_string(++salt));
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

void echo_config(const fs::path& dir, const ScenarioConfig& cfg) {
  write_text_file((dir / "config_echo.ini").string(),
                  "# " + std::string(kToolVersion) + "\n# config_hash=" + cfg.hash + "\n" +
                      serialize_config(cfg.params));
}

std::vector<double> parse_area_range(const std::string& text) {
  double lo = 0, hi = 0, step = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0 || hi < lo)
    throw ConfigError("--areas expects lo:hi:step with a positive step");
  std::vector<double> areas;
  for (double a = lo; a <= hi + 1e-9; a += step) areas.push_back(a);
  return areas;
}

int cmd_validate(const CommonOpts& opts) {
  const ScenarioConfig cfg = load_scenario(opts);
  const fs::path dir = make_run_dir(opts, cfg.hash);
  echo_config(dir, cfg);

  const DesignFeasibility feas =
      validate_design(cfg.params.beam.length_mm, cfg.params.beam.thickness_mm, cfg.params.geometry);
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = cfg.hash;
  j["l_mm"] = cfg.params.beam.length_mm;
  j["t_mm"] = cfg.params.beam.thickness_mm;
  j["length_thickness_ratio"] = cfg.params.beam.length_mm / cfg.params.beam.thickness_mm;
  j["l_min_mm"] = feas.l_min_mm;
  j["l_max_mm"] = feas.l_max_mm;
  j["feasible"] = feas.feasible;
  j["violated_constraints"] = feas.violated_constraints;
  j["eq1"] = "L > sqrt(D1^2 + H^2)";
  j["eq2"] = "0.7 L < D1";
  j["eq3"] = "sqrt(D1^2 + H^2) < L < (10/7) D1";
  write_text_file((dir / "feasibility.json").string(), j.dump(2) + "\n");
  std::cout << j.dump(2) << std::endl;
  return feas.feasible ? 0 : int(ExitCode::Infeasible);
}

int cmd_simulate(const CommonOpts& opts, int cycles, double deflect_lateral_deg) {
  ScenarioConfig cfg = load_scenario(opts);
  if (cycles > 0) cfg.params.sim.cycles = cycles;
  const fs::path dir = make_run_dir(opts, cfg.hash);
  echo_config(dir, cfg);
  const OutputStamp stamp{cfg.hash};

  const std::array<double, 4> betas = {deflect_lateral_deg, 0.0, deflect_lateral_deg, 0.0};
  const CycleTrace trace = run_cycle(cfg.params, betas);
  write_cycle_trace_csv((dir / "cycle_trace.csv").string(), trace, stamp);
  write_cycle_summary_json((dir / "cycle_summary.json").string(), trace, stamp);

  const Trajectory traj = simulate_locomotion(cfg.params.sim.cycles, betas, cfg.params);
  write_trajectory_csv((dir / "trajectory.csv").string(), traj, stamp);
  write_per_cycle_json((dir / "per_cycle.json").string(), per_cycle_summary(traj), stamp);
  std::cout << "run directory: " << dir.string() << std::endl;
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& areas, int jobs) {
  const ScenarioConfig cfg = load_scenario(opts);
  const fs::path dir = make_run_dir(opts, cfg.hash);
  echo_config(dir, cfg);
  const auto rows = fin_size_sweep(parse_area_range(areas), cfg.params, jobs);
  write_sweep_csv((dir / "sweep.csv").string(), rows, OutputStamp{cfg.hash});
  std::cout << "run directory: " << dir.string() << std::endl;
  return 0;
}

int cmd_steer(const CommonOpts& opts, const std::string& script_path) {
  const ScenarioConfig cfg = load_scenario(opts);
  const fs::path dir = make_run_dir(opts, cfg.hash);
  echo_config(dir, cfg);
  const SteeringScript script = load_steering_script(script_path);
  const Trajectory traj = steering_scenario(script, cfg.params);
  const OutputStamp stamp{cfg.hash};
  write_trajectory_csv((dir / "trajectory.csv").string(), traj, stamp);
  write_per_cycle_json((dir / "per_cycle.json").string(), per_cycle_summary(traj), stamp);
  std::cout << "run directory: " << dir.string() << std::endl;
  return 0;
}

int cmd_calibrate(const CommonOpts& opts, int budget) {
  const ScenarioConfig cfg = load_scenario(opts);
  const fs::path dir = make_run_dir(opts, cfg.hash);
  echo_config(dir, cfg);
  const CalibrationResult result = calibrate(cfg.params.targets, cfg.params, budget);
  save_calibration((dir / "calibration.json").string(), result);
  std::cout << calibration_to_json(result);
  return 0;
}

int cmd_optimize(const CommonOpts& opts, const std::string& what, const std::string& range) {
  const ScenarioConfig cfg = load_scenario(opts);
  const fs::path dir = make_run_dir(opts, cfg.hash);
  echo_config(dir, cfg);
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = cfg.hash;

  if (what == "beam-length") {
    std::vector<double> grid = {38.0, 40.0, 42.0};
    if (!range.empty()) {
      grid = parse_area_range(range);  // lo:hi:step works for lengths too
    }
    const BeamLengthReport report = optimize_beam_length(grid, cfg.params);
    j["best_length_mm"] = report.best_length_mm;
    j["candidates"] = nlohmann::ordered_json::array();
    for (const auto& c : report.candidates) {
      j["candidates"].push_back({{"length_mm", c.length_mm},
                                 {"trigger_n", c.trigger_n},
                                 {"output_at_torsion_n", c.output_at_torsion_n},
                                 {"phi_kill_deg", c.phi_kill_deg},
                                 {"objective", c.objective}});
    }
    write_text_file((dir / "beam_length.json").string(), j.dump(2) + "\n");
  } else if (what == "fin-area") {
    double lo = 1000.0, hi = 4500.0;
    if (!range.empty() && std::sscanf(range.c_str(), "%lf:%lf", &lo, &hi) != 2)
      throw ConfigError("--range expects lo:hi");
    const FinAreaReport report = optimize_fin_area(lo, hi, cfg.params);
    j["best_area_mm2"] = report.best_area_mm2;
    j["best_impulse_ns"] = report.best_impulse_ns;
    j["used_grid_fallback"] = report.used_grid_fallback;
    write_text_file((dir / "fin_area.json").string(), j.dump(2) + "\n");
    write_sweep_csv((dir / "fin_area_grid.csv").string(), report.grid, OutputStamp{cfg.hash});
  } else {
    throw ConfigError("--what must be beam-length or fin-area");
  }
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int error_json(ExitCode code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = message;
  j["exit_code"] = int(code);
  std::cerr << j.dump() << std::endl;
  return int(code);
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"latch-mediated bistable underwater propulsion simulator"};
  app.require_subcommand(1);

  CommonOpts common;
  std::uint64_t seed_value = 0;
  bool seed_given = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "scenario config file (INI)");
    sub->add_option("--out", common.out_dir, "output run directory (must not exist)");
    sub->add_option("--seed", seed_value, "override the config seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });
  };

  CLI::App* validate = app.add_subcommand("validate", "beam length feasibility report");
  add_common(validate);

  int cycles = 0;
  double deflect_lateral = 0.0;
  CLI::App* simulate = app.add_subcommand("simulate", "run cycle and locomotion simulation");
  add_common(simulate);
  simulate->add_option("--cycles", cycles, "number of crank revolutions");
  simulate->add_option("--deflect-lateral-deg", deflect_lateral,
                       "equal deflection of the lateral fin pair (0 and 2)");

  std::string areas = "1000:4500:500";
  int jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "fin-size sweep");
  add_common(sweep);
  sweep->add_option("--areas", areas, "area grid lo:hi:step in mm^2");
  sweep->add_option("--jobs", jobs, "sweep concurrency");

  std::string script_path;
  CLI::App* steer = app.add_subcommand("steer", "timed steering scenario");
  add_common(steer);
  steer->add_option("--script", script_path, "steering script file")->required();

  int budget = 400;
  CLI::App* calibrate_cmd = app.add_subcommand("calibrate", "fit model constants to targets");
  add_common(calibrate_cmd);
  calibrate_cmd->add_option("--budget", budget, "objective evaluation budget");

  std::string what, range;
  CLI::App* optimize_cmd = app.add_subcommand("optimize", "design-space search");
  add_common(optimize_cmd);
  optimize_cmd->add_option("--what", what, "beam-length or fin-area")->required();
  optimize_cmd->add_option("--range", range, "search range (lo:hi or lo:hi:step)");

  std::vector<std::string> argv = args;
  argv.insert(argv.begin(), "lamsa");
  std::vector<const char*> cargv;
  cargv.reserve(argv.size());
  for (const auto& a : argv) cargv.push_back(a.c_str());

  try {
    app.parse(int(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return error_json(ExitCode::ConfigError, e.what());
  }
  if (seed_given) common.seed = seed_value;

  try {
    if (validate->parsed()) return cmd_validate(common);
    if (simulate->parsed()) return cmd_simulate(common, cycles, deflect_lateral);
    if (sweep->parsed()) return cmd_sweep(common, areas, jobs);
    if (steer->parsed()) return cmd_steer(common, script_path);
    if (calibrate_cmd->parsed()) return cmd_calibrate(common, budget);
    if (optimize_cmd->parsed()) return cmd_optimize(common, what, range);
    return error_json(ExitCode::ConfigError, "no subcommand given");
  } catch (const ConfigError& e) {
    return error_json(ExitCode::ConfigError, e.what());
  } catch (const InfeasibleDesignError& e) {
    return error_json(ExitCode::Infeasible, e.what());
  } catch (const SimulationError& e) {
    return error_json(ExitCode::SimulationError, e.what());
  } catch (const DomainError& e) {
    return error_json(ExitCode::ConfigError, e.what());
  } catch (const std::exception& e) {
    return error_json(ExitCode::SimulationError, e.what());
  }
}

}  // namespace lamsa
