#include <cmath>
#include <random>

#include "doctest.h"
#include "lamsa/config.hpp"
#include "lamsa/nelder_mead.hpp"
#include "lamsa/optimize.hpp"
#include "lamsa/sim_error.hpp"

using namespace lamsa;

TEST_CASE("nelder-mead minimizes a shifted quadratic inside a box") {
  auto f = [](const std::vector<double>& x) {
    const double a = x[0] - 1.3, b = x[1] + 0.4;
    return 3.0 * a * a + b * b;
  };
  NelderMeadOptions opts;
  opts.max_evals = 600;
  const NelderMeadResult res = nelder_mead(f, {0.0, 0.0}, {-5.0, -5.0}, {5.0, 5.0}, opts);
  CHECK(res.converged);
  CHECK(res.x[0] == doctest::Approx(1.3).epsilon(1e-3));
  CHECK(res.x[1] == doctest::Approx(-0.4).epsilon(1e-2));
  // deterministic: identical inputs give identical iterates
  const NelderMeadResult res2 = nelder_mead(f, {0.0, 0.0}, {-5.0, -5.0}, {5.0, 5.0}, opts);
  CHECK(res.x == res2.x);
  CHECK(res.evals == res2.evals);
}

TEST_CASE("nelder-mead respects bounds when the minimum sits outside") {
  auto f = [](const std::vector<double>& x) { return (x[0] - 10.0) * (x[0] - 10.0); };
  const NelderMeadResult res = nelder_mead(f, {0.5}, {0.0}, {2.0}, {});
  CHECK(res.x[0] <= 2.0);
  CHECK(res.x[0] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("measure_observables reports the shipped design") {
  const Observables obs = measure_observables(default_params(), {.locomotion = true,
                                                                 .area_sweep = false});
  REQUIRE(obs.valid);
  CHECK(obs.impulse_ns > 0.05);
  CHECK(obs.rise_mm > 10.0);
  CHECK(obs.load_release_ratio > 3.0);
}

TEST_CASE("calibrate refuses an infeasible base design") {
  ScenarioParams p = default_params();
  p.beam.length_mm = 55.0;  // outside (37.5, 51.43)
  CHECK_THROWS_AS(calibrate(p.targets, p, 10), InfeasibleDesignError);
}

TEST_CASE("calibrate is deterministic and bound-respecting") {
  ScenarioParams p = default_params();
  // cheap single-observable fit so the unit test stays fast
  p.targets = CalibrationTargets{};
  p.targets.peak_thrust_n.weight = 0.0;
  p.targets.rise_mm.weight = 0.0;
  p.targets.dip_mm.weight = 0.0;
  p.targets.net_rise_mm.weight = 0.0;
  p.targets.optimum_area_mm2.weight = 0.0;
  p.targets.load_release_ratio.weight = 0.0;
  p.targets.impulse_ns.value = 0.150;
  const std::vector<std::string> active = {"fin.c_n"};
  const CalibrationResult a = calibrate(p.targets, p, 60, active);
  const CalibrationResult b = calibrate(p.targets, p, 60, active);
  CHECK(calibration_to_json(a) == calibration_to_json(b));
  // single-objective sanity: the weighted target lands within its tolerance
  CHECK(std::abs(a.residuals.at("impulse_ns")) < p.targets.impulse_ns.tol);
  // every fitted value inside its declared box
  for (const auto& cp : calibration_params()) {
    const double v = a.fitted.at(cp.name);
    CHECK(v >= cp.lo);
    CHECK(v <= cp.hi);
  }
  // residuals reported for every target even though most had zero weight
  CHECK(a.residuals.size() == 7);
}

TEST_CASE("beam length search picks the 40 mm beam under the shipped calibration") {
  const ScenarioParams p = default_params();
  const BeamLengthReport rep = optimize_beam_length({38.0, 40.0, 42.0}, p);
  CHECK(rep.best_length_mm == doctest::Approx(40.0));
  REQUIRE(rep.candidates.size() == 3);
  // report carries trigger, torsion output and robustness per candidate
  for (const auto& c : rep.candidates) {
    CHECK(c.trigger_n > 0.0);
    CHECK(c.phi_kill_deg > 10.0);
  }
  // trigger ordering is visible in the report
  CHECK(rep.candidates[0].trigger_n < rep.candidates[1].trigger_n);
  CHECK(rep.candidates[1].trigger_n < rep.candidates[2].trigger_n);
}

TEST_CASE("beam length search errors") {
  ScenarioParams p = default_params();
  p.geometry.d1_mm = 10.0;
  p.geometry.h_mm = 20.0;  // empty Eq. 3 interval
  CHECK_THROWS_AS(optimize_beam_length({38.0, 40.0}, p), InfeasibleDesignError);

  ScenarioParams ok = default_params();
  CHECK_THROWS_AS(optimize_beam_length({20.0, 60.0}, ok), InfeasibleDesignError);
}

TEST_CASE("a monotone synthetic objective selects the endpoint") {
  const ScenarioParams p = default_params();
  const BeamLengthReport rep =
      optimize_beam_length({38.0, 40.0, 42.0}, p, [](double l) { return l; });
  CHECK(rep.best_length_mm == doctest::Approx(42.0));
}

TEST_CASE("golden-section finds the vertex of a concave quadratic within 1 mm^2") {
  const ScenarioParams p = default_params();
  const double vertex = 3210.0;
  auto impulse = [vertex](double a) { return -(a - vertex) * (a - vertex); };
  const FinAreaReport rep = optimize_fin_area(1000.0, 4500.0, p, impulse, 0.5);
  CHECK(!rep.used_grid_fallback);
  CHECK(std::abs(rep.best_area_mm2 - vertex) < 1.0);
}

TEST_CASE("golden-section agrees with the brute-force grid argmax") {
  const ScenarioParams p = default_params();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> vd(1500.0, 4000.0);
  std::uniform_real_distribution<double> wd(500.0, 2000.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double vertex = vd(rng), width = wd(rng);
    auto impulse = [=](double a) {
      const double z = (a - vertex) / width;
      return std::exp(-z * z);  // smooth unimodal hump
    };
    const FinAreaReport rep = optimize_fin_area(1000.0, 4500.0, p, impulse, 10.0);
    double best_a = 0.0, best_v = -1e300;
    for (double a = 1000.0; a <= 4500.0; a += 10.0) {
      if (impulse(a) > best_v) {
        best_v = impulse(a);
        best_a = a;
      }
    }
    CHECK(std::abs(rep.best_area_mm2 - best_a) <= 2.0 * rep.tolerance_mm2);
  }
}

TEST_CASE("non-unimodal grids fall back to the exhaustive argmax") {
  const ScenarioParams p = default_params();
  auto two_humps = [](double a) {
    return std::exp(-std::pow((a - 1500.0) / 250.0, 2)) +
           1.4 * std::exp(-std::pow((a - 3800.0) / 250.0, 2));
  };
  const FinAreaReport rep = optimize_fin_area(1000.0, 4500.0, p, two_humps, 25.0);
  CHECK(rep.used_grid_fallback);
  CHECK(rep.best_area_mm2 == doctest::Approx(3800.0).epsilon(0.02));
}

TEST_CASE("fin size sweep reports per-row failures without aborting") {
  ScenarioParams p = default_params();
  p.beam.length_mm = 36.0;  // monostable: every cycle refuses to fire
  const auto rows = fin_size_sweep({2000.0, 4000.0}, p);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].status == "no_fire");
  CHECK(rows[1].status == "no_fire");

  const auto single = fin_size_sweep({4000.0}, default_params());
  REQUIRE(single.size() == 1);
  CHECK(single[0].status == "ok");
  CHECK(single[0].impulse_ns > 0.0);
}

TEST_CASE("optimize_fin_area validates its range") {
  const ScenarioParams p = default_params();
  CHECK_THROWS_AS(optimize_fin_area(100.0, 4500.0, p), DomainError);
  CHECK_THROWS_AS(optimize_fin_area(4000.0, 9000.0, p), DomainError);
}
