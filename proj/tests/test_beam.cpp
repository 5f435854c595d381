#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "lamsa/beam.hpp"
#include "lamsa/sim_error.hpp"
#include "lamsa/units.hpp"

using namespace lamsa;

namespace {

BeamSpec make_beam(double length = 40.0) {
  BeamSpec b;
  b.length_mm = length;
  return b;
}

// Numerical maximum of |restoring_force| over the loaded-side interval.
double grid_trigger(double delta, double phi, const BeamSpec& spec, int n = 100000) {
  const double qbar = stable_amplitude(delta, phi, spec);
  double best = 0.0;
  for (int i = 1; i < n; ++i) {
    const double q = -qbar + qbar * double(i) / n;  // (-qbar, 0)
    best = std::max(best, std::abs(restoring_force(q, delta, phi, spec)));
  }
  return best;
}

// Count stationary points of the potential via sign changes of the force.
int stationary_points(double delta, double phi, const BeamSpec& spec, double tilt_n = 0.0) {
  const double span = std::max(1.0, 2.0 * well_amplitude(
                                        effective_compression(delta, phi, spec), spec));
  const int n = 4000;
  int count = 0;
  double prev = restoring_force(-span, delta, phi, spec) + tilt_n;
  for (int i = 1; i <= n; ++i) {
    const double q = -span + 2.0 * span * double(i) / n;
    const double f = restoring_force(q, delta, phi, spec) + tilt_n;
    if ((prev < 0.0 && f >= 0.0) || (prev > 0.0 && f <= 0.0)) ++count;
    prev = f;
  }
  return count;
}

}  // namespace

TEST_CASE("well amplitude") {
  const BeamSpec b = make_beam();
  CHECK(well_amplitude(0.0, b) == doctest::Approx(0.0));
  CHECK(well_amplitude(-1.0, b) == doctest::Approx(0.0));
  // L=40, delta=2.5: (2/pi) sqrt(100) = 6.3661977...
  const double qbar = well_amplitude(2.5, b);
  CHECK(qbar == doctest::Approx(6.366197723675814).epsilon(1e-12));
  // end-shortening of the first mode recovers the compression
  CHECK(units::kPi * units::kPi * qbar * qbar / (4.0 * b.length_mm) ==
        doctest::Approx(2.5).epsilon(1e-12));
  // monotone in compression
  CHECK(well_amplitude(3.0, b) > qbar);
}

TEST_CASE("tension cannot buckle: negative delta is monostable") {
  const BeamSpec b = make_beam();
  CHECK(classify_branch(0.0, -0.5, 0.0, b) == BeamBranch::Monostable);
  CHECK(stable_amplitude(-0.5, 0.0, b) == doctest::Approx(0.0));
  CHECK(classify_branch(-3.0, 2.5, 0.0, b) == BeamBranch::DownWell);
  CHECK(classify_branch(3.0, 2.5, 0.0, b) == BeamBranch::UpWell);
}

TEST_CASE("potential is an even double well at zero torsion") {
  const BeamSpec b = make_beam();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> qd(-12.0, 12.0);
  for (int i = 0; i < 200; ++i) {
    const double q = qd(rng);
    CHECK(potential_energy(q, 4.0, 0.0, b) ==
          doctest::Approx(potential_energy(-q, 4.0, 0.0, b)).epsilon(1e-12));
  }
  const double qbar = stable_amplitude(4.0, 0.0, b);
  CHECK(potential_energy(qbar, 4.0, 0.0, b) ==
        doctest::Approx(potential_energy(-qbar, 4.0, 0.0, b)));
  // barrier height by construction: U(0) - U(qbar) = k_b qbar^2 / 4
  const double kb = b.bending_stiffness_n_per_mm();
  CHECK(potential_energy(0.0, 4.0, 0.0, b) - potential_energy(qbar, 4.0, 0.0, b) ==
        doctest::Approx(kb * qbar * qbar / 4.0).epsilon(1e-12));
  CHECK(barrier_energy(4.0, 0.0, b) == doctest::Approx(kb * qbar * qbar / 4.0));
}

TEST_CASE("restoring force vanishes exactly at the three equilibria") {
  const BeamSpec b = make_beam();
  const double qbar = stable_amplitude(4.0, 0.0, b);
  CHECK(restoring_force(0.0, 4.0, 0.0, b) == doctest::Approx(0.0));
  CHECK(restoring_force(qbar, 4.0, 0.0, b) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(restoring_force(-qbar, 4.0, 0.0, b) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("restoring force matches finite differences of the potential") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> qd(-10.0, 10.0);
  std::uniform_real_distribution<double> dd(0.5, 5.5);
  std::uniform_real_distribution<double> ld(38.0, 42.0);
  std::uniform_real_distribution<double> pd(0.0, 8.0);
  for (int i = 0; i < 100; ++i) {
    BeamSpec b = make_beam(ld(rng));
    const double q = qd(rng), delta = dd(rng), phi = pd(rng);
    const double h = 1e-5;
    const double fd = -(potential_energy(q + h, delta, phi, b) -
                        potential_energy(q - h, delta, phi, b)) /
                      (2.0 * h);
    const double f = restoring_force(q, delta, phi, b);
    const double scale = std::max(1e-6, std::abs(f));
    CHECK(std::abs(f - fd) / scale < 1e-6);
  }
}

TEST_CASE("trigger force equals the analytic peak and the grid search") {
  const BeamSpec b = make_beam();
  const double analytic = trigger_force(4.0, 0.0, b);
  const double qbar = stable_amplitude(4.0, 0.0, b);
  CHECK(analytic == doctest::Approx(2.0 * b.bending_stiffness_n_per_mm() * qbar /
                                    (3.0 * std::sqrt(3.0))));
  CHECK(std::abs(grid_trigger(4.0, 0.0, b) - analytic) / analytic < 1e-4);
  // vanishing barrier as compression goes to zero
  CHECK(trigger_force(1e-4, 0.0, b) < trigger_force(1e-2, 0.0, b));
  CHECK(trigger_force(1e-6, 0.0, b) < trigger_force(1e-4, 0.0, b));
  CHECK(trigger_force(1e-10, 0.0, b) < 1e-4);
  CHECK_THROWS_AS(trigger_force(-1.0, 0.0, b), DomainError);
}

TEST_CASE("barrier, trigger and output force increase with length-thickness ratio") {
  // Ultimate compression with the shipped linkage: delta = L - D1, D1 = 36.
  const double d1 = 36.0;
  double prev_barrier = 0.0, prev_trigger = 0.0, prev_output = 0.0;
  for (double length : {38.0, 40.0, 42.0}) {
    const BeamSpec b = make_beam(length);
    const double delta = length - d1;
    const double barrier = barrier_energy(delta, 0.0, b);
    const double trig = trigger_force(delta, 0.0, b);
    const double out = output_force(delta, 0.0, b);
    CHECK(barrier > prev_barrier);
    CHECK(trig > prev_trigger);
    CHECK(out > prev_output);
    CHECK(out == doctest::Approx(trig));  // symmetric well at zero torsion
    prev_barrier = barrier;
    prev_trigger = trig;
    prev_output = out;
  }
}

TEST_CASE("slight torsion raises output for ratios 9.5 and 10, lowers it for 10.5") {
  const double d1 = 36.0;
  const double phi = 10.0;
  for (double length : {38.0, 40.0}) {
    const BeamSpec b = make_beam(length);
    const double delta = length - d1;
    CHECK(output_force(delta, phi, b) > output_force(delta, 0.0, b));
  }
  const BeamSpec b42 = make_beam(42.0);
  CHECK(output_force(6.0, phi, b42) < output_force(6.0, 0.0, b42));
}

TEST_CASE("large torsion eliminates bistability") {
  const BeamSpec b = make_beam();
  const double delta = 4.0;
  CHECK(bistability_intact(delta, 0.0, b));
  CHECK(bistability_intact(delta, 10.0, b));
  CHECK(!bistability_intact(0.0, 0.0, b));  // nothing stored
  // a kill angle exists and the intact set in phi is an interval [0, kill)
  double kill = -1.0;
  bool seen_dead = false;
  for (double phi = 0.0; phi <= 40.0; phi += 0.05) {
    const bool ok = bistability_intact(delta, phi, b);
    if (!ok && kill < 0.0) kill = phi;
    if (kill >= 0.0) CHECK(!ok);  // never comes back
    seen_dead = seen_dead || !ok;
  }
  CHECK(seen_dead);
  CHECK(kill > 10.0);
  CHECK(kill < 20.0);
  CHECK_THROWS_WITH_AS(output_force(delta, kill + 1.0, b), "output_force: bistability lost",
                       DomainError);
}

TEST_CASE("crossing the collapse boundary takes the root count from 3 to 1") {
  const BeamSpec b = make_beam();
  CHECK(stationary_points(4.0, 0.0, b) == 3);
  CHECK(stationary_points(4.0, 12.0, b) == 3);
  CHECK(stationary_points(4.0, 14.0, b) == 1);  // past the kill angle
  CHECK(stationary_points(-0.5, 0.0, b) == 1);  // tension
}

TEST_CASE("effective compression is even in phi and inert when gamma1 = 0") {
  BeamSpec b = make_beam();
  CHECK(effective_compression(3.0, 0.0, b) == doctest::Approx(3.0));
  CHECK(effective_compression(3.0, 7.0, b) ==
        doctest::Approx(effective_compression(3.0, -7.0, b)));
  CHECK(effective_compression(3.0, 7.0, b) > 3.0);
  b.torsion_gain = 0.0;
  CHECK(effective_compression(3.0, 25.0, b) == doctest::Approx(3.0));
}

TEST_CASE("reduced-order validity floor") {
  BeamSpec b = make_beam(15.0);  // L/t = 3.75
  CHECK_THROWS_AS(b.validate(), DomainError);
  b = make_beam();
  b.e_mod_mpa = 0.0;
  CHECK_THROWS_AS(b.validate(), DomainError);
}
