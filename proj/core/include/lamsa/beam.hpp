// Reduced-order model of the flexible silicone bistable element.
//
// A single transverse modal coordinate q (mm) lives in a compression-dependent
// quartic double well:
//
//   U(q) = k_b / (4 qbar^2) * (q^2 - qbar^2)^2 + 1/2 k_t phi^2   [mJ]
//
// with qbar = (2/pi) sqrt(L * delta_eff) from first-mode end-shortening and
// k_b = c_b * E * I * pi^4 / L^3 (I = w t^3 / 12) from pinned-pinned Euler
// stiffness. All shape freedom of the real molded strip sits in the
// calibration factor c_b.
//
// Torsion phi enters twice: it augments the effective compression
// (delta_eff = delta * (1 + gamma1 phi^2), phi in radians) and it erodes the
// compression headroom before bistability collapses
// (delta_max = delta_crit * (1 - gamma2 phi^2), delta_crit = 0.30 L by
// default). output_force() additionally applies a proximity-to-collapse
// factor (1 - u^8) / (1 - u0^8), u = delta_eff/delta_max, which leaves the
// zero-torsion value untouched and reproduces the observed sign pattern:
// small torsion raises output for low length-thickness ratios and lowers it
// near the collapse boundary.
#pragma once

namespace lamsa {

struct BeamSpec {
  double length_mm = 40.0;
  double thickness_mm = 4.0;
  double width_mm = 20.0;
  double e_mod_mpa = 3.6;        // Shore 60A silicone via Gent approximation
  double stiffness_scale = 8.6;  // c_b, calibrated
  double torsion_gain = 2.0;     // gamma1 [1/rad^2], calibrated
  double torsion_kill = 13.25;   // gamma2 [1/rad^2], calibrated
  double critical_compression_ratio = 0.30;

  double second_moment_mm4() const;  // w t^3 / 12
  double bending_stiffness_n_per_mm() const;  // k_b
  double buckling_load_n() const;  // c_b * pi^2 E I / L^2, axial plateau force
  void validate() const;
};

enum class BeamBranch { DownWell, UpWell, Monostable };

struct BeamState {
  double q_mm = 0.0;       // signed; q<0 fin-down well, q>0 fin-up well
  double delta_mm = 0.0;   // end shortening L - D(s)
  double phi_deg = 0.0;
  BeamBranch branch = BeamBranch::Monostable;
};

// delta_eff = delta * (1 + gamma1 * phi^2), phi converted to radians. Even in
// phi; identity when gamma1 = 0 or phi = 0.
double effective_compression(double delta_mm, double phi_deg, const BeamSpec& spec);

// Well amplitude qbar for a given (already effective) compression; zero for
// non-positive compression.
double well_amplitude(double delta_eff_mm, const BeamSpec& spec);

// Location of the stable equilibria |q| with the collapse-proximity erosion
// applied: qbar(delta_eff) * (1 - u^8)/(1 - u0^8), u = delta_eff/delta_max,
// u0 = delta/delta_crit. Equals well_amplitude exactly at phi = 0 and shrinks
// continuously to zero as torsion pushes the state toward the collapse
// boundary.
double stable_amplitude(double delta_mm, double phi_deg, const BeamSpec& spec);

// True iff 0 < delta_eff < delta_crit * (1 - gamma2 phi^2).
bool bistability_intact(double delta_mm, double phi_deg, const BeamSpec& spec);

BeamBranch classify_branch(double q_mm, double delta_mm, double phi_deg, const BeamSpec& spec);

// Potential energy in mJ. Double well when the (torsion-augmented) compression
// buckles the beam, single-well quadratic (k_b/2) q^2 otherwise. The torsion
// term 1/2 k_t phi^2 is a constant offset in q.
double potential_energy(double q_mm, double delta_mm, double phi_deg, const BeamSpec& spec);

// F = -dU/dq in N; analytic cubic, zero exactly at {-qbar, 0, +qbar}.
double restoring_force(double q_mm, double delta_mm, double phi_deg, const BeamSpec& spec);

// Peak force opposing a quasi-static traversal between wells:
// 2 k_b qbar / (3 sqrt(3)) evaluated at delta_eff. Throws DomainError when
// there is no barrier to trigger.
double trigger_force(double delta_mm, double phi_deg, const BeamSpec& spec);

// Peak post-snap force, same magnitude form as trigger_force but with the
// collapse-proximity factor applied. Throws DomainError when bistability is
// lost.
double output_force(double delta_mm, double phi_deg, const BeamSpec& spec);

// Barrier height U(0) - U(qbar) = k_b qbar^2 / 4 at delta_eff, in mJ.
double barrier_energy(double delta_mm, double phi_deg, const BeamSpec& spec);

}  // namespace lamsa
