// Quasi-steady blade-element hydrodynamics for the trapezoidal fins.
//
// The fin is a flat trapezoid hinged at its root, chord c(r) linear from
// root_chord to tip_chord over span b. Strip normal force at radius r is
// 1/2 rho C_n c(r) (omega r)^2, integrated over the span. Sign convention:
// positive fin angular velocity produces positive vertical force in the body
// frame (the hinge orientation that makes the snap stroke the thrust stroke);
// the reaction torque on the fin always opposes its motion.
#pragma once

#include <vector>

namespace lamsa {

struct FinSpec {
  double area_mm2 = 4000.0;
  double root_chord_mm = 0.0;
  double tip_chord_mm = 0.0;
  double span_mm = 0.0;
  double deflection_beta_deg = 0.0;  // servo-set rotation of the fin plane
  double c_n = 0.10;                 // normal-force coefficient, calibrated
  double c_a = 0.03;                 // added-mass coefficient, calibrated
  double areal_density_g_mm2 = 1.1e-3;  // silicone sheet structural density

  void validate() const;  // trapezoid consistency and positivity

  // Span moments of the chord distribution.
  double chord_at_mm(double r_mm) const;
  double moment2_mm4() const;  // integral c(r) r^2 dr  (force lever)
  double moment3_mm5() const;  // integral c(r) r^3 dr  (torque lever)
  double moment_c2r2_mm5() const;  // integral c(r)^2 r^2 dr (added mass)
};

// Builds a trapezoid of the requested area with fixed aspect ratio
// (span^2/area) and taper (tip/root chord), the self-similar scaling used by
// the fin-size sweep.
FinSpec make_fin(double area_mm2, double aspect_ratio, double taper,
                 double c_n, double c_a, double deflection_beta_deg = 0.0);

struct FluidEnv {
  double rho_kg_m3 = 1000.0;
  double g_m_s2 = 9.81;
  void validate() const;
};

// Instantaneous fin force in the body frame, N. The fin plane sits at angle
// theta_fin from horizontal, rotated by beta about its spanwise axis.
struct FinForce {
  double vertical_n = 0.0;    // +z body axis
  double tangential_n = 0.0;  // in-plane, perpendicular to the fin's radial arm
  double radial_n = 0.0;      // along the fin's radial arm
};
FinForce fin_force(double omega_rad_s, double theta_fin_deg, const FinSpec& fin,
                   const FluidEnv& fluid);

// Magnitude of the quasi-steady normal force for a given angular rate, N.
double fin_normal_force(double omega_rad_s, const FinSpec& fin, const FluidEnv& fluid);

// Hydrodynamic torque opposing fin rotation, N*mm (signed, opposes omega).
double fin_resisting_torque(double omega_rad_s, const FinSpec& fin, const FluidEnv& fluid);

// Rotational added-mass inertia C_a * rho * integral c^2 r^2 dr, g*mm^2.
double added_mass_inertia(const FinSpec& fin, const FluidEnv& fluid);

// Structural inertia of the fin sheet about the hinge, g*mm^2.
double structural_inertia(const FinSpec& fin);

// Trapezoidal quadrature of a thrust series on a uniform time grid, N*s.
// Rejects empty input.
double cycle_impulse(const std::vector<double>& time_s, const std::vector<double>& thrust_n);

}  // namespace lamsa
