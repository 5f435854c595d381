#include "lamsa/hydro.hpp"

#include <cmath>

#include "lamsa/sim_error.hpp"
#include "lamsa/units.hpp"

namespace lamsa {

void FinSpec::validate() const {
  if (!(area_mm2 > 0.0 && span_mm > 0.0 && root_chord_mm > 0.0 && tip_chord_mm >= 0.0))
    throw DomainError("fin: dimensions must be positive");
  const double trap = span_mm * (root_chord_mm + tip_chord_mm) / 2.0;
  if (std::abs(trap - area_mm2) > 1e-6 * area_mm2)
    throw DomainError("fin: area inconsistent with trapezoid span*(root+tip)/2");
  if (!(c_n > 0.0 && c_a > 0.0))
    throw DomainError("fin: force coefficients must be positive");
}

double FinSpec::chord_at_mm(double r_mm) const {
  return root_chord_mm + (tip_chord_mm - root_chord_mm) * (r_mm / span_mm);
}

// For c(r) = c_r + (c_t - c_r) r / b the moments have closed forms; keep them
// analytic so the quadrature tests have something independent to check.
double FinSpec::moment2_mm4() const {
  const double b = span_mm;
  return root_chord_mm * b * b * b / 3.0 +
         (tip_chord_mm - root_chord_mm) * b * b * b / 4.0;
}

double FinSpec::moment3_mm5() const {
  const double b = span_mm, b4 = b * b * b * b;
  return root_chord_mm * b4 / 4.0 + (tip_chord_mm - root_chord_mm) * b4 / 5.0;
}

double FinSpec::moment_c2r2_mm5() const {
  // c(r)^2 r^2 = (c_r + m r)^2 r^2 with m = (c_t - c_r)/b
  const double b = span_mm;
  const double m = (tip_chord_mm - root_chord_mm) / b;
  const double b3 = b * b * b, b4 = b3 * b, b5 = b4 * b;
  return root_chord_mm * root_chord_mm * b3 / 3.0 +
         2.0 * root_chord_mm * m * b4 / 4.0 + m * m * b5 / 5.0;
}

FinSpec make_fin(double area_mm2, double aspect_ratio, double taper,
                 double c_n, double c_a, double deflection_beta_deg) {
  if (!(area_mm2 > 0.0 && aspect_ratio > 0.0 && taper > 0.0 && taper <= 1.0))
    throw DomainError("make_fin: bad shape parameters");
  FinSpec fin;
  fin.area_mm2 = area_mm2;
  fin.span_mm = std::sqrt(aspect_ratio * area_mm2);
  fin.root_chord_mm = 2.0 * area_mm2 / (fin.span_mm * (1.0 + taper));
  fin.tip_chord_mm = taper * fin.root_chord_mm;
  fin.c_n = c_n;
  fin.c_a = c_a;
  fin.deflection_beta_deg = deflection_beta_deg;
  fin.validate();
  return fin;
}

void FluidEnv::validate() const {
  if (!(rho_kg_m3 > 0.0)) throw DomainError("fluid: density must be positive");
}

double fin_normal_force(double omega_rad_s, const FinSpec& fin, const FluidEnv& fluid) {
  const double rho = fluid.rho_kg_m3 * units::kKgPerM3ToGPerMm3;
  const double f_gmm = 0.5 * rho * fin.c_n * fin.moment2_mm4() * omega_rad_s *
                       std::abs(omega_rad_s);
  return f_gmm / units::kNewtonToGmmPerS2;
}

FinForce fin_force(double omega_rad_s, double theta_fin_deg, const FinSpec& fin,
                   const FluidEnv& fluid) {
  fin.validate();
  fluid.validate();
  const double fn = fin_normal_force(omega_rad_s, fin, fluid);
  const double th = units::deg_to_rad(theta_fin_deg);
  const double be = units::deg_to_rad(fin.deflection_beta_deg);
  FinForce out;
  out.vertical_n = fn * std::cos(th) * std::cos(be);
  out.tangential_n = fn * std::cos(th) * std::sin(be);
  out.radial_n = -fn * std::sin(th);
  return out;
}

double fin_resisting_torque(double omega_rad_s, const FinSpec& fin, const FluidEnv& fluid) {
  const double rho = fluid.rho_kg_m3 * units::kKgPerM3ToGPerMm3;
  const double t_gmm2 = 0.5 * rho * fin.c_n * fin.moment3_mm5() * omega_rad_s *
                        std::abs(omega_rad_s);
  return -t_gmm2 / units::kNmmToGmm2PerS2;
}

double added_mass_inertia(const FinSpec& fin, const FluidEnv& fluid) {
  const double rho = fluid.rho_kg_m3 * units::kKgPerM3ToGPerMm3;
  return fin.c_a * rho * fin.moment_c2r2_mm5();
}

double structural_inertia(const FinSpec& fin) {
  return fin.areal_density_g_mm2 * fin.moment2_mm4();
}

double cycle_impulse(const std::vector<double>& time_s, const std::vector<double>& thrust_n) {
  if (time_s.empty() || time_s.size() != thrust_n.size())
    throw DomainError("cycle_impulse: empty or mismatched trace");
  double acc = 0.0;
  for (size_t i = 1; i < time_s.size(); ++i)
    acc += 0.5 * (thrust_n[i] + thrust_n[i - 1]) * (time_s[i] - time_s[i - 1]);
  return acc;
}

}  // namespace lamsa
