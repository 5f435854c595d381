#include "lamsa/beam.hpp"

#include <algorithm>
#include <cmath>

#include "lamsa/sim_error.hpp"
#include "lamsa/units.hpp"

namespace lamsa {

using units::kPi;

namespace {
// Exponent of the collapse-proximity factor in output_force. A model-form
// constant, not a calibration parameter: large enough that the factor stays
// near 1 far from collapse and bites hard close to it.
constexpr double kKillExponent = 8.0;
}  // namespace

double BeamSpec::second_moment_mm4() const {
  return width_mm * thickness_mm * thickness_mm * thickness_mm / 12.0;
}

double BeamSpec::bending_stiffness_n_per_mm() const {
  const double l3 = length_mm * length_mm * length_mm;
  return stiffness_scale * e_mod_mpa * second_moment_mm4() * kPi * kPi * kPi * kPi / l3;
}

double BeamSpec::buckling_load_n() const {
  return stiffness_scale * kPi * kPi * e_mod_mpa * second_moment_mm4() /
         (length_mm * length_mm);
}

void BeamSpec::validate() const {
  if (!(length_mm > 0.0 && thickness_mm > 0.0 && width_mm > 0.0 && e_mod_mpa > 0.0))
    throw DomainError("beam: dimensions and modulus must be positive");
  if (!(length_mm / thickness_mm >= 5.0))
    throw DomainError("beam: L/t below reduced-order validity floor of 5");
  if (torsion_gain < 0.0 || torsion_kill < 0.0)
    throw DomainError("beam: torsion coefficients must be non-negative");
  if (!(stiffness_scale > 0.0))
    throw DomainError("beam: stiffness scale must be positive");
}

double effective_compression(double delta_mm, double phi_deg, const BeamSpec& spec) {
  const double phi = units::deg_to_rad(phi_deg);
  return delta_mm * (1.0 + spec.torsion_gain * phi * phi);
}

double well_amplitude(double delta_eff_mm, const BeamSpec& spec) {
  if (delta_eff_mm <= 0.0) return 0.0;
  return (2.0 / kPi) * std::sqrt(spec.length_mm * delta_eff_mm);
}

bool bistability_intact(double delta_mm, double phi_deg, const BeamSpec& spec) {
  const double de = effective_compression(delta_mm, phi_deg, spec);
  if (de <= 0.0) return false;
  const double phi = units::deg_to_rad(phi_deg);
  const double dcrit = spec.critical_compression_ratio * spec.length_mm;
  const double dmax = dcrit * (1.0 - spec.torsion_kill * phi * phi);
  return de < dmax;
}

double stable_amplitude(double delta_mm, double phi_deg, const BeamSpec& spec) {
  if (!bistability_intact(delta_mm, phi_deg, spec)) return 0.0;
  const double de = effective_compression(delta_mm, phi_deg, spec);
  const double phi = units::deg_to_rad(phi_deg);
  const double dcrit = spec.critical_compression_ratio * spec.length_mm;
  const double dmax = dcrit * (1.0 - spec.torsion_kill * phi * phi);
  const double u = de / dmax;
  const double u0 = std::min(delta_mm / dcrit, 0.9999);
  const double erosion = (1.0 - std::pow(u, kKillExponent)) /
                         (1.0 - std::pow(u0, kKillExponent));
  return well_amplitude(de, spec) * std::min(1.0, erosion);
}

BeamBranch classify_branch(double q_mm, double delta_mm, double phi_deg,
                           const BeamSpec& spec) {
  if (!bistability_intact(delta_mm, phi_deg, spec)) return BeamBranch::Monostable;
  return q_mm < 0.0 ? BeamBranch::DownWell : BeamBranch::UpWell;
}

double potential_energy(double q_mm, double delta_mm, double phi_deg,
                        const BeamSpec& spec) {
  spec.validate();
  const double kb = spec.bending_stiffness_n_per_mm();
  const double qbar = stable_amplitude(delta_mm, phi_deg, spec);
  // Torsion stores energy in a lumped rotational spring; scale with k_b L^2 so
  // it has energy units without introducing another free constant.
  const double phi = units::deg_to_rad(phi_deg);
  const double kt = kb * spec.length_mm * spec.length_mm * 0.01;
  const double torsion_term = 0.5 * kt * phi * phi;
  if (qbar <= 0.0) return 0.5 * kb * q_mm * q_mm + torsion_term;
  const double z = q_mm * q_mm - qbar * qbar;
  return kb / (4.0 * qbar * qbar) * z * z + torsion_term;
}

double restoring_force(double q_mm, double delta_mm, double phi_deg,
                       const BeamSpec& spec) {
  spec.validate();
  const double kb = spec.bending_stiffness_n_per_mm();
  const double qbar = stable_amplitude(delta_mm, phi_deg, spec);
  if (qbar <= 0.0) return -kb * q_mm;
  return -kb / (qbar * qbar) * q_mm * (q_mm * q_mm - qbar * qbar);
}

double trigger_force(double delta_mm, double phi_deg, const BeamSpec& spec) {
  spec.validate();
  const double qbar = stable_amplitude(delta_mm, phi_deg, spec);
  if (qbar <= 0.0) throw DomainError("trigger_force: no barrier to trigger");
  return 2.0 * spec.bending_stiffness_n_per_mm() * qbar / (3.0 * std::sqrt(3.0));
}

double output_force(double delta_mm, double phi_deg, const BeamSpec& spec) {
  spec.validate();
  if (!bistability_intact(delta_mm, phi_deg, spec))
    throw DomainError("output_force: bistability lost");
  // Post-snap peak: torsion grows the raw amplitude (stored-energy gain) and
  // the collapse-proximity erosion shrinks it; at phi = 0 this reduces to the
  // trigger force exactly.
  return 2.0 * spec.bending_stiffness_n_per_mm() *
         stable_amplitude(delta_mm, phi_deg, spec) / (3.0 * std::sqrt(3.0));
}

double barrier_energy(double delta_mm, double phi_deg, const BeamSpec& spec) {
  const double qbar = stable_amplitude(delta_mm, phi_deg, spec);
  return spec.bending_stiffness_n_per_mm() * qbar * qbar / 4.0;
}

}  // namespace lamsa
