#include "lamsa/geometry.hpp"

#include <cmath>

#include "lamsa/sim_error.hpp"

namespace lamsa {

double LinkageGeometry::d2_mm() const { return std::hypot(d1_mm, h_mm); }

void LinkageGeometry::validate() const {
  if (!(d1_mm > 0.0)) throw DomainError("geometry: D1 must be positive");
  // H = 0 is the degenerate fixed-joint case (D = D1 for every crank angle).
  if (!(h_mm >= 0.0)) throw DomainError("geometry: H must be non-negative");
  if (!(crank_radius_mm > 0.0))
    throw DomainError("geometry: crank radius must be positive");
  if (!(crank_radius_mm < rod_length_mm))
    throw DomainError("geometry: crank-slider lockup (r >= l)");
  // latch_fraction = 1 means the latch never engages (latch removed).
  if (!(latch_fraction > 0.0 && latch_fraction <= 1.0))
    throw DomainError("geometry: latch_fraction must be in (0,1]");
}

double slider_height(double crank_angle_rad, const LinkageGeometry& geom) {
  geom.validate();
  const double r = geom.crank_radius_mm;
  const double l = geom.rod_length_mm;
  const double st = std::sin(crank_angle_rad);
  const double raw = r * std::cos(crank_angle_rad) + std::sqrt(l * l - r * r * st * st);
  // raw range is [l - r, l + r]; map onto [0, H] with TDC at theta = 0.
  return (raw - (l - r)) / (2.0 * r) * geom.h_mm;
}

double joint_distance(double s_mm, const LinkageGeometry& geom) {
  geom.validate();
  if (s_mm < 0.0 || s_mm > geom.h_mm)
    throw DomainError("joint_distance: slider height outside [0, H]");
  return std::hypot(geom.d1_mm, geom.h_mm - s_mm);
}

BeamLengthBounds beam_length_bounds(const LinkageGeometry& geom) {
  geom.validate();
  return {geom.d2_mm(), (10.0 / 7.0) * geom.d1_mm};
}

DesignFeasibility validate_design(double l_mm, double t_mm, const LinkageGeometry& geom) {
  geom.validate();
  if (!(l_mm > 0.0) || !(t_mm > 0.0))
    throw DomainError("validate_design: L and t must be positive");

  const BeamLengthBounds b = beam_length_bounds(geom);
  DesignFeasibility out;
  out.l_min_mm = b.l_min_mm;
  out.l_max_mm = b.l_max_mm;

  if (!(l_mm > geom.d2_mm())) out.violated_constraints.emplace_back("EQ1");
  if (!(0.7 * l_mm < geom.d1_mm)) out.violated_constraints.emplace_back("EQ2");
  if (!(l_mm > b.l_min_mm && l_mm < b.l_max_mm))
    out.violated_constraints.emplace_back("EQ3");
  if (!((l_mm - geom.d1_mm) / l_mm <= 0.30))
    out.violated_constraints.emplace_back("PRECOMP30");

  out.feasible = out.violated_constraints.empty();
  return out;
}

}  // namespace lamsa
