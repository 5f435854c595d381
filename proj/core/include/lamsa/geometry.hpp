// Mechanism kinematics: crank-slider drive, joint distance as a function of
// slider height, and the feasibility constraints on the flexible beam length.
//
// Conventions:
// - Slider height s runs from 0 at bottom dead center (BDC) to H at top dead
//   center (TDC). Crank angle 0 is TDC, pi is BDC.
// - D(s) = sqrt(D1^2 + (H - s)^2): the distance between the beam's two
//   revolute joints. D(H) = D1 (ultimate state), D(0) = D2 = sqrt(D1^2+H^2).
#pragma once

#include <string>
#include <vector>

namespace lamsa {

struct LinkageGeometry {
  double d1_mm = 36.0;           // joint distance at the ultimate state
  double h_mm = 10.5;            // slider displacement range BDC -> TDC
  double crank_radius_mm = 5.25;
  double rod_length_mm = 30.0;
  double latch_fraction = 0.94;  // slider height fraction where the latch engages
  bool limited_block = true;     // one-sided stop at BDC forcing the down well

  double d2_mm() const;          // sqrt(D1^2 + H^2)
  void validate() const;         // throws DomainError on invariant violation
};

// Per-constraint verdicts for a candidate beam (L, t) against Eqs. 1-3 and
// the 30% pre-compression bound.
struct DesignFeasibility {
  double l_min_mm = 0.0;
  double l_max_mm = 0.0;
  bool feasible = false;
  std::vector<std::string> violated_constraints;  // of EQ1, EQ2, EQ3, PRECOMP30
};

// Slider height s(theta) in [0, H]. Standard crank-slider closure
// r*cos(theta) + sqrt(l^2 - r^2 sin^2 theta), shifted and scaled so that
// theta=0 gives H and theta=pi gives 0. 2*pi-periodic.
double slider_height(double crank_angle_rad, const LinkageGeometry& geom);

// D(s) for s in [0, H]; strictly decreasing in s when H > 0.
double joint_distance(double s_mm, const LinkageGeometry& geom);

// (L_min, L_max) from the combined design constraint
// sqrt(D1^2+H^2) < L < (10/7) D1.  May be empty (L_min >= L_max); the caller
// must treat that as an infeasible design space, it is not an error here.
struct BeamLengthBounds {
  double l_min_mm = 0.0;
  double l_max_mm = 0.0;
  bool empty() const { return l_min_mm >= l_max_mm; }
};
BeamLengthBounds beam_length_bounds(const LinkageGeometry& geom);

// Checks L > D2 (EQ1), 0.7 L < D1 (EQ2), the combined bound (EQ3) and the
// pre-compression ratio (L - D1)/L <= 0.30 (PRECOMP30). Infeasible designs
// come back with feasible=false and the violated constraint names; only bad
// inputs (non-positive L or t) throw.
DesignFeasibility validate_design(double l_mm, double t_mm, const LinkageGeometry& geom);

}  // namespace lamsa
