// Internal unit system: millimeters, grams, seconds. Forces are carried in
// newtons and energies in millijoules at module boundaries; the conversion
// factors between the N/mJ surface units and the g-mm-s integration units
// live here and nowhere else.
#pragma once

#include <cmath>

namespace lamsa::units {

// 1 N = 1e6 g*mm/s^2
inline constexpr double kNewtonToGmmPerS2 = 1.0e6;
// 1 N*mm = 1 mJ = 1e6 g*mm^2/s^2
inline constexpr double kNmmToGmm2PerS2 = 1.0e6;
// 1 kg/m^3 = 1e3 g / 1e9 mm^3
inline constexpr double kKgPerM3ToGPerMm3 = 1.0e-6;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline double rpm_to_rad_per_s(double rpm) { return rpm * 2.0 * kPi / 60.0; }

}  // namespace lamsa::units
