#pragma once

#include <cmath>
#include <numbers>

namespace casimir {

// a = c = hbar = 1. Rates quoted by users are in 2*pi*c/a.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double from_2pi_units(double x) { return kTwoPi * x; }
inline double to_2pi_units(double x) { return x / kTwoPi; }

inline double courant_dt(double dx, int dims, double courant = 0.5) {
  return courant * dx / std::sqrt(static_cast<double>(dims));
}

}  // namespace casimir
