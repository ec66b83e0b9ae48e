#pragma once

#include "errors.hpp"

#include <cmath>
#include <numbers>

namespace mpq {

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt2 = std::numbers::sqrt2;

enum class Units { si, dimensionless };

/// Speed of light, reduced Planck constant and vacuum permittivity.
///
/// Every function that needs one of these takes a PhysicalConstants value
/// (defaulting to SI), so a "dimensionless" computation is just a different
/// value passed down, never a process-wide switch.
struct PhysicalConstants {
  double c = 299792458.0;        // m/s
  double hbar = 1.054571817e-34; // J s
  double eps0 = 8.8541878128e-12; // F/m
  Units units = Units::si;

  static constexpr PhysicalConstants si() { return {}; }

  /// c = hbar = eps0 = 1; lengths in units of 1/k0 when k0 = 1.
  static constexpr PhysicalConstants dimensionless() {
    return {1.0, 1.0, 1.0, Units::dimensionless};
  }

  void validate() const {
    if (!(c > 0.0) || !(hbar > 0.0) || !(eps0 > 0.0) || !std::isfinite(c) ||
        !std::isfinite(hbar) || !std::isfinite(eps0))
      throw ConfigError("physical constants must be finite and strictly positive");
  }
};

inline const char* to_string(Units u) {
  return u == Units::si ? "SI" : "dimensionless";
}

} // namespace mpq
