#pragma once

// Generalized dispersion relation and the spectral quantities derived from it.
//
// Two parametrisations of the same two-dimensional shell in k-space are used
// throughout the library:
//
//   * carrier form, fixed k0:      zeta = k0 (1 - vartheta^2),
//                                  vartheta = q / (sqrt(2) k0)
//   * frequency form, fixed omega: omega = Omega0 - q^2 c^2 / (2 Omega0),
//                                  Theta = q c / (sqrt(2) Omega0)
//
// The second is the first solved for the carrier frequency Omega0 = c k0 at a
// given longitudinal frequency omega = c zeta.

#include "constants.hpp"
#include "errors.hpp"

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

namespace mpq {

struct CarrierParams {
  double k0 = 0.0;     // rad/m
  double omega0 = 0.0; // rad/s, always c * k0

  static CarrierParams from_k0(double k0, const PhysicalConstants& pc = {}) {
    if (!(k0 > 0.0) || !std::isfinite(k0))
      throw DomainError("carrier wavenumber k0 must be finite and > 0");
    return {k0, pc.c * k0};
  }
  static CarrierParams from_omega(double omega, const PhysicalConstants& pc = {}) {
    return from_k0(omega / pc.c, pc);
  }
};

struct DispersionPoint {
  double q = 0.0;        // rad/m
  double vartheta = 0.0; // q / (sqrt(2) k0), in [0, 1]
  double zeta = 0.0;     // rad/m, k0 (1 - vartheta^2) >= 0
};

struct FrequencyPoint {
  double q = 0.0;      // rad/m
  double omega = 0.0;  // rad/s
  double Theta = 0.0;  // in [0, 1)
  double Omega0 = 0.0; // rad/s
};

struct QuantizationConfig {
  double L = 1.0; // m

  void validate() const {
    if (!(L > 0.0) || !std::isfinite(L))
      throw ConfigError("quantization length L must be finite and > 0");
  }
};

namespace detail {

inline void require_carrier(double k0) {
  if (!(k0 > 0.0) || !std::isfinite(k0))
    throw DomainError("carrier wavenumber k0 must be finite and > 0");
}

inline void require_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw DomainError("angular frequency omega must be finite and > 0");
}

inline void require_q(double q) {
  if (!(q >= 0.0) || !std::isfinite(q))
    throw DomainError("transverse wavenumber q must be finite and >= 0");
}

} // namespace detail

inline double vartheta_of_q(double q, double k0) {
  detail::require_carrier(k0);
  detail::require_q(q);
  return q / (sqrt2 * k0);
}

/// Longitudinal wavenumber on the paraxial shell. Rejects vartheta > 1.
inline double zeta_of_q(double q, double k0) {
  const double vt = vartheta_of_q(q, k0);
  if (vt > 1.0)
    throw DomainError("beyond paraxial constraint vartheta <= 1 (q = " + std::to_string(q) +
                      ", sqrt(2) k0 = " + std::to_string(sqrt2 * k0) + ")");
  return k0 * (1.0 - vt * vt);
}

inline DispersionPoint dispersion_point(double q, double k0) {
  const double zeta = zeta_of_q(q, k0);
  return {q, vartheta_of_q(q, k0), zeta};
}

/// Angle between the wave vector (q, zeta) and the z axis.
inline double theta_of_q(double q, double k0) {
  return std::atan2(q, zeta_of_q(q, k0));
}

/// Exact vartheta as a function of the propagation angle theta in (0, pi/2].
///
/// Evaluated as 2 sin / (cos + sqrt(cos^2 + 2 sin^2)) / sqrt(2), which equals
/// (-cot + sqrt(2 + cot^2)) / sqrt(2) without its cancellation at small theta
/// or its overflow at pi/2. theta == 0 returns the limit value 0.
inline double vartheta_of_theta(double theta) {
  if (theta == 0.0)
    return 0.0;
  if (!(theta > 0.0) || theta > pi / 2.0 || !std::isfinite(theta))
    throw DomainError("theta must lie in (0, pi/2]");
  const double s = std::sin(theta);
  const double c = theta == pi / 2.0 ? 0.0 : std::cos(theta);
  return 2.0 * s / (c + std::sqrt(c * c + 2.0 * s * s)) / sqrt2;
}

/// Cubic small-angle series (theta - theta^3/6) / sqrt(2); error O(theta^5).
inline double vartheta_series(double theta) {
  return (theta - theta * theta * theta / 6.0) / sqrt2;
}

/// Inverts the dispersion relation at fixed omega for the carrier root.
///
/// Omega0 uses the explicit positive root of Omega0^2 - omega Omega0 -
/// q^2 c^2 / 2 = 0, which is regular at q = 0.
inline FrequencyPoint theta_omega_point(double q, double omega,
                                        const PhysicalConstants& pc = {}) {
  detail::require_frequency(omega);
  detail::require_q(q);
  const double qc2 = sqrt2 * q * pc.c; // sqrt(2 q^2 c^2)
  const double root = std::hypot(omega, qc2);
  const double denom = omega + root;
  return {q, omega, qc2 / denom, 0.5 * denom};
}

/// Transverse wavenumber at which Theta(q, omega) takes the given value.
inline double q_of_Theta(double Theta, double omega, const PhysicalConstants& pc = {}) {
  detail::require_frequency(omega);
  if (!(Theta >= 0.0) || !(Theta < 1.0))
    throw DomainError("Theta must lie in [0, 1)");
  return sqrt2 * Theta * omega / (pc.c * (1.0 - Theta * Theta));
}

/// 1 / |d omega / d(c k0)| on the shell: the factor produced when the delta
/// over omega is traded for a delta over c k0.
inline double dirac_jacobian(double q, double omega, const PhysicalConstants& pc = {}) {
  const double T = theta_omega_point(q, omega, pc).Theta;
  return 1.0 / (1.0 + T * T);
}

/// Longitudinal mode index selected by vartheta in a box of length L.
inline std::int64_t n_index(double vartheta, double k0, const QuantizationConfig& config) {
  detail::require_carrier(k0);
  config.validate();
  if (!(vartheta >= 0.0) || vartheta > 1.0)
    throw DomainError("vartheta must lie in [0, 1]");
  const double arg = k0 * config.L / (2.0 * pi) * (1.0 - vartheta * vartheta);
  // k0 = 2 pi n / L rarely reproduces n exactly in floating point; snap
  // values within a few ulps of an integer onto it.
  const double nearest = std::round(arg);
  if (std::abs(arg - nearest) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, arg))
    return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::floor(arg));
}

} // namespace mpq
