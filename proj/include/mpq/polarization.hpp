#pragma once

// Exact transverse polarization bases on the paraxial shell.
//
// With k = q_hat q + z_hat k0 (1 - vartheta^2):
//
//   eps2 = z_hat x q_hat
//   eps1 = [q_hat (1 - vartheta^2) - z_hat vartheta sqrt(2)] / sqrt(1 + vartheta^4)
//
// so that eps1 = eps2 x k / |k| and eps1 x eps2 points along +k.
// On axis (q = 0) the direction q_hat := x_hat is used.

#include "constants.hpp"
#include "dispersion.hpp"
#include "errors.hpp"
#include "vec.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace mpq {

enum class Pol : int { first = 1, second = 2 };

inline Pol pol_from_int(int lambda) {
  if (lambda != 1 && lambda != 2)
    throw ConfigError("polarization index must be 1 or 2, got " + std::to_string(lambda));
  return static_cast<Pol>(lambda);
}

inline int to_int(Pol p) { return static_cast<int>(p); }

struct PolarizationBasis {
  Vec3 eps1;
  Vec3 eps2;
  Vec3 q_hat;               // z component always 0
  double vartheta_like = 0; // vartheta or Theta

  const Vec3& operator[](Pol p) const { return p == Pol::first ? eps1 : eps2; }

  /// Wave vector direction reconstructed from the parameter (not normalized).
  Vec3 k_direction() const {
    const double v = vartheta_like;
    return {q_hat.x * sqrt2 * v, q_hat.y * sqrt2 * v, 1.0 - v * v};
  }
};

inline Vec3 unit_direction(Vec2 q_vec) {
  const double q = q_vec.norm();
  if (q == 0.0)
    return {1.0, 0.0, 0.0};
  return {q_vec.x / q, q_vec.y / q, 0.0};
}

inline PolarizationBasis zeroth_order_basis(Vec2 q_vec) {
  const Vec3 qh = unit_direction(q_vec);
  return {qh, {-qh.y, qh.x, 0.0}, qh, 0.0};
}

inline PolarizationBasis basis_at(Vec2 q_vec, double vartheta) {
  if (!(vartheta >= 0.0) || vartheta > 1.0)
    throw DomainError("polarization basis requires 0 <= vartheta <= 1");
  const Vec3 qh = unit_direction(q_vec);
  const double v2 = vartheta * vartheta;
  const double inv = 1.0 / std::sqrt(1.0 + v2 * v2);
  const Vec3 eps1{qh.x * (1.0 - v2) * inv, qh.y * (1.0 - v2) * inv, -vartheta * sqrt2 * inv};
  return {eps1, {-qh.y, qh.x, 0.0}, qh, vartheta};
}

/// Frequency-domain basis: vartheta replaced by Theta(q, omega).
inline PolarizationBasis basis_at_frequency(Vec2 q_vec, double omega,
                                            const PhysicalConstants& pc = {}) {
  return basis_at(q_vec, theta_omega_point(q_vec.norm(), omega, pc).Theta);
}

/// (omega^2/Omega0^2 / ((1+Theta^4)(1+Theta^2)^4))^(1/4), in (0, 1].
inline double amplitude_weight(double q, double omega, const PhysicalConstants& pc = {}) {
  const FrequencyPoint fp = theta_omega_point(q, omega, pc);
  const double T2 = fp.Theta * fp.Theta;
  const double r = omega / fp.Omega0;
  const double s = (1.0 + T2) * (1.0 + T2);
  return std::sqrt(std::sqrt(r * r / ((1.0 + T2 * T2) * s * s)));
}

/// Unimodular phase exp[i(omega - Omega0 sqrt(1+Theta^4)) t - i(omega - Omega0) z/c].
inline cplx slowly_varying_phase(const FrequencyPoint& fp, double z, double t,
                                 const PhysicalConstants& pc = {}) {
  const double T2 = fp.Theta * fp.Theta;
  const double phase = (fp.omega - fp.Omega0 * std::sqrt(1.0 + T2 * T2)) * t -
                       (fp.omega - fp.Omega0) * z / pc.c;
  return std::polar(1.0, phase);
}

struct SlowlyVaryingPolarization {
  CVec3 vec{};
  double omega = 0.0;
  double z = 0.0;
  double t = 0.0;
};

inline SlowlyVaryingPolarization slowly_varying_polarization(Vec2 q_vec, double omega, double z,
                                                             double t, Pol lambda,
                                                             const PhysicalConstants& pc = {}) {
  const FrequencyPoint fp = theta_omega_point(q_vec.norm(), omega, pc);
  const PolarizationBasis b = basis_at(q_vec, fp.Theta);
  const cplx factor = amplitude_weight(fp.q, omega, pc) * slowly_varying_phase(fp, z, t, pc);
  return {factor * b[lambda], omega, z, t};
}

} // namespace mpq
