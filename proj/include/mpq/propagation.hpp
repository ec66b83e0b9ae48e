#pragma once

// Angular-spectrum propagation of sampled envelopes.
//
//   Paraxial: spectrum *= exp(-i q^2 c dz / (2 omega))
//   Exact:    spectrum *= exp(-i q^2 c dz / (2 Omega0(q, omega)))
//
// Both are unimodular, so propagation is unitary, composes additively in dz
// and is inverted by -dz. Vector promotion (scalar -> 3 components) is an
// explicit separate call.

#include "constants.hpp"
#include "dispersion.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "polarization.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mpq {

enum class AliasingPolicy { refuse, flag, off };

struct PropagationOptions {
  AliasingPolicy aliasing = AliasingPolicy::refuse;
  /// Largest tolerated fraction of spectral power within guard_bins of Nyquist.
  double aliasing_threshold = 1e-6;
  int guard_bins = 2;
  /// Largest tolerated fraction of spectral power at vartheta > 1.
  double constraint_tolerance = 1e-12;
  PhysicalConstants pc = {};
};

struct SpectrumReport {
  double total_power = 0.0;
  double edge_fraction = 0.0;       // power near Nyquist / total
  double beyond_constraint_fraction = 0.0; // power at q > sqrt(2) k0 / total
};

inline SpectrumReport inspect_spectrum(const Spectrum& s, double k0, int guard_bins = 2) {
  const TransverseGrid& g = s.grid;
  const long hx = static_cast<long>(g.nx / 2) - guard_bins;
  const long hy = static_cast<long>(g.ny / 2) - guard_bins;
  const double q_limit = sqrt2 * k0;
  double total = 0.0, edge = 0.0, beyond = 0.0;
  for (std::size_t ky = 0; ky < g.ny; ++ky) {
    const long by = TransverseGrid::signed_bin(ky, g.ny);
    const double qy = g.qy(ky);
    for (std::size_t kx = 0; kx < g.nx; ++kx) {
      const long bx = TransverseGrid::signed_bin(kx, g.nx);
      const double p = std::norm(s(kx, ky));
      total += p;
      if (std::abs(bx) >= hx || std::abs(by) >= hy)
        edge += p;
      if (std::hypot(g.qx(kx), qy) > q_limit)
        beyond += p;
    }
  }
  SpectrumReport r;
  r.total_power = total;
  if (total > 0.0) {
    r.edge_fraction = edge / total;
    r.beyond_constraint_fraction = beyond / total;
  }
  return r;
}

namespace detail {

inline std::string format_fraction(double f) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", f);
  return buf;
}

/// Throws or flags according to the options; returns true when flagged.
inline bool guard_spectrum(const Spectrum& s, double k0, const PropagationOptions& opts) {
  const SpectrumReport r = inspect_spectrum(s, k0, opts.guard_bins);
  if (r.beyond_constraint_fraction > opts.constraint_tolerance)
    throw ConstraintError("spectral content beyond the vartheta <= 1 constraint: " +
                              format_fraction(r.beyond_constraint_fraction) + " of power",
                          r.beyond_constraint_fraction);
  if (opts.aliasing == AliasingPolicy::off || r.edge_fraction <= opts.aliasing_threshold)
    return false;
  if (opts.aliasing == AliasingPolicy::refuse)
    throw AliasingError("aliasing guard: " + format_fraction(r.edge_fraction) +
                            " of spectral power within " + std::to_string(opts.guard_bins) +
                            " bins of Nyquist",
                        r.edge_fraction);
  return true;
}

inline void require_carrier_tag(const ScalarEnvelope& f) {
  if (!(f.omega > 0.0) || !std::isfinite(f.omega))
    throw DomainError("envelope carrier omega must be finite and > 0");
}

/// Calls fn(kx, ky, q_vec) for every spectral bin, rows in parallel.
template <class Fn>
void for_each_bin(const TransverseGrid& g, Fn&& fn) {
  parallel_for(g.ny, [&](std::size_t ky) {
    const double qy = g.qy(ky);
    for (std::size_t kx = 0; kx < g.nx; ++kx)
      fn(kx, ky, Vec2{g.qx(kx), qy});
  });
}

} // namespace detail

/// exp(-i q^2 c dz / (2 Omega)) with Omega = omega (paraxial) or Omega0 (exact).
inline cplx propagation_phase(Model model, double q, double dz, double omega,
                              const PhysicalConstants& pc = {}) {
  const double Om = model == Model::exact ? theta_omega_point(q, omega, pc).Omega0 : omega;
  return std::polar(1.0, -q * q * pc.c * dz / (2.0 * Om));
}

inline ScalarEnvelope propagate(const ScalarEnvelope& f, double dz, Model model,
                                const PropagationOptions& opts = {}) {
  detail::require_carrier_tag(f);
  if (!std::isfinite(dz))
    throw DomainError("propagation distance must be finite");
  Spectrum s = fft_forward(f);
  const bool flagged = detail::guard_spectrum(s, f.omega / opts.pc.c, opts);
  ScalarEnvelope out = f;
  if (dz != 0.0) {
    detail::for_each_bin(s.grid, [&](std::size_t kx, std::size_t ky, Vec2 q) {
      s(kx, ky) *= propagation_phase(model, q.norm(), dz, f.omega, opts.pc);
    });
    out = fft_inverse(s, f);
  }
  out.z = f.z + dz;
  out.model = model;
  out.aliasing_flagged = f.aliasing_flagged || flagged;
  return out;
}

inline VectorEnvelope propagate(const VectorEnvelope& f, double dz, Model model,
                                const PropagationOptions& opts = {}) {
  VectorEnvelope out;
  for (std::size_t c = 0; c < 3; ++c)
    out[c] = propagate(f[c], dz, model, opts);
  return out;
}

/// Propagates a scalar envelope and promotes it to a vector field.
///
/// Exact: each plane wave carries eps_lambda(q, Theta) times the amplitude
/// weight and the time phase exp[i(omega - Omega0 sqrt(1+Theta^4)) t] at the
/// envelope's t. Paraxial: the zeroth-order vectors e^(lambda)(q).
inline VectorEnvelope propagate_vector(const ScalarEnvelope& f, double dz, Model model,
                                       Pol lambda, const PropagationOptions& opts = {}) {
  detail::require_carrier_tag(f);
  Spectrum s = fft_forward(f);
  const bool flagged = detail::guard_spectrum(s, f.omega / opts.pc.c, opts);
  std::array<Spectrum, 3> comp{s, s, s};
  detail::for_each_bin(s.grid, [&](std::size_t kx, std::size_t ky, Vec2 q) {
    const cplx a = s(kx, ky) * propagation_phase(model, q.norm(), dz, f.omega, opts.pc);
    CVec3 e;
    if (model == Model::exact) {
      const FrequencyPoint fp = theta_omega_point(q.norm(), f.omega, opts.pc);
      const double T2 = fp.Theta * fp.Theta;
      const cplx tphase = std::polar(
          amplitude_weight(fp.q, f.omega, opts.pc),
          (fp.omega - fp.Omega0 * std::sqrt(1.0 + T2 * T2)) * f.t);
      e = tphase * basis_at(q, fp.Theta)[lambda];
    } else {
      e = cplx(1.0) * zeroth_order_basis(q)[lambda];
    }
    for (std::size_t c = 0; c < 3; ++c)
      comp[c](kx, ky) = a * e[c];
  });
  VectorEnvelope out;
  for (std::size_t c = 0; c < 3; ++c) {
    out[c] = fft_inverse(comp[c], f);
    out[c].z = f.z + dz;
    out[c].model = model;
    out[c].aliasing_flagged = f.aliasing_flagged || flagged;
  }
  return out;
}

/// Multiplies each bin by exp[-i omega0 t (sqrt(1 + vartheta^4) - 1)].
inline Spectrum apply_time_phase(const Spectrum& s, double t, double k0,
                                 const PhysicalConstants& pc = {}) {
  detail::require_carrier(k0);
  const SpectrumReport r = inspect_spectrum(s, k0, 0);
  if (r.beyond_constraint_fraction > 0.0)
    throw ConstraintError("time phase: spectral content beyond vartheta <= 1",
                          r.beyond_constraint_fraction);
  Spectrum out = s;
  const double omega0 = pc.c * k0;
  detail::for_each_bin(s.grid, [&](std::size_t kx, std::size_t ky, Vec2 q) {
    const double v = q.norm() / (sqrt2 * k0);
    const double v4 = v * v * v * v;
    // sqrt(1 + v4) - 1 without cancellation
    const double excess = v4 / (std::sqrt(1.0 + v4) + 1.0);
    out(kx, ky) *= std::polar(1.0, -omega0 * t * excess);
  });
  return out;
}

/// Applies the Maxwell-paraxial kernel to transverse amplitudes a(x'):
///   A(x) = int d^2x' F^(lambda)(x, z, x', omega, t) a(x'),
/// evaluated spectrally as a multiplication by
///   E^(lambda)(q, omega, z, t) exp(-i q^2 c z / (2 Omega0)).
/// `band`, when given, restricts q to its disc (and taper).
inline VectorEnvelope apply_mp_kernel(const ScalarEnvelope& amplitudes, double z, double t,
                                      Pol lambda, const PhysicalConstants& pc = {},
                                      const std::optional<QuadratureSpec>& band = std::nullopt) {
  detail::require_carrier_tag(amplitudes);
  if (band)
    band->validate();
  const double omega = amplitudes.omega;
  const Spectrum s = fft_forward(amplitudes);
  std::array<Spectrum, 3> comp{s, s, s};
  detail::for_each_bin(s.grid, [&](std::size_t kx, std::size_t ky, Vec2 q) {
    const double w = band ? band->window_weight(q.norm()) : 1.0;
    const FrequencyPoint fp = theta_omega_point(q.norm(), omega, pc);
    const SlowlyVaryingPolarization E = slowly_varying_polarization(q, omega, z, t, lambda, pc);
    const cplx f = w * s(kx, ky) * std::polar(1.0, -fp.q * fp.q * pc.c * z / (2.0 * fp.Omega0));
    for (std::size_t c = 0; c < 3; ++c)
      comp[c](kx, ky) = f * E.vec[c];
  });
  VectorEnvelope out;
  for (std::size_t c = 0; c < 3; ++c) {
    out[c] = fft_inverse(comp[c], amplitudes);
    out[c].z = z;
    out[c].t = t;
    out[c].model = Model::exact;
  }
  return out;
}

/// hbar^(1/2) (4 pi eps0 c omega)^(-1/2) exp(-i omega (t - z/c)).
inline cplx monochromatic_prefactor(double omega, double z, double t,
                                    const PhysicalConstants& pc = {}) {
  detail::require_frequency(omega);
  const double mag = std::sqrt(pc.hbar / (4.0 * pi * pc.eps0 * pc.c * omega));
  return std::polar(mag, -omega * (t - z / pc.c));
}

/// Positive-frequency vector potential slice at frequency omega from the
/// kernel-applied amplitudes (an omega-density, up to an overall constant).
inline VectorEnvelope assemble_monochromatic_field(const VectorEnvelope& envelope, double omega,
                                                   double z, double t,
                                                   const PhysicalConstants& pc = {}) {
  const cplx pref = monochromatic_prefactor(omega, z, t, pc);
  VectorEnvelope out = envelope;
  for (auto& comp : out.components) {
    for (cplx& v : comp.samples)
      v *= pref;
    comp.z = z;
    comp.t = t;
  }
  return out;
}

/// Same slice assembled directly from plane-wave amplitudes a(q) given in
/// continuum normalisation on the FFT lattice:
///   A(x) = e^{-i omega (t - z/c)} (hbar / (16 pi^3 eps0 c omega))^(1/2)
///          sum_q dq^2 E^(lambda)(q) a(q) exp(i q.x - i q^2 c z / (2 Omega0)).
inline VectorEnvelope assemble_from_plane_wave_amplitudes(const Spectrum& amplitudes,
                                                          const ScalarEnvelope& like, double omega,
                                                          double z, double t, Pol lambda,
                                                          const PhysicalConstants& pc = {}) {
  detail::require_frequency(omega);
  const double mag = std::sqrt(pc.hbar / (16.0 * pi * pi * pi * pc.eps0 * pc.c * omega));
  const cplx pref = std::polar(mag, -omega * (t - z / pc.c));
  std::array<Spectrum, 3> comp{amplitudes, amplitudes, amplitudes};
  detail::for_each_bin(amplitudes.grid, [&](std::size_t kx, std::size_t ky, Vec2 q) {
    const FrequencyPoint fp = theta_omega_point(q.norm(), omega, pc);
    const SlowlyVaryingPolarization E = slowly_varying_polarization(q, omega, z, t, lambda, pc);
    const cplx f = amplitudes(kx, ky) *
                   std::polar(1.0, -fp.q * fp.q * pc.c * z / (2.0 * fp.Omega0));
    for (std::size_t c = 0; c < 3; ++c)
      comp[c](kx, ky) = f * E.vec[c];
  });
  VectorEnvelope out;
  for (std::size_t c = 0; c < 3; ++c) {
    // from_continuum_spectrum carries 1/(2 pi); the sum here has none.
    out[c] = from_continuum_spectrum(comp[c], like);
    for (cplx& v : out[c].samples)
      v *= 2.0 * pi * pref;
    out[c].omega = omega;
    out[c].z = z;
    out[c].t = t;
  }
  return out;
}

/// Grid L2 norm of d2x Psi + d2y Psi + 2 i k0 dz Psi over the interior
/// planes, divided by the L2 norm of Psi there. Planes must share a grid and
/// be equally spaced in z (sorted ascending). Central differences throughout,
/// periodic in x and y.
inline double paraxial_residual(std::span<const ScalarEnvelope> planes, double k0) {
  detail::require_carrier(k0);
  if (planes.size() < 3)
    throw ConfigError("paraxial_residual needs at least 3 z-planes");
  const TransverseGrid& g = planes[0].grid;
  const double h = planes[1].z - planes[0].z;
  if (!(h > 0.0))
    throw ConfigError("paraxial_residual: planes must be sorted with increasing z");
  for (std::size_t j = 1; j < planes.size(); ++j) {
    if (!(planes[j].grid == g))
      throw ConfigError("paraxial_residual: grid mismatch between planes");
    const double step = planes[j].z - planes[j - 1].z;
    if (std::abs(step - h) > 1e-9 * h)
      throw ConfigError("paraxial_residual: planes must be equally spaced in z");
  }
  const double ix2 = 1.0 / (g.dx * g.dx);
  const double iy2 = 1.0 / (g.dy * g.dy);
  double res = 0.0, norm = 0.0;
  for (std::size_t j = 1; j + 1 < planes.size(); ++j) {
    const ScalarEnvelope& p = planes[j];
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      const std::size_t yp = (iy + 1) % g.ny, ym = (iy + g.ny - 1) % g.ny;
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        const std::size_t xp = (ix + 1) % g.nx, xm = (ix + g.nx - 1) % g.nx;
        const cplx c = p(ix, iy);
        const cplx lap = (p(xp, iy) - 2.0 * c + p(xm, iy)) * ix2 +
                         (p(ix, yp) - 2.0 * c + p(ix, ym)) * iy2;
        const cplx dz = (planes[j + 1](ix, iy) - planes[j - 1](ix, iy)) / (2.0 * h);
        const cplx r = lap + cplx(0.0, 2.0 * k0) * dz;
        res += std::norm(r);
        norm += std::norm(c);
      }
    }
  }
  if (norm == 0.0)
    throw DomainError("paraxial_residual: zero field");
  return std::sqrt(res / norm);
}

} // namespace mpq
