#pragma once

// Gaussian, Hermite-Gaussian and Laguerre-Gaussian transverse modes at the
// waist plane, mode decomposition, and single-photon wavefunctions.
//
// Conventions (w0 = 1/e^2 intensity radius, u = sqrt(2) x / w0):
//   HG(n, m)(x, y) ~ h_n(sqrt(2) x / w0) h_m(sqrt(2) y / w0)
//   LG(p, l)(r, phi) ~ (sqrt(2) r / w0)^|l| L_p^|l|(2 r^2 / w0^2)
//                      exp(-r^2 / w0^2) exp(i l phi)
// where h_n is the normalised Hermite function. Every generated mode is
// normalised to unit discrete L2 norm on its grid.

#include "constants.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "polarization.hpp"
#include "propagation.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mpq {

enum class Family { gaussian, hermite_gauss, laguerre_gauss };

inline const char* to_string(Family f) {
  switch (f) {
  case Family::gaussian:
    return "gaussian";
  case Family::hermite_gauss:
    return "hg";
  case Family::laguerre_gauss:
    return "lg";
  }
  return "?";
}

inline Family family_from_string(const std::string& s) {
  if (s == "gaussian")
    return Family::gaussian;
  if (s == "hg" || s == "hermite-gauss")
    return Family::hermite_gauss;
  if (s == "lg" || s == "laguerre-gauss")
    return Family::laguerre_gauss;
  throw ConfigError("unknown mode family '" + s + "' (expected gaussian|hg|lg)");
}

struct ModeSpec {
  Family family = Family::gaussian;
  int n = 0; // HG x index
  int m = 0; // HG y index
  int p = 0; // LG radial index
  int l = 0; // LG azimuthal index (any sign)
  double w0 = 0.0;
  double omega = 0.0;
  Pol lambda = Pol::first;

  static ModeSpec gaussian(double w0, double omega, Pol lambda = Pol::first) {
    return {Family::gaussian, 0, 0, 0, 0, w0, omega, lambda};
  }
  static ModeSpec hg(int n, int m, double w0, double omega, Pol lambda = Pol::first) {
    return {Family::hermite_gauss, n, m, 0, 0, w0, omega, lambda};
  }
  static ModeSpec lg(int p, int l, double w0, double omega, Pol lambda = Pol::first) {
    return {Family::laguerre_gauss, 0, 0, p, l, w0, omega, lambda};
  }

  /// Gouy order: n + m or 2p + |l|.
  int order() const {
    switch (family) {
    case Family::hermite_gauss:
      return n + m;
    case Family::laguerre_gauss:
      return 2 * p + std::abs(l);
    default:
      return 0;
    }
  }

  void validate() const {
    if (!(w0 > 0.0) || !std::isfinite(w0))
      throw ConfigError("mode waist w0 must be finite and > 0");
    if (n < 0 || m < 0 || p < 0)
      throw ConfigError("mode indices n, m, p must be nonnegative");
    if (!(omega > 0.0) || !std::isfinite(omega))
      throw ConfigError("mode frequency omega must be finite and > 0");
  }
};

/// Normalised Hermite function h_n(u) = H_n(u) exp(-u^2/2) / sqrt(2^n n! sqrt(pi)),
/// by the stable three-term recurrence.
inline double hermite_function(int n, double u) {
  double h_prev = 0.0;
  double h = std::exp(-0.5 * u * u) / std::sqrt(std::sqrt(pi));
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * u * h - std::sqrt(double(k) / (k + 1)) * h_prev;
    h_prev = h;
    h = next;
  }
  return h;
}

/// Generalised Laguerre polynomial L_p^a(x).
inline double laguerre(int p, double a, double x) {
  if (p == 0)
    return 1.0;
  double l_prev = 1.0;
  double l = 1.0 + a - x;
  for (int k = 1; k < p; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * l - (k + a) * l_prev) / (k + 1.0);
    l_prev = l;
    l = next;
  }
  return l;
}

/// Highest Gouy order whose modes are resolved on the grid: the outermost
/// lobe (classical turning point) must lie 3 w0 inside the window and the
/// local wavenumber there must be sampled at >= 4 points per period.
inline int max_resolvable_order(const TransverseGrid& g, double w0) {
  const double half = 0.5 * std::min(g.extent_x(), g.extent_y());
  const double d = std::max(g.dx, g.dy);
  int best = -1;
  for (int N = 0; N < 4096; ++N) {
    const double turning = w0 * std::sqrt((2.0 * N + 1.0) / 2.0);
    const double k_local = sqrt2 / w0 * std::sqrt(2.0 * N + 1.0);
    if (turning + 3.0 * w0 > half || k_local * d > 0.5 * pi)
      break;
    best = N;
  }
  return best;
}

namespace detail {

inline void require_mode_resolution(const TransverseGrid& g, double w0, int order) {
  g.validate();
  if (std::max(g.dx, g.dy) > w0 / 8.0)
    throw ConfigError("grid under-resolves the waist: need >= 8 samples across w0");
  if (std::min(g.extent_x(), g.extent_y()) < 4.0 * w0)
    throw ConfigError("grid too small: need an extent of at least 4 w0");
  if (order > max_resolvable_order(g, w0))
    throw ConfigError("grid cannot resolve mode order " + std::to_string(order));
}

inline void normalise(ScalarEnvelope& f) {
  const double nrm = l2_norm(f);
  if (nrm == 0.0)
    throw DomainError("mode has zero norm on this grid");
  for (cplx& v : f.samples)
    v /= nrm;
}

} // namespace detail

/// Unit-norm mode at the waist plane z = 0.
inline ScalarEnvelope make_mode(const ModeSpec& spec, const TransverseGrid& grid,
                                Units units = Units::si) {
  spec.validate();
  detail::require_mode_resolution(grid, spec.w0, spec.order());
  ScalarEnvelope f = ScalarEnvelope::zeros(grid, spec.omega, units);
  const double s = sqrt2 / spec.w0;
  if (spec.family == Family::laguerre_gauss) {
    const int al = std::abs(spec.l);
    for (std::size_t iy = 0; iy < grid.ny; ++iy)
      for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        const double x = grid.x(ix), y = grid.y(iy);
        const double r2 = (x * x + y * y) / (spec.w0 * spec.w0);
        const double radial = std::pow(std::sqrt(2.0 * r2), al) *
                              laguerre(spec.p, al, 2.0 * r2) * std::exp(-r2);
        f(ix, iy) = std::polar(radial, spec.l * std::atan2(y, x));
      }
  } else {
    const int n = spec.family == Family::hermite_gauss ? spec.n : 0;
    const int m = spec.family == Family::hermite_gauss ? spec.m : 0;
    std::vector<double> hx(grid.nx), hy(grid.ny);
    for (std::size_t ix = 0; ix < grid.nx; ++ix)
      hx[ix] = hermite_function(n, s * grid.x(ix));
    for (std::size_t iy = 0; iy < grid.ny; ++iy)
      hy[iy] = hermite_function(m, s * grid.y(iy));
    for (std::size_t iy = 0; iy < grid.ny; ++iy)
      for (std::size_t ix = 0; ix < grid.nx; ++ix)
        f(ix, iy) = hx[ix] * hy[iy];
  }
  detail::normalise(f);
  return f;
}

/// Hermitian pairing <f, g> = sum conj(f) g dx dy.
inline cplx mode_overlap(const ScalarEnvelope& f, const ScalarEnvelope& g) {
  if (!(f.grid == g.grid) || f.samples.size() != g.samples.size())
    throw ConfigError("mode_overlap: grid mismatch");
  cplx s{};
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    s += std::conj(f.samples[i]) * g.samples[i];
  return s * f.grid.cell_area();
}

using ModeIndex = std::pair<int, int>; // (n, m) for HG, (p, l) for LG

struct ModeCoefficients {
  Family family = Family::hermite_gauss;
  double w0 = 0.0;
  double omega = 0.0;
  int order = 0; // truncation: all modes with Gouy order <= order
  std::map<ModeIndex, cplx> coeffs;

  cplx at(int a, int b) const {
    auto it = coeffs.find({a, b});
    return it == coeffs.end() ? cplx{} : it->second;
  }
};

/// All index pairs of the family with Gouy order <= N.
inline std::vector<ModeIndex> mode_indices(Family family, int N) {
  std::vector<ModeIndex> out;
  if (family == Family::laguerre_gauss) {
    for (int p = 0; 2 * p <= N; ++p)
      for (int l = -(N - 2 * p); l <= N - 2 * p; ++l)
        out.emplace_back(p, l);
  } else {
    for (int order = 0; order <= N; ++order)
      for (int n = order; n >= 0; --n)
        out.emplace_back(n, order - n);
  }
  return out;
}

inline ModeSpec spec_for(Family family, ModeIndex idx, double w0, double omega) {
  if (family == Family::laguerre_gauss)
    return ModeSpec::lg(idx.first, idx.second, w0, omega);
  return ModeSpec::hg(idx.first, idx.second, w0, omega);
}

inline ModeCoefficients decompose(const ScalarEnvelope& f, Family family, double w0, int N) {
  if (N < 0)
    throw ConfigError("decomposition order must be >= 0");
  if (family == Family::gaussian)
    family = Family::hermite_gauss;
  const double omega = f.omega > 0.0 ? f.omega : 1.0;
  detail::require_mode_resolution(f.grid, w0, N);
  ModeCoefficients out;
  out.family = family;
  out.w0 = w0;
  out.omega = f.omega;
  out.order = N;
  for (const ModeIndex& idx : mode_indices(family, N))
    out.coeffs[idx] = mode_overlap(make_mode(spec_for(family, idx, w0, omega), f.grid), f);
  return out;
}

inline ScalarEnvelope reconstruct(const ModeCoefficients& coeffs, const TransverseGrid& grid,
                                  Units units = Units::si) {
  const double omega = coeffs.omega > 0.0 ? coeffs.omega : 1.0;
  ScalarEnvelope out = ScalarEnvelope::zeros(grid, coeffs.omega, units);
  for (const auto& [idx, c] : coeffs.coeffs) {
    const ScalarEnvelope mode = make_mode(spec_for(coeffs.family, idx, coeffs.w0, omega), grid);
    for (std::size_t i = 0; i < out.samples.size(); ++i)
      out.samples[i] += c * mode.samples[i];
  }
  return out;
}

/// <x, omega', lambda' | q, omega, lambda> without its delta factors.
inline cplx plane_wave_overlap(Vec2 q, Vec2 x) { return std::polar(1.0 / (2.0 * pi), dot(q, x)); }

struct PhotonWavefunction {
  VectorEnvelope field;  // polarization-resolved wavefunction
  ScalarEnvelope scalar; // same evolution with the polarization vector stripped
  Pol lambda = Pol::first;
  double omega = 0.0;
  double z = 0.0;
  double t = 0.0;
  Model model = Model::exact;
  bool physical_slice = false;

  double norm() const { return l2_norm(field); }
};

struct WavefunctionOptions {
  std::optional<QuadratureSpec> band; // restrict q to a disc (and taper)
  bool physical_slice = false;        // apply prefactor and carrier exp(-i omega (t - z/c))
  PhysicalConstants pc = {};
  PropagationOptions propagation = {};
};

/// Single-photon wavefunction psi(x', z, t) = int d^2x F^(lambda)(x', z, x, omega, t) psi_mode(x).
///
/// Exact: the mode spectrum is multiplied by the slowly varying polarization
/// vector E^(lambda)(q, omega, z, t) and the Fresnel phase with Omega0; this
/// is exactly the kernel F applied to the mode. Paraxial: the spectrum is
/// propagated with the paraxial phase and carries e^(lambda)(q); the scalar
/// part then coincides with propagate(make_mode(spec), z, Model::paraxial).
inline PhotonWavefunction photon_wavefunction(const ModeSpec& spec, const TransverseGrid& grid,
                                              double z, double t, Model model,
                                              const WavefunctionOptions& opts = {}) {
  const ScalarEnvelope mode = make_mode(spec, grid, opts.pc.units);
  if (opts.band)
    opts.band->validate();
  Spectrum s = fft_forward(mode);
  detail::guard_spectrum(s, spec.omega / opts.pc.c, [&] {
    PropagationOptions p = opts.propagation;
    p.pc = opts.pc;
    return p;
  }());

  Spectrum scalar_s = s;
  std::array<Spectrum, 3> comp{s, s, s};
  detail::for_each_bin(grid, [&](std::size_t kx, std::size_t ky, Vec2 q) {
    const double band_w = opts.band ? opts.band->window_weight(q.norm()) : 1.0;
    cplx a = band_w * s(kx, ky);
    CVec3 e;
    if (model == Model::exact) {
      const FrequencyPoint fp = theta_omega_point(q.norm(), spec.omega, opts.pc);
      const double w = amplitude_weight(fp.q, spec.omega, opts.pc);
      const cplx ph = slowly_varying_phase(fp, z, t, opts.pc) *
                      std::polar(1.0, -fp.q * fp.q * opts.pc.c * z / (2.0 * fp.Omega0));
      a *= w * ph;
      e = cplx(1.0) * basis_at(q, fp.Theta)[spec.lambda];
    } else {
      a *= propagation_phase(Model::paraxial, q.norm(), z, spec.omega, opts.pc);
      e = cplx(1.0) * zeroth_order_basis(q)[spec.lambda];
    }
    scalar_s(kx, ky) = a;
    for (std::size_t c = 0; c < 3; ++c)
      comp[c](kx, ky) = a * e[c];
  });

  PhotonWavefunction psi;
  psi.lambda = spec.lambda;
  psi.omega = spec.omega;
  psi.z = z;
  psi.t = t;
  psi.model = model;
  psi.physical_slice = opts.physical_slice;
  psi.scalar = fft_inverse(scalar_s, mode);
  psi.scalar.z = z;
  psi.scalar.t = t;
  psi.scalar.model = model;
  for (std::size_t c = 0; c < 3; ++c) {
    psi.field[c] = fft_inverse(comp[c], psi.scalar);
  }
  if (opts.physical_slice) {
    psi.field = assemble_monochromatic_field(psi.field, spec.omega, z, t, opts.pc);
    const cplx pref = monochromatic_prefactor(spec.omega, z, t, opts.pc);
    for (cplx& v : psi.scalar.samples)
      v *= pref;
  }
  return psi;
}

/// Net azimuthal phase winding of f around a circle of the given radius
/// centred on the axis, from bilinearly interpolated samples.
inline int winding_number(const ScalarEnvelope& f, double radius, int samples = 256) {
  const TransverseGrid& g = f.grid;
  auto interp = [&](double x, double y) {
    const double fx = x / g.dx + static_cast<double>(g.nx / 2);
    const double fy = y / g.dy + static_cast<double>(g.ny / 2);
    const auto ix = static_cast<std::size_t>(std::floor(fx));
    const auto iy = static_cast<std::size_t>(std::floor(fy));
    if (ix + 1 >= g.nx || iy + 1 >= g.ny)
      throw ConfigError("winding_number: circle leaves the grid");
    const double ax = fx - static_cast<double>(ix), ay = fy - static_cast<double>(iy);
    return (1 - ax) * (1 - ay) * f(ix, iy) + ax * (1 - ay) * f(ix + 1, iy) +
           (1 - ax) * ay * f(ix, iy + 1) + ax * ay * f(ix + 1, iy + 1);
  };
  double total = 0.0;
  cplx prev = interp(radius, 0.0);
  for (int k = 1; k <= samples; ++k) {
    const double phi = 2.0 * pi * k / samples;
    const cplx cur = interp(radius * std::cos(phi), radius * std::sin(phi));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

} // namespace mpq
