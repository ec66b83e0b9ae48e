#pragma once

// Maxwell-paraxial diffraction kernel, paraxial Green's function and the
// quasi-orthogonality integral, by band-limited 2-D spectral quadrature.
//
// All three are integrals (2 pi)^-2 int d^2q g(q) exp(i q.dx) over the disc
// q <= q_max. They are evaluated with a midpoint rule on the uniform n_q x n_q
// lattice covering [-q_max, q_max]^2 (q = 0 is never a node for even n_q),
// multiplied by the disc indicator and optionally a cosine taper.
//
// The plane-wave factor is separable, exp(i qx dx) exp(i qy dy), so each
// output point costs one complex multiply-add per node. Per-point sums run in
// a fixed order; results are bit-identical for any worker count.

#include "constants.hpp"
#include "dispersion.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "polarization.hpp"
#include "vec.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mpq {

enum class Window { none, cosine_taper };

inline const char* to_string(Window w) { return w == Window::none ? "none" : "cosine-taper"; }

inline Window window_from_string(const std::string& s) {
  if (s == "none")
    return Window::none;
  if (s == "cosine-taper" || s == "cosine_taper")
    return Window::cosine_taper;
  throw ConfigError("unknown window '" + s + "' (expected none|cosine-taper)");
}

struct QuadratureSpec {
  double q_max = 0.0;   // rad/m
  std::size_t n_q = 64; // nodes per axis
  Window window = Window::none;
  /// Outer fraction of the band over which the cosine taper falls to zero.
  double taper_fraction = 0.5;

  void validate() const {
    if (!(q_max > 0.0) || !std::isfinite(q_max))
      throw ConfigError("quadrature q_max must be finite and > 0");
    if (n_q < 16)
      throw ConfigError("quadrature needs n_q >= 16");
    if (!(taper_fraction > 0.0) || taper_fraction > 1.0)
      throw ConfigError("taper_fraction must lie in (0, 1]");
  }

  double dq() const { return 2.0 * q_max / static_cast<double>(n_q); }
  double node(std::size_t i) const { return -q_max + (static_cast<double>(i) + 0.5) * dq(); }

  /// Disc indicator times taper.
  double window_weight(double q) const {
    if (q > q_max)
      return 0.0;
    if (window == Window::none)
      return 1.0;
    const double q0 = (1.0 - taper_fraction) * q_max;
    if (q <= q0)
      return 1.0;
    const double c = std::cos(0.5 * pi * (q - q0) / (q_max - q0));
    return c * c;
  }
};

struct KernelValue {
  CVec3 value{};
  Vec2 x;
  double z = 0.0;
  Vec2 x_src;
  double omega = 0.0;
  double t = 0.0;
  Pol lambda = Pol::first;
  /// Fresnel phase steps by >= pi between adjacent nodes at q_max.
  bool under_resolved = false;
};

namespace detail {

/// Node values g_c(q) for c = 0, 1, 2 (row-major, x fastest).
struct SpectralTable {
  QuadratureSpec quad;
  std::vector<double> nodes;
  std::array<std::vector<cplx>, 3> g;
  std::array<bool, 3> active{true, true, true};
};

/// Sums (2 pi)^-2 dq^2 sum_q g(q) exp(i q.d) for one displacement d.
inline CVec3 sum_table(const SpectralTable& tab, Vec2 d) {
  const std::size_t n = tab.nodes.size();
  std::vector<cplx> ex(n), ey(n);
  for (std::size_t i = 0; i < n; ++i) {
    ex[i] = std::polar(1.0, tab.nodes[i] * d.x);
    ey[i] = std::polar(1.0, tab.nodes[i] * d.y);
  }
  const double dq = tab.quad.dq();
  const double scale = dq * dq / (4.0 * pi * pi);
  CVec3 out{};
  for (std::size_t c = 0; c < 3; ++c) {
    if (!tab.active[c])
      continue;
    const std::vector<cplx>& g = tab.g[c];
    cplx total{};
    for (std::size_t iy = 0; iy < n; ++iy) {
      cplx row{};
      const cplx* gr = g.data() + iy * n;
      for (std::size_t ix = 0; ix < n; ++ix)
        row += gr[ix] * ex[ix];
      total += row * ey[iy];
    }
    out[c] = total * scale;
  }
  return out;
}

template <class Fill>
SpectralTable build_table(const QuadratureSpec& quad, Fill&& fill) {
  quad.validate();
  SpectralTable tab;
  tab.quad = quad;
  const std::size_t n = quad.n_q;
  tab.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    tab.nodes[i] = quad.node(i);
  for (auto& g : tab.g)
    g.assign(n * n, cplx{});
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const Vec2 q{tab.nodes[ix], tab.nodes[iy]};
      const double w = quad.window_weight(q.norm());
      if (w == 0.0)
        continue;
      const CVec3 v = fill(q);
      for (std::size_t c = 0; c < 3; ++c)
        tab.g[c][iy * n + ix] = w * v[c];
    }
  return tab;
}

inline void check_frequency_band(const QuadratureSpec& quad, double omega,
                                 const PhysicalConstants& pc) {
  quad.validate();
  const double T = theta_omega_point(quad.q_max, omega, pc).Theta;
  if (!(T <= 1.0))
    throw DomainError("Theta(q_max, omega) exceeds 1");
}

/// Phase step of q^2 c z / (2 Omega) across the last node spacing.
inline bool fresnel_under_resolved(const QuadratureSpec& quad, double z, double omega,
                                   bool exact, const PhysicalConstants& pc) {
  auto phase = [&](double q) {
    const double Om = exact ? theta_omega_point(q, omega, pc).Omega0 : omega;
    return q * q * pc.c * z / (2.0 * Om);
  };
  return std::abs(phase(quad.q_max) - phase(quad.q_max - quad.dq())) >= pi;
}

inline SpectralTable mp_table(double z, double omega, double t, Pol lambda,
                              const QuadratureSpec& quad, const PhysicalConstants& pc) {
  return build_table(quad, [&](Vec2 q) {
    const FrequencyPoint fp = theta_omega_point(q.norm(), omega, pc);
    const SlowlyVaryingPolarization E = slowly_varying_polarization(q, omega, z, t, lambda, pc);
    const cplx fresnel = std::polar(1.0, -fp.q * fp.q * pc.c * z / (2.0 * fp.Omega0));
    return CVec3{E.vec[0] * fresnel, E.vec[1] * fresnel, E.vec[2] * fresnel};
  });
}

inline SpectralTable paraxial_table(double z, double omega, Pol lambda,
                                    const QuadratureSpec& quad, const PhysicalConstants& pc) {
  SpectralTable tab = build_table(quad, [&](Vec2 q) {
    const Vec3 e = zeroth_order_basis(q)[lambda];
    const cplx phase = std::polar(1.0, -dot(q, q) * pc.c * z / (2.0 * omega));
    return phase * e;
  });
  tab.active[2] = false; // e^(lambda) has no z component
  return tab;
}

template <class MakeValue>
std::vector<KernelValue> evaluate_points(const SpectralTable& tab, std::span<const Vec2> xs,
                                         Vec2 x_src, MakeValue&& make) {
  std::vector<KernelValue> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    out[i] = make(xs[i]);
    out[i].value = sum_table(tab, xs[i] - x_src);
  });
  return out;
}

} // namespace detail

/// Maxwell-paraxial kernel F^(lambda)(x, z, x_src, omega, t) at many points.
inline std::vector<KernelValue> mp_kernel(std::span<const Vec2> xs, double z, Vec2 x_src,
                                          double omega, double t, Pol lambda,
                                          const QuadratureSpec& quad,
                                          const PhysicalConstants& pc = {}) {
  detail::check_frequency_band(quad, omega, pc);
  const detail::SpectralTable tab = detail::mp_table(z, omega, t, lambda, quad, pc);
  const bool flag = detail::fresnel_under_resolved(quad, z, omega, true, pc);
  return detail::evaluate_points(tab, xs, x_src, [&](Vec2 x) {
    KernelValue kv;
    kv.x = x;
    kv.z = z;
    kv.x_src = x_src;
    kv.omega = omega;
    kv.t = t;
    kv.lambda = lambda;
    kv.under_resolved = flag;
    return kv;
  });
}

inline KernelValue mp_kernel(Vec2 x, double z, Vec2 x_src, double omega, double t, Pol lambda,
                             const QuadratureSpec& quad, const PhysicalConstants& pc = {}) {
  const Vec2 xs[1] = {x};
  return mp_kernel(std::span<const Vec2>(xs), z, x_src, omega, t, lambda, quad, pc).front();
}

/// Paraxial Green's function P^(lambda)(x, z, x_src, omega); requires q_max < omega / c.
inline std::vector<KernelValue> paraxial_green(std::span<const Vec2> xs, double z, Vec2 x_src,
                                               double omega, Pol lambda,
                                               const QuadratureSpec& quad,
                                               const PhysicalConstants& pc = {}) {
  detail::require_frequency(omega);
  quad.validate();
  if (!(quad.q_max < omega / pc.c))
    throw DomainError("paraxial Green's function needs q_max < omega / c");
  const detail::SpectralTable tab = detail::paraxial_table(z, omega, lambda, quad, pc);
  const bool flag = detail::fresnel_under_resolved(quad, z, omega, false, pc);
  return detail::evaluate_points(tab, xs, x_src, [&](Vec2 x) {
    KernelValue kv;
    kv.x = x;
    kv.z = z;
    kv.x_src = x_src;
    kv.omega = omega;
    kv.lambda = lambda;
    kv.under_resolved = flag;
    return kv;
  });
}

inline KernelValue paraxial_green(Vec2 x, double z, Vec2 x_src, double omega, Pol lambda,
                                  const QuadratureSpec& quad, const PhysicalConstants& pc = {}) {
  const Vec2 xs[1] = {x};
  return paraxial_green(std::span<const Vec2>(xs), z, x_src, omega, lambda, quad, pc).front();
}

/// Scalar paraxial Green's function (polarization replaced by 1). Unlike the
/// vector form it accepts any q_max, so it can be driven towards the
/// untruncated Fresnel kernel.
inline cplx paraxial_green_scalar(Vec2 displacement, double z, double omega,
                                  const QuadratureSpec& quad, const PhysicalConstants& pc = {}) {
  detail::require_frequency(omega);
  detail::SpectralTable tab = detail::build_table(quad, [&](Vec2 q) {
    const cplx phase = std::polar(1.0, -dot(q, q) * pc.c * z / (2.0 * omega));
    return CVec3{phase, 0.0, 0.0};
  });
  tab.active = {true, false, false};
  return detail::sum_table(tab, displacement)[0];
}

/// Closed-form Fresnel kernel (omega / (2 pi i c z)) exp(i omega |dx|^2 / (2 c z)).
inline cplx fresnel_kernel(Vec2 displacement, double z, double omega,
                           const PhysicalConstants& pc = {}) {
  if (z == 0.0)
    throw DomainError("Fresnel kernel is singular at z = 0");
  const double k = omega / pc.c;
  return k / (2.0 * pi * cplx(0.0, z)) * std::polar(1.0, k * dot(displacement, displacement) / (2.0 * z));
}

inline double orthogonality_weight(double q, double omega, const PhysicalConstants& pc = {}) {
  const double w = amplitude_weight(q, omega, pc);
  return w * w;
}

/// (2 pi)^-2 int d^2q W(q, omega) exp(i q.(x1 - x2)) over the band. With
/// unit_weight the factor W is replaced by 1.
inline cplx orthogonality_integral(Vec2 x1, Vec2 x2, double omega, const QuadratureSpec& quad,
                                   const PhysicalConstants& pc = {}, bool unit_weight = false) {
  detail::check_frequency_band(quad, omega, pc);
  detail::SpectralTable tab = detail::build_table(quad, [&](Vec2 q) {
    const double W = unit_weight ? 1.0 : orthogonality_weight(q.norm(), omega, pc);
    return CVec3{W, 0.0, 0.0};
  });
  tab.active = {true, false, false};
  return detail::sum_table(tab, x1 - x2)[0];
}

struct KernelConvergence {
  KernelValue coarse; // n_q
  KernelValue fine;   // 2 n_q
  double cauchy_difference = 0.0; // |fine - coarse|
};

/// mp_kernel at n_q and 2 n_q; the difference estimates the quadrature error.
inline KernelConvergence mp_kernel_refined(Vec2 x, double z, Vec2 x_src, double omega, double t,
                                           Pol lambda, const QuadratureSpec& quad,
                                           const PhysicalConstants& pc = {}) {
  QuadratureSpec fine = quad;
  fine.n_q = 2 * quad.n_q;
  KernelConvergence r;
  r.coarse = mp_kernel(x, z, x_src, omega, t, lambda, quad, pc);
  r.fine = mp_kernel(x, z, x_src, omega, t, lambda, fine, pc);
  CVec3 d;
  for (std::size_t c = 0; c < 3; ++c)
    d[c] = r.fine.value[c] - r.coarse.value[c];
  r.cauchy_difference = norm(d);
  return r;
}

} // namespace mpq
