#pragma once

// Sampled transverse fields.
//
// Grids are origin-centred with even sizes: x_i = (i - nx/2) dx, so the sample
// at (nx/2, ny/2) sits exactly on the axis. The conjugate spectral grid uses
// FFT ordering, q_k = k dq for k < n/2 and (k - n) dq otherwise, with
// dq = 2 pi / (n d); bin 0 is q = 0 exactly.
//
// Samples are stored row-major with x fastest: index = iy * nx + ix.

#include "constants.hpp"
#include "errors.hpp"
#include "vec.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mpq {

enum class Model { exact, paraxial };

inline const char* to_string(Model m) { return m == Model::exact ? "exact" : "paraxial"; }

inline Model model_from_string(const std::string& s) {
  if (s == "exact")
    return Model::exact;
  if (s == "paraxial")
    return Model::paraxial;
  throw ConfigError("unknown propagation model '" + s + "' (expected exact|paraxial)");
}

struct TransverseGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  static TransverseGrid square(std::size_t n, double d) { return {n, n, d, d}; }

  void validate() const {
    if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0)
      throw ConfigError("grid sizes must be even and >= 2");
    if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
      throw ConfigError("grid spacings must be finite and > 0");
  }

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
  double cell_area() const { return dx * dy; }
  double extent_x() const { return static_cast<double>(nx) * dx; }
  double extent_y() const { return static_cast<double>(ny) * dy; }

  double x(std::size_t ix) const {
    return (static_cast<double>(ix) - static_cast<double>(nx / 2)) * dx;
  }
  double y(std::size_t iy) const {
    return (static_cast<double>(iy) - static_cast<double>(ny / 2)) * dy;
  }

  double dqx() const { return 2.0 * pi / extent_x(); }
  double dqy() const { return 2.0 * pi / extent_y(); }

  /// Signed FFT-ordered bin index.
  static long signed_bin(std::size_t k, std::size_t n) {
    return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
  }
  double qx(std::size_t kx) const { return static_cast<double>(signed_bin(kx, nx)) * dqx(); }
  double qy(std::size_t ky) const { return static_cast<double>(signed_bin(ky, ny)) * dqy(); }

  double q_nyquist_x() const { return pi / dx; }
  double q_nyquist_y() const { return pi / dy; }

  friend bool operator==(const TransverseGrid&, const TransverseGrid&) = default;
};

/// Complex scalar field on a grid, tagged with its carrier and history.
struct ScalarEnvelope {
  TransverseGrid grid;
  std::vector<cplx> samples;
  double omega = 0.0; // carrier angular frequency; k0 = omega / c
  double z = 0.0;
  double t = 0.0;
  std::optional<Model> model; // last propagation model applied, if any
  Units units = Units::si;
  bool aliasing_flagged = false;

  static ScalarEnvelope zeros(const TransverseGrid& g, double omega, Units u = Units::si) {
    g.validate();
    ScalarEnvelope e;
    e.grid = g;
    e.samples.assign(g.size(), cplx{});
    e.omega = omega;
    e.units = u;
    return e;
  }

  cplx& operator()(std::size_t ix, std::size_t iy) { return samples[grid.index(ix, iy)]; }
  const cplx& operator()(std::size_t ix, std::size_t iy) const {
    return samples[grid.index(ix, iy)];
  }

  bool finite() const {
    for (const cplx& v : samples)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        return false;
    return true;
  }
};

/// Spectrum in unitary-DFT normalisation on the grid's conjugate lattice.
struct Spectrum {
  TransverseGrid grid;
  std::vector<cplx> samples;

  cplx& operator()(std::size_t kx, std::size_t ky) { return samples[grid.index(kx, ky)]; }
  const cplx& operator()(std::size_t kx, std::size_t ky) const {
    return samples[grid.index(kx, ky)];
  }
};

/// Cartesian (x, y, z) components sharing grid and tags.
struct VectorEnvelope {
  std::array<ScalarEnvelope, 3> components;

  ScalarEnvelope& operator[](std::size_t c) { return components[c]; }
  const ScalarEnvelope& operator[](std::size_t c) const { return components[c]; }
  const TransverseGrid& grid() const { return components[0].grid; }

  static VectorEnvelope zeros_like(const ScalarEnvelope& s) {
    VectorEnvelope v;
    for (auto& c : v.components) {
      c = s;
      c.samples.assign(s.samples.size(), cplx{});
    }
    return v;
  }
};

inline double l2_norm_squared(const ScalarEnvelope& f) {
  double s = 0.0;
  for (const cplx& v : f.samples)
    s += std::norm(v);
  return s * f.grid.cell_area();
}

inline double l2_norm(const ScalarEnvelope& f) { return std::sqrt(l2_norm_squared(f)); }

inline double l2_norm(const VectorEnvelope& f) {
  return std::sqrt(l2_norm_squared(f[0]) + l2_norm_squared(f[1]) + l2_norm_squared(f[2]));
}

inline double l2_distance(const ScalarEnvelope& a, const ScalarEnvelope& b) {
  if (!(a.grid == b.grid))
    throw ConfigError("l2_distance: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    s += std::norm(a.samples[i] - b.samples[i]);
  return std::sqrt(s * a.grid.cell_area());
}

inline double l2_distance(const VectorEnvelope& a, const VectorEnvelope& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    const double d = l2_distance(a[c], b[c]);
    s += d * d;
  }
  return std::sqrt(s);
}

} // namespace mpq
