#pragma once

// Unitary 2-D DFT on TransverseGrid samples, backed by FFTW.
//
// The 2-D transform is done as 1-D row transforms followed by 1-D column
// transforms, each executed with a shared plan through FFTW's new-array
// interface. Rows (then columns) are split over workers; every line is
// transformed identically whatever the worker count, so output bits do not
// depend on MPQ_THREADS.

#include "errors.hpp"
#include "grid.hpp"
#include "parallel.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace mpq {

namespace detail {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

/// Process-wide cache of 1-D plans; the FFTW planner itself is not thread-safe.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end())
      return it->second.get();
    std::vector<cplx> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                   reinterpret_cast<fftw_complex*>(b.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, PlanHandle(p));
    return p;
  }

private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanHandle> plans_;
};

inline void transform_lines(std::span<cplx> data, const TransverseGrid& g, int sign) {
  const int nx = static_cast<int>(g.nx);
  const int ny = static_cast<int>(g.ny);
  fftw_plan row_plan = PlanCache::instance().get(nx, sign);
  fftw_plan col_plan = PlanCache::instance().get(ny, sign);

  parallel_for(g.ny, [&](std::size_t iy) {
    std::vector<cplx> out(g.nx);
    cplx* row = data.data() + iy * g.nx;
    fftw_execute_dft(row_plan, reinterpret_cast<fftw_complex*>(row),
                     reinterpret_cast<fftw_complex*>(out.data()));
    std::copy(out.begin(), out.end(), row);
  });
  parallel_for(g.nx, [&](std::size_t ix) {
    std::vector<cplx> in(g.ny), out(g.ny);
    for (std::size_t iy = 0; iy < g.ny; ++iy)
      in[iy] = data[iy * g.nx + ix];
    fftw_execute_dft(col_plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    for (std::size_t iy = 0; iy < g.ny; ++iy)
      data[iy * g.nx + ix] = out[iy];
  });
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (cplx& v : data)
    v *= scale;
}

inline void require_finite(std::span<const cplx> data, const char* what) {
  for (const cplx& v : data)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError(std::string(what) + ": non-finite sample");
}

} // namespace detail

/// In-place unitary forward transform, sum_x f(x) exp(-i q.x) / sqrt(N) up to
/// the grid-origin phase (see continuum helpers below).
inline void fft_forward_inplace(std::span<cplx> data, const TransverseGrid& g) {
  g.validate();
  detail::transform_lines(data, g, FFTW_FORWARD);
}

inline void fft_inverse_inplace(std::span<cplx> data, const TransverseGrid& g) {
  g.validate();
  detail::transform_lines(data, g, FFTW_BACKWARD);
}

inline Spectrum fft_forward(const ScalarEnvelope& f) {
  f.grid.validate();
  if (f.samples.size() != f.grid.size())
    throw ConfigError("envelope sample count does not match its grid");
  detail::require_finite(f.samples, "fft_forward");
  Spectrum s{f.grid, f.samples};
  fft_forward_inplace(s.samples, s.grid);
  return s;
}

/// Inverse transform; tags (carrier, z, t, model) are copied from `like`.
inline ScalarEnvelope fft_inverse(const Spectrum& s, const ScalarEnvelope& like) {
  detail::require_finite(s.samples, "fft_inverse");
  ScalarEnvelope out = like;
  out.grid = s.grid;
  out.samples = s.samples;
  fft_inverse_inplace(out.samples, out.grid);
  return out;
}

inline ScalarEnvelope fft_inverse(const Spectrum& s) {
  ScalarEnvelope like;
  like.grid = s.grid;
  return fft_inverse(s, like);
}

/// (-1)^(kx + ky): the phase exp(i q.(n/2) d) from the grid's origin offset.
inline double origin_sign(std::size_t kx, std::size_t ky) {
  return ((kx + ky) % 2 == 0) ? 1.0 : -1.0;
}

/// Continuum-normalised spectrum f~(q) = (1/2pi) int d^2x f(x) exp(-i q.x),
/// sampled on the FFT lattice.
inline Spectrum continuum_spectrum(const ScalarEnvelope& f) {
  Spectrum s = fft_forward(f);
  const double scale =
      f.grid.cell_area() * std::sqrt(static_cast<double>(f.grid.size())) / (2.0 * pi);
  for (std::size_t ky = 0; ky < s.grid.ny; ++ky)
    for (std::size_t kx = 0; kx < s.grid.nx; ++kx)
      s(kx, ky) *= scale * origin_sign(kx, ky);
  return s;
}

/// Inverse of continuum_spectrum: f(x) = (1/2pi) sum_q dq^2 f~(q) exp(i q.x).
inline ScalarEnvelope from_continuum_spectrum(const Spectrum& cs, const ScalarEnvelope& like) {
  Spectrum s = cs;
  const double scale =
      2.0 * pi / (s.grid.cell_area() * std::sqrt(static_cast<double>(s.grid.size())));
  for (std::size_t ky = 0; ky < s.grid.ny; ++ky)
    for (std::size_t kx = 0; kx < s.grid.nx; ++kx)
      s(kx, ky) *= scale * origin_sign(kx, ky);
  return fft_inverse(s, like);
}

} // namespace mpq
