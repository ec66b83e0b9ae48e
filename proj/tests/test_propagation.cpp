#include <mpq/modes.hpp>
#include <mpq/propagation.hpp>
#include <mpq/selftest.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mpq;

namespace {

const PhysicalConstants dl = PhysicalConstants::dimensionless();

PropagationOptions dl_opts() {
  PropagationOptions o;
  o.pc = dl;
  return o;
}

/// Closed-form paraxial Gaussian beam 1/(1 + i z/zR) exp(-r^2 / (w0^2 (1 + i z/zR))).
cplx gaussian_beam(double r2, double z, double w0, double k0) {
  const double zR = 0.5 * k0 * w0 * w0;
  const cplx a = 1.0 + cplx(0.0, z / zR);
  return std::exp(-r2 / (w0 * w0 * a)) / a;
}

} // namespace

TEST(Propagate, ZeroDistanceIsBitExactIdentity) {
  const TransverseGrid g = TransverseGrid::square(128, 0.125);
  const ScalarEnvelope f = make_mode(ModeSpec::lg(1, 2, 1.0, 30.0), g, dl.units);
  for (Model m : {Model::exact, Model::paraxial}) {
    const ScalarEnvelope out = propagate(f, 0.0, m, dl_opts());
    EXPECT_EQ(out.samples, f.samples);
    EXPECT_EQ(out.model, m);
  }
}

TEST(Propagate, GaussianMatchesClosedFormEverywhere) {
  const double w0 = 1.0, k0 = 40.0, zR = 0.5 * k0 * w0 * w0;
  const TransverseGrid g = TransverseGrid::square(256, w0 / 8.0);
  const ScalarEnvelope f = make_mode(ModeSpec::gaussian(w0, k0), g, dl.units);
  const cplx scale = f(g.nx / 2, g.ny / 2);
  for (double z : {0.3 * zR, zR, 2.5 * zR}) {
    const ScalarEnvelope p = propagate(f, z, Model::paraxial, dl_opts());
    double worst = 0.0;
    for (std::size_t iy = 0; iy < g.ny; ++iy)
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        const double r2 = g.x(ix) * g.x(ix) + g.y(iy) * g.y(iy);
        worst = std::max(worst, std::abs(p(ix, iy) - scale * gaussian_beam(r2, z, w0, k0)));
      }
    EXPECT_LE(worst / std::abs(scale), 1e-10) << z;
  }
}

TEST(Propagate, RayleighRange) {
  const double w0 = 1.0, k0 = 60.0, zR = 0.5 * k0 * w0 * w0;
  const TransverseGrid g = TransverseGrid::square(256, w0 / 10.0);
  const ScalarEnvelope f = make_mode(ModeSpec::gaussian(w0, k0), g, dl.units);
  const ScalarEnvelope p = propagate(f, zR, Model::paraxial, dl_opts());
  EXPECT_NEAR(selftest::detail::second_moment_width(p) / w0, sqrt2, 1e-6);
  EXPECT_NEAR(std::abs(p(128, 128) / f(128, 128)), 1.0 / sqrt2, 1e-6);
}

TEST(Propagate, ExactApproachesParaxialForNarrowBeams) {
  // w0 k0 = 1000, z = 10 zR
  const double w0 = 1.0, k0 = 1000.0, zR = 0.5 * k0 * w0 * w0;
  const TransverseGrid g = TransverseGrid::square(512, w0 / 8.0);
  const ScalarEnvelope f = make_mode(ModeSpec::gaussian(w0, k0), g, dl.units);
  const ScalarEnvelope a = propagate(f, 10.0 * zR, Model::exact, dl_opts());
  const ScalarEnvelope b = propagate(f, 10.0 * zR, Model::paraxial, dl_opts());
  EXPECT_LE(l2_distance(a, b) / l2_norm(b), 1e-4);
}

TEST(Propagate, ModelDifferenceIsSecondOrderInDivergence) {
  const double w0 = 1.0;
  const TransverseGrid g = TransverseGrid::square(256, w0 / 8.0);
  std::vector<double> d;
  for (double k0 : {20.0, 40.0, 80.0}) {
    const double zR = 0.5 * k0 * w0 * w0;
    const ScalarEnvelope f = make_mode(ModeSpec::gaussian(w0, k0), g, dl.units);
    const ScalarEnvelope a = propagate(f, zR, Model::exact, dl_opts());
    const ScalarEnvelope b = propagate(f, zR, Model::paraxial, dl_opts());
    d.push_back(l2_distance(a, b) / l2_norm(b));
  }
  EXPECT_GT(d[0], 1e-3); // visibly different at w0 k0 = 20
  EXPECT_NEAR(d[0] / d[1], 4.0, 0.5);
  EXPECT_NEAR(d[1] / d[2], 4.0, 0.5);
}

TEST(Propagate, AliasingPolicies) {
  const TransverseGrid g = TransverseGrid::square(32, 0.1);
  ScalarEnvelope f = ScalarEnvelope::zeros(g, 1000.0, dl.units);
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix)
      f(ix, iy) = 1.0 + ((ix % 2) ? 0.01 : -0.01); // Nyquist content
  PropagationOptions o = dl_opts();
  EXPECT_THROW(propagate(f, 1.0, Model::paraxial, o), AliasingError);
  o.aliasing = AliasingPolicy::flag;
  EXPECT_TRUE(propagate(f, 1.0, Model::paraxial, o).aliasing_flagged);
  o.aliasing = AliasingPolicy::off;
  EXPECT_FALSE(propagate(f, 1.0, Model::paraxial, o).aliasing_flagged);
}

TEST(Propagate, RefusesContentBeyondConstraint) {
  // k0 = 1: sqrt(2) k0 ~ 1.41 while the grid resolves q up to ~31
  const TransverseGrid g = TransverseGrid::square(64, 0.1);
  ScalarEnvelope f = ScalarEnvelope::zeros(g, 1.0, dl.units);
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix)
      f(ix, iy) = std::polar(1.0, g.qx(5) * g.x(ix));
  EXPECT_THROW(propagate(f, 1.0, Model::exact, dl_opts()), ConstraintError);
  PropagationOptions o = dl_opts();
  o.aliasing = AliasingPolicy::off;
  EXPECT_THROW(propagate(f, 1.0, Model::paraxial, o), ConstraintError);
}

TEST(Propagate, GroupLaws) {
  const auto r = selftest::propagation_group();
  EXPECT_TRUE(r.passed()) << selftest::summary_line(r);
}

TEST(Propagate, VectorPromotionPolarization) {
  const TransverseGrid g = TransverseGrid::square(64, 0.125);
  ScalarEnvelope f = make_mode(ModeSpec::gaussian(1.0, 20.0), g, dl.units);
  const VectorEnvelope v2 = propagate_vector(f, 3.0, Model::exact, Pol::second, dl_opts());
  EXPECT_EQ(l2_norm(v2[2]), 0.0);
  const VectorEnvelope p1 = propagate_vector(f, 3.0, Model::paraxial, Pol::first, dl_opts());
  EXPECT_EQ(l2_norm(p1[2]), 0.0);
  const ScalarEnvelope s = propagate(f, 3.0, Model::paraxial, dl_opts());
  EXPECT_NEAR(l2_norm(p1) / l2_norm(s), 1.0, 1e-13);
}

TEST(TimePhase, Properties) {
  const TransverseGrid g = TransverseGrid::square(32, 0.5);
  std::mt19937_64 rng(5);
  const ScalarEnvelope f = selftest::detail::random_envelope(g, 10.0, 1e300, rng, dl.units);
  const Spectrum s = fft_forward(f);
  const Spectrum same = apply_time_phase(s, 0.0, 10.0, dl);
  EXPECT_EQ(same.samples, s.samples);
  const Spectrum later = apply_time_phase(s, 123.0, 10.0, dl);
  EXPECT_EQ(later(0, 0), s(0, 0));
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    a += std::norm(s.samples[i]);
    b += std::norm(later.samples[i]);
  }
  EXPECT_NEAR(a / b, 1.0, 1e-14);
  EXPECT_THROW(apply_time_phase(s, 1.0, 1.0, dl), ConstraintError);
}

TEST(Assembly, UniformScalingAndCarrierPeriod) {
  const PhysicalConstants pc;
  const double omega = 2e15;
  const TransverseGrid g = TransverseGrid::square(16, 1e-6);
  std::mt19937_64 rng(9);
  const ScalarEnvelope s = selftest::detail::random_envelope(g, omega, 1e300, rng, pc.units);
  VectorEnvelope v;
  v[0] = v[1] = v[2] = s;
  const VectorEnvelope a = assemble_monochromatic_field(v, omega, 1e-5, 3e-15, pc);
  const double mag = std::sqrt(pc.hbar / (4.0 * pi * pc.eps0 * pc.c * omega));
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_NEAR(std::abs(a[1].samples[i]) / std::abs(s.samples[i]) / mag, 1.0, 1e-13);
  const VectorEnvelope b = assemble_monochromatic_field(v, omega, 1e-5, 3e-15 + 2.0 * pi / omega, pc);
  EXPECT_LE(l2_distance(a, b) / l2_norm(a), 1e-9);
}

TEST(Assembly, RoutesAgree) {
  EXPECT_LE(selftest::route_discrepancy(dl, 2.0, 0.9, 42), 1e-12);
}

TEST(Residual, PlaneWaveOnDispersionSurface) {
  const double k0 = 10.0;
  const TransverseGrid g = TransverseGrid::square(64, 0.1);
  const Vec2 q{g.qx(2), g.qy(1)};
  std::vector<ScalarEnvelope> planes;
  for (int j = 0; j < 3; ++j) {
    ScalarEnvelope f = ScalarEnvelope::zeros(g, k0, dl.units);
    f.z = 0.01 * j;
    for (std::size_t iy = 0; iy < g.ny; ++iy)
      for (std::size_t ix = 0; ix < g.nx; ++ix)
        f(ix, iy) = std::polar(1.0, q.x * g.x(ix) + q.y * g.y(iy) - dot(q, q) / (2.0 * k0) * f.z);
    planes.push_back(f);
  }
  // what survives is the mismatch of the difference-operator symbols
  const double beta = dot(q, q) / (2.0 * k0), h = 0.01;
  const double lap = (2.0 - 2.0 * std::cos(q.x * g.dx)) / (g.dx * g.dx) +
                     (2.0 - 2.0 * std::cos(q.y * g.dy)) / (g.dy * g.dy);
  const double expect = std::abs(2.0 * k0 * std::sin(beta * h) / h - lap);
  EXPECT_NEAR(paraxial_residual(planes, k0) / expect, 1.0, 1e-8);
  EXPECT_THROW(paraxial_residual(std::span(planes).first(2), k0), ConfigError);
}

TEST(Residual, ExactModelIsNotParaxial) {
  // broad-divergence beam, w0 k0 = 6
  const double w0 = 1.0, k0 = 6.0;
  // fine grid: the difference-operator error must sit well below the
  // exact-vs-paraxial phase gap
  const TransverseGrid g = TransverseGrid::square(512, w0 / 64.0);
  const ScalarEnvelope f = make_mode(ModeSpec::gaussian(w0, k0), g, dl.units);
  std::vector<ScalarEnvelope> ex, px;
  for (int j = 0; j < 3; ++j) {
    ex.push_back(propagate(f, 1.0 + 0.01 * j, Model::exact, dl_opts()));
    px.push_back(propagate(f, 1.0 + 0.01 * j, Model::paraxial, dl_opts()));
  }
  EXPECT_GT(paraxial_residual(ex, k0), 100.0 * paraxial_residual(px, k0));
}

TEST(Propagate, IndependentOfThreadCount) {
  const TransverseGrid g = TransverseGrid::square(64, 0.25);
  std::mt19937_64 rng(11);
  const ScalarEnvelope f = selftest::detail::random_envelope(g, 20.0, 1e300, rng, dl.units);
  const int saved = thread_count();
  set_thread_count(1);
  const ScalarEnvelope a = propagate(f, 2.5, Model::exact, dl_opts());
  set_thread_count(5);
  const ScalarEnvelope b = propagate(f, 2.5, Model::exact, dl_opts());
  set_thread_count(saved);
  EXPECT_EQ(a.samples, b.samples);
}
