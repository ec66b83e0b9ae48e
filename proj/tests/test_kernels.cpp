#include <mpq/kernels.hpp>
#include <mpq/selftest.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace mpq;

namespace {
const PhysicalConstants dl = PhysicalConstants::dimensionless();
}

TEST(MpKernel, SecondPolarizationHasNoLongitudinalPart) {
  const QuadratureSpec quad{0.8, 64, Window::none, 0.5};
  for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{1.3, -2.0}, Vec2{-4.0, 0.5}}) {
    const KernelValue v = mp_kernel(x, 2.0, {0.1, 0.2}, 1.0, 0.7, Pol::second, quad, dl);
    EXPECT_EQ(v.value[2], cplx(0.0, 0.0));
  }
}

TEST(MpKernel, TranslationCovariance) {
  const QuadratureSpec quad{0.5, 64, Window::none, 0.5};
  const Vec2 x{1.0, 2.0}, src{0.25, -0.5}, shift{3.0, -7.0};
  const KernelValue a = mp_kernel(x, 3.0, src, 1.0, 0.2, Pol::first, quad, dl);
  const KernelValue b = mp_kernel(x + shift, 3.0, src + shift, 1.0, 0.2, Pol::first, quad, dl);
  for (int c = 0; c < 3; ++c)
    EXPECT_NEAR(std::abs(a.value[c] - b.value[c]), 0.0, 1e-14);
}

TEST(MpKernel, CoincidentPointAtWaist) {
  // Radial (lambda = 1) and azimuthal (lambda = 2) vectors average to zero
  // over the disc, leaving only the longitudinal part of eps1, which is real
  // and negative at z = t = 0.
  const double omega = 2.0;
  const QuadratureSpec quad{1.0, 256, Window::none, 0.5};
  const double scale = quad.q_max * quad.q_max / (4.0 * pi);
  for (Pol l : {Pol::first, Pol::second}) {
    const KernelValue v = mp_kernel({0.0, 0.0}, 0.0, {0.0, 0.0}, omega, 0.0, l, quad, dl);
    EXPECT_NEAR(std::abs(v.value[0]) / scale, 0.0, 1e-14);
    EXPECT_NEAR(std::abs(v.value[1]) / scale, 0.0, 1e-14);
    if (l == Pol::first) {
      EXPECT_LT(v.value[2].real(), 0.0);
      EXPECT_NEAR(v.value[2].imag() / scale, 0.0, 1e-14);
    }
  }
}

TEST(ParaxialGreen, ScalarWaistValueIsDiscArea) {
  const QuadratureSpec quad{0.5, 512, Window::none, 0.5};
  const cplx v = paraxial_green_scalar({0.0, 0.0}, 0.0, 1.0, quad, dl);
  EXPECT_NEAR(v.real() / (quad.q_max * quad.q_max / (4.0 * pi)), 1.0, 2e-3);
  EXPECT_EQ(v.imag(), 0.0);
  const KernelValue p = paraxial_green({0.0, 0.0}, 0.0, {0.0, 0.0}, 1.0, Pol::second, quad, dl);
  EXPECT_NEAR(std::abs(p.value[0]) + std::abs(p.value[1]), 0.0, 1e-14);
  EXPECT_EQ(p.value[2], cplx(0.0, 0.0));
}

TEST(ParaxialGreen, RequiresNarrowBand) {
  const QuadratureSpec quad{1.0, 64, Window::none, 0.5};
  EXPECT_THROW(paraxial_green({0, 0}, 1.0, {0, 0}, 1.0, Pol::first, quad, dl), DomainError);
}

TEST(ParaxialGreen, ScalarConvergesToFresnel) {
  const Vec2 d{0.3, 0.2};
  const double z = 0.8;
  // 50-digit closed form at this point
  const cplx exact{0.016146394976502838, -0.19828737047414532};
  EXPECT_NEAR(std::abs(fresnel_kernel(d, z, 1.0, dl) - exact), 0.0, 1e-16);
  double prev = 1e9;
  for (double Q : {4.0, 8.0, 16.0}) {
    const cplx v = paraxial_green_scalar(d, z, 1.0, selftest::fresnel_quadrature(Q, z), dl);
    const double err = std::abs(v - exact) / std::abs(exact);
    EXPECT_LT(err, prev) << Q;
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Narrow, SecondPolarizationMatchesParaxialAtSmallBand) {
  // q_max c / omega = 1e-2: Theta_max ~ 7e-3, distance O(Theta^2)
  const double theta = theta_omega_point(1e-2, 1.0, dl).Theta;
  const double d = selftest::narrow_beam_distance(theta, Pol::second, false, 5.0, 64, 11, 600.0);
  EXPECT_LE(d, 1e-3);
}

TEST(Narrow, FirstPolarizationTransversePartIsSecondOrder) {
  const double d1 = selftest::narrow_beam_distance(0.2, Pol::first, true, 5.0, 128, 21, 60.0);
  const double d2 = selftest::narrow_beam_distance(0.1, Pol::first, true, 5.0, 128, 21, 60.0);
  EXPECT_GT(d1 / d2, 2.5);
  EXPECT_LT(d1 / d2, 6.0);
}

TEST(Narrow, FirstPolarizationLongitudinalPartIsFirstOrder) {
  // eps1 has a z component ~ -sqrt2 Theta that the paraxial basis lacks
  const double d1 = selftest::narrow_beam_distance(0.2, Pol::first, false, 5.0, 128, 21, 60.0);
  const double d2 = selftest::narrow_beam_distance(0.1, Pol::first, false, 5.0, 128, 21, 60.0);
  EXPECT_NEAR(d1 / d2, 2.0, 0.3);
}

TEST(Orthogonality, Weight) {
  EXPECT_EQ(orthogonality_weight(0.0, 1.0, dl), 1.0);
  for (double q : {1e-3, 0.1, 1.0, 5.0})
    EXPECT_LT(orthogonality_weight(q, 1.0, dl), 1.0) << q;
  // W -> 1 uniformly on q <= 1 as omega grows
  double prev = 1.0;
  for (double omega : {10.0, 100.0, 1000.0}) {
    const double gap = 1.0 - orthogonality_weight(1.0, omega, dl);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(Orthogonality, UnitWeightCoincidence) {
  const QuadratureSpec quad{2.0, 1024, Window::none, 0.5};
  const cplx v = orthogonality_integral({0.5, 0.5}, {0.5, 0.5}, 1.0, quad, dl, true);
  EXPECT_NEAR(v.real() / (quad.q_max * quad.q_max / (4.0 * pi)), 1.0, 1e-3);
  EXPECT_EQ(v.imag(), 0.0);
}

TEST(Orthogonality, SideLobeDecay) {
  const QuadratureSpec quad{0.01, 512, Window::none, 0.5};
  const double sep = 10.0 * 2.0 * pi / quad.q_max;
  const double c0 = std::abs(orthogonality_integral({0, 0}, {0, 0}, 1.0, quad, dl));
  const double c1 = std::abs(orthogonality_integral({0, 0}, {sep, 0}, 1.0, quad, dl));
  EXPECT_LT(c1 / c0, 0.03);
}

TEST(Orthogonality, RejectsBandBeyondConstraint) {
  // Theta < 1 for every finite q, so only invalid specs are rejected
  EXPECT_THROW(orthogonality_integral({0, 0}, {0, 0}, 1.0, QuadratureSpec{0.0, 64}, dl), ConfigError);
  EXPECT_THROW(orthogonality_integral({0, 0}, {0, 0}, 1.0, QuadratureSpec{1.0, 8}, dl), ConfigError);
}

TEST(Convergence, CauchyDifferenceShrinks) {
  const QuadratureSpec q1{0.5, 32, Window::cosine_taper, 0.5};
  QuadratureSpec q2 = q1;
  q2.n_q = 64;
  const auto a = mp_kernel_refined({0.5, 0.0}, 2.0, {0, 0}, 1.0, 0.0, Pol::first, q1, dl);
  const auto b = mp_kernel_refined({0.5, 0.0}, 2.0, {0, 0}, 1.0, 0.0, Pol::first, q2, dl);
  EXPECT_LT(b.cauchy_difference, a.cauchy_difference);
  EXPECT_LT(b.cauchy_difference, 1e-3 * norm(b.fine.value));
}

TEST(Convergence, UnderResolvedChirpIsFlagged) {
  const QuadratureSpec quad{10.0, 16, Window::none, 0.5};
  EXPECT_TRUE(mp_kernel({0, 0}, 50.0, {0, 0}, 100.0, 0.0, Pol::first, quad, dl).under_resolved);
  EXPECT_FALSE(mp_kernel({0, 0}, 0.01, {0, 0}, 100.0, 0.0, Pol::first, quad, dl).under_resolved);
}

TEST(Window, Taper) {
  const QuadratureSpec quad{1.0, 64, Window::cosine_taper, 0.5};
  EXPECT_EQ(quad.window_weight(0.2), 1.0);
  EXPECT_NEAR(quad.window_weight(0.75), 0.5, 1e-15);
  EXPECT_NEAR(quad.window_weight(1.0), 0.0, 1e-30);
  EXPECT_EQ(quad.window_weight(1.01), 0.0);
  EXPECT_EQ(window_from_string("cosine-taper"), Window::cosine_taper);
  EXPECT_THROW(window_from_string("hann"), ConfigError);
}
