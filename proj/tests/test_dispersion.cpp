#include <mpq/dispersion.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mpq;

TEST(Zeta, OnAxisEqualsCarrier) { EXPECT_DOUBLE_EQ(zeta_of_q(0.0, 1e7), 1e7); }

TEST(Zeta, VanishesAtConstraintBoundary) {
  EXPECT_NEAR(zeta_of_q(sqrt2 * 1e7, 1e7), 0.0, 1e-8);
}

TEST(Zeta, DirectEvaluation) { EXPECT_NEAR(zeta_of_q(1e6, 1e7), 9.95e6, 1e-8); }

TEST(Zeta, BeyondConstraintThrows) {
  EXPECT_THROW(zeta_of_q(1.5e7, 1e7), DomainError);
  EXPECT_THROW(zeta_of_q(1.0, 0.0), DomainError);
  EXPECT_THROW(zeta_of_q(-1.0, 1e7), DomainError);
}

TEST(VarthetaOfTheta, Limits) {
  EXPECT_NEAR(vartheta_of_theta(pi / 2), 1.0, 1e-15);
  EXPECT_EQ(vartheta_of_theta(0.0), 0.0);
  EXPECT_NEAR(vartheta_of_theta(1e-12), 1e-12 / sqrt2, 1e-27);
}

// Reference values: root of tan(theta) = sqrt2 v / (1 - v^2), 50-digit arithmetic.
TEST(VarthetaOfTheta, FrozenValues) {
  EXPECT_NEAR(vartheta_of_theta(0.1), 0.070593762484040137, 1e-16);
  EXPECT_NEAR(vartheta_of_theta(0.1) * sqrt2, 0.099834656323874554, 1e-16);
  EXPECT_NEAR(vartheta_of_theta(0.5), 0.34129719018440959, 1e-15);
  EXPECT_NEAR(vartheta_of_theta(1.0), 0.64421667653609673, 1e-15);
}

TEST(VarthetaOfTheta, InvertsThetaOfQ) {
  const double k0 = 3.0;
  for (double v : {0.01, 0.2, 0.5, 0.9, 1.0}) {
    const double q = sqrt2 * k0 * v;
    EXPECT_NEAR(vartheta_of_theta(theta_of_q(q, k0)), v, 1e-14) << v;
  }
}

TEST(VarthetaOfTheta, OutsideDomainThrows) {
  EXPECT_THROW(vartheta_of_theta(-0.1), DomainError);
  EXPECT_THROW(vartheta_of_theta(2.0), DomainError);
}

TEST(VarthetaSeries, Values) {
  EXPECT_EQ(vartheta_series(0.0), 0.0);
  EXPECT_NEAR(vartheta_series(0.1) * sqrt2, 0.099833333333333333, 1e-16);
  // cubic truncation differs from the exact relation by ~ (2/15) theta^5
  const double diff = vartheta_of_theta(0.1) * sqrt2 - vartheta_series(0.1) * sqrt2;
  EXPECT_NEAR(diff, 1.3229905412205919e-6, 1e-15);
}

TEST(VarthetaSeries, HalfRadianWithinFittedBound) {
  double C = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double th = 1e-3 * std::pow(50.0, i / 50.0);
    C = std::max(C, std::abs(vartheta_of_theta(th) - vartheta_series(th)) * sqrt2 / std::pow(th, 5));
  }
  EXPECT_LE(std::abs(vartheta_of_theta(0.5) - vartheta_series(0.5)) * sqrt2, C * std::pow(0.5, 5));
}

TEST(ThetaOmega, OnAxis) {
  const FrequencyPoint fp = theta_omega_point(0.0, 2.5e15);
  EXPECT_EQ(fp.Theta, 0.0);
  EXPECT_EQ(fp.Omega0, 2.5e15);
}

TEST(ThetaOmega, QcEqualsOmega) {
  const PhysicalConstants pc = PhysicalConstants::dimensionless();
  const FrequencyPoint fp = theta_omega_point(1.0, 1.0, pc);
  EXPECT_NEAR(fp.Theta, sqrt2 / (1.0 + std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(fp.Theta, 0.51763809020504152, 1e-15);
  EXPECT_NEAR(fp.Omega0, (1.0 + std::sqrt(3.0)) / 2.0, 1e-15);
}

TEST(ThetaOmega, SelfConsistencySI) {
  const PhysicalConstants pc;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-6, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double omega = 1e15, q = u(rng) * omega / pc.c;
    const FrequencyPoint fp = theta_omega_point(q, omega, pc);
    EXPECT_NEAR((fp.Omega0 / pc.c - q / (fp.Theta * sqrt2)) / (fp.Omega0 / pc.c), 0.0, 1e-14);
    EXPECT_LT(fp.Theta, 1.0);
  }
}

TEST(QOfTheta, RoundTrip) {
  const PhysicalConstants pc = PhysicalConstants::dimensionless();
  for (double T : {0.0, 0.05, 0.3, 0.9})
    EXPECT_NEAR(theta_omega_point(q_of_Theta(T, 2.0, pc), 2.0, pc).Theta, T, 1e-14);
}

TEST(Jacobian, Values) {
  const PhysicalConstants pc = PhysicalConstants::dimensionless();
  EXPECT_EQ(dirac_jacobian(0.0, 1.0, pc), 1.0);
  EXPECT_NEAR(dirac_jacobian(1.0, 1.0, pc), 0.78867513459481288, 1e-15);
}

TEST(Jacobian, MatchesFiniteDifference) {
  const PhysicalConstants pc;
  const double omega = 1.3e15;
  for (double r : {0.01, 0.4, 1.0, 1.9}) {
    const double q = r * omega / pc.c;
    const double k0 = theta_omega_point(q, omega, pc).Omega0 / pc.c;
    const double h = 1e-5 * k0;
    auto w = [&](double k) { return pc.c * k - q * q * pc.c / (2.0 * k); };
    const double d = (w(k0 + h) - w(k0 - h)) / (2.0 * h);
    EXPECT_NEAR(dirac_jacobian(q, omega, pc) * d / pc.c, 1.0, 1e-9) << r;
  }
}

TEST(NIndex, Examples) {
  const QuantizationConfig cfg{1e-3};
  const double k0 = 2.0 * pi * 10.0 / cfg.L;
  EXPECT_EQ(n_index(1.0, k0, cfg), 0);
  EXPECT_EQ(n_index(0.0, k0, cfg), 10);
  EXPECT_EQ(n_index(0.5, k0, cfg), 7);
  EXPECT_THROW(n_index(1.2, k0, cfg), DomainError);
  EXPECT_THROW(n_index(0.5, k0, QuantizationConfig{-1.0}), ConfigError);
}

TEST(Carrier, Validation) {
  EXPECT_THROW(CarrierParams::from_k0(0.0), DomainError);
  EXPECT_THROW(CarrierParams::from_k0(std::nan("")), DomainError);
  const auto cp = CarrierParams::from_k0(2.0, PhysicalConstants::dimensionless());
  EXPECT_EQ(cp.omega0, 2.0);
}
