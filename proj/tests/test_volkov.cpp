#include "common.hpp"

#include <gtest/gtest.h>

using namespace estc;
using estc::test::LD;

namespace {

VolkovParams<LD> defaults() {
  VolkovParams<LD> p;
  p.a31 = LD(0.01);
  p.b32 = LD(0.007);
  p.q = {LD(0.1), LD(-0.2), LD(0.05)};
  p.q4 = LD(1.3);
  p.Omega = LD(0.1);
  return p;
}

}  // namespace

TEST(Volkov, Intensity) {
  const auto p = defaults();
  EXPECT_NEAR(double(p.intensity()), 2 * (1e-4 + 4.9e-5), 1e-18);
  EXPECT_NEAR(double(p.field().intensity()), double(p.intensity()), 1e-18);
}

TEST(Volkov, DispersionIdentity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    auto p = defaults();
    p.q = {LD(u(rng)), LD(u(rng)), LD(u(rng))};
    p.q4 = LD(1.5 + u(rng));
    const LD scale = 1 + p.q4 * p.q4;
    EXPECT_LT(std::abs(double(volkov_dispersion_residual(p) / scale)), 1e-12);
  }
}

TEST(Volkov, SpinorFactorIsPeriodic) {
  const auto p = defaults();
  for (LD z : {LD(0.1), LD(0.37), LD(0.9)})
    EXPECT_LT(double((volkov_J(z, p) - volkov_J(z + 1, p)).cwiseAbs().maxCoeff()), 1e-15);
}

TEST(Volkov, PeriodicPhaseHasZeroMean) {
  const auto p = defaults();
  const int n = 64;
  LD s = 0;
  for (int i = 0; i < n; ++i) s += volkov_phase_parts<LD>({0, 0, LD(i) / n, 0}, p).second;
  EXPECT_LT(std::abs(double(s / n)), 1e-15);
}

TEST(Volkov, ClosedFormSolvesDirac) {
  const auto p = defaults();
  const auto f = p.field();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 16; ++t) {
    const std::array<LD, 4> X{LD(u(rng)), LD(u(rng)), LD(u(rng)), LD(u(rng))};
    const Mat4<LD> r =
        apply_dirac_fd<LD>([&](const auto& Y) { return volkov_Ev<LD>(Y, p); }, X, f, p.Omega, LD(1e-4));
    EXPECT_LT(double(r.cwiseAbs().maxCoeff()), 1e-10);
  }
}

TEST(Volkov, SingularCases) {
  auto p = defaults();
  p.q4 = p.q[2];
  EXPECT_THROW(p.J4(), singular_volkov);
  EXPECT_THROW(volkov_qprime(p), singular_volkov);
}

TEST(Volkov, XiVolkovWithoutCancellation) {
  EXPECT_NEAR(double(xi_volkov<LD>({0, 0, 0}, LD(4e-4))), std::sqrt(1.0004) - 1, 1e-15);
  EXPECT_NEAR(double(xi_volkov<LD>({0, 0, 0}, LD(1e-20))), 5e-21, 1e-35);
}
