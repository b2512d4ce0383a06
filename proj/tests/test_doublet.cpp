#include "common.hpp"

#include <gtest/gtest.h>

using namespace estc;
using estc::test::LD;

namespace {

const GroundState<LD>& circular() {
  static const GroundState<LD> gs = [] {
    const auto pb = test::make_problem<LD>(test::counter_circular<LD>(LD(4e-4)), LD(0.1), 4);
    return ground_state<LD>(pb, LD(1.980e-4), LD(1.996e-4), 17);
  }();
  return gs;
}

const Doublet<LD>& doublet() {
  if (!circular().doublet) throw std::runtime_error("no doublet");
  return *circular().doublet;
}

// a*(n) = (-1)^n4 a(n) and Sigma_1 a(n) = s (-1)^n4 a(n)
double symmetry_defect(const SolutionFamily<LD>& f, const Vec4<LD>& a0, int s) {
  const auto amp = f.amplitudes(a0);
  const Mat4<LD> s1 = sigma_k<LD>(1);
  LD worst = 0, scale = 0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const LD sign = (f.nodes[i][3] % 2 == 0) ? 1 : -1;
    scale = std::max(scale, amp[i].cwiseAbs().maxCoeff());
    worst = std::max(worst, (amp[i].conjugate() - sign * amp[i]).cwiseAbs().maxCoeff());
    worst = std::max(worst, (s1 * amp[i] - LD(s) * sign * amp[i]).cwiseAbs().maxCoeff());
  }
  return double(worst / scale);
}

}  // namespace

TEST(Doublet, TwoLinesFound) {
  const auto& gs = circular();
  ASSERT_EQ(gs.search.lines.size(), 2u);
  EXPECT_TRUE(gs.search.warnings.empty());
  const auto& d = doublet();
  EXPECT_GE(d.delta_xi, 0);
  EXPECT_EQ(d.xi_m, (d.a.xi0 + d.b.xi0) / 2);
  EXPECT_NEAR(d.nu_pr_hz, double(d.delta_xi) * kRestFrequencyHz, 1e-6);
}

TEST(Doublet, AmplitudeSymmetries) {
  const auto& gs = circular();
  const auto& d = doublet();
  EXPECT_LT(symmetry_defect(gs.families[0], d.a.a0, 1), 1e-9);
  EXPECT_LT(symmetry_defect(gs.families[1], d.b.a0, -1), 1e-9);
}

TEST(Doublet, SpinMeansOpposite) {
  const auto& d = doublet();
  EXPECT_NEAR(double(d.sigma1a), -double(d.sigma1b), 1e-6);
  const double ia = 4e-4;
  EXPECT_NEAR(double(d.sigma1a), 1 - ia + 1.5 * ia * ia, 10 * ia * ia * ia);
}

TEST(Doublet, ZeroMeans) {
  const auto& gs = circular();
  const auto& d = doublet();
  const std::array<Observable, 8> obs{Observable::J1, Observable::J2, Observable::J3, Observable::P1,
                                      Observable::P2, Observable::P3, Observable::Sigma2, Observable::Sigma3};
  for (int line = 0; line < 2; ++line)
    for (auto o : obs)
      EXPECT_LT(std::abs(double(mean_value(gs.families[line], o, line ? d.b.a0 : d.a.a0))), 1e-10)
          << "line " << line << " observable " << int(o);
}

TEST(Doublet, LinesAreOrthogonal) {
  const auto& gs = circular();
  const auto& d = doublet();
  const auto ov = orthogonality(gs.families[0], d.a.a0, gs.families[1], d.b.a0);
  EXPECT_LT(double(std::abs(ov)), 1e-8);
}

TEST(Doublet, EnergiesDiffer) {
  const auto& d = doublet();
  EXPECT_GT(d.Ea, 1);
  EXPECT_GT(d.dE, 0);
  EXPECT_NE(d.Ea, d.a.xi0 + 1);
}

TEST(Doublet, MixedStateMatchesDirectSum) {
  const auto& gs = circular();
  const auto& d = doublet();
  const int h = d.sigma1a > 0 ? 1 : -1;
  for (LD alpha : {LD(0), LD(0.3), LD(0.7853981633974483), LD(1.2), LD(1.5707963267948966)})
    for (LD delta : {LD(0), LD(1), LD(4)}) {
      const auto m = mixed_state(d, alpha, delta, h);
      const auto s = m.spin(0.0);
      const auto r = two_line_spin(gs.families[0], d.a.a0, gs.families[1], d.b.a0, alpha, delta, LD(0));
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(double(s[k]), double(r[k]), 1e-8) << double(alpha) << " " << double(delta) << " " << k;
    }
}

TEST(Doublet, PrecessionPeriod) {
  const auto& d = doublet();
  const auto m = mixed_state(d, LD(0.7853981633974483), LD(0), 1);
  const auto s0 = m.spin(0.0), s1 = m.spin(1.0 / d.nu_pr_hz);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(double(s0[k]), double(s1[k]), 1e-9);
  // transverse component keeps its length
  const auto sq = m.spin(0.3 / d.nu_pr_hz);
  EXPECT_NEAR(double(s0[1] * s0[1] + s0[2] * s0[2]), double(sq[1] * sq[1] + sq[2] * sq[2]), 1e-12);
}
