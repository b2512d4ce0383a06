#include "common.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace estc;
using estc::test::LD;

namespace {

LinearSystem<double> circular_system(int g, double xi = 1.9e-4) {
  return build_system(test::counter_circular<double>(4e-4), WaveParams<double>{{0, 0, 0}, xi, 0.1}, g);
}

double maxabs(const MatX<double>& m) { return test::max_abs<double>(m); }

}  // namespace

TEST(Projector, BlockOperatorStorage) {
  std::mt19937_64 rng(1);
  MatX<double> h = MatX<double>::Zero(12, 12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h.block<4, 4>(4 * i, 4 * j) = test::random_mat<double>(rng);
  h = (h + h.adjoint()).eval();
  const auto op = BlockOperator<double>::from_dense(h);
  EXPECT_EQ(maxabs(op.dense() - h), 0.0);
  EXPECT_EQ(op.block(2, 0), Mat4<double>(h.block<4, 4>(8, 0)));
  EXPECT_NEAR(op.trace(), h.trace().real(), 1e-12);
}

TEST(Projector, SystemLayout) {
  const auto sys = circular_system(3);
  EXPECT_EQ(sys.variables.index_of(kOrigin), 0);
  for (const auto& n : sys.equations.nodes) {
    EXPECT_TRUE(sys.variables.contains(n));
    for (const auto& c : sys.couplings) EXPECT_TRUE(sys.variables.contains(n + c.first));
  }
  EXPECT_GT(sys.variables.size(), sys.equations.size());
}

TEST(Projector, AtomIsRankFourProjector) {
  const auto sys = circular_system(2);
  const int slots = sys.variables.size();
  for (const auto& n : sys.equations.nodes) {
    const MatX<double> p = make_atom(sys, n).projector(slots).dense();
    EXPECT_LT(maxabs(p * p - p), 1e-11);
    EXPECT_LT(maxabs(p - p.adjoint()), 1e-11);
    EXPECT_NEAR(p.trace().real(), 4.0, 1e-11);
  }
}

TEST(Projector, MergedProjectorAlgebra) {
  const auto sys = circular_system(3);
  const auto fs = build_fundamental(sys);
  const MatX<double> P = fs.P.dense();
  EXPECT_LT(maxabs(P * P - P), 1e-11);
  EXPECT_LT(maxabs(P - P.adjoint()), 1e-11);
  EXPECT_NEAR(fs.P.trace(), 4.0 * sys.equations.size(), 1e-9);
  for (const auto& n : sys.equations.nodes) {
    const MatX<double> a = make_atom(sys, n).projector(sys.variables.size()).dense();
    EXPECT_LT(maxabs(P * a - a), 1e-11);
    EXPECT_LT(maxabs(P * a - a * P), 1e-11);
  }
}

TEST(Projector, MergeOrderIndependence) {
  const auto sys = circular_system(3);
  const MatX<double> ref = build_fundamental(sys).P.dense();
  std::mt19937_64 rng(99);
  for (int t = 0; t < 5; ++t) {
    BuildOptions o;
    o.order.resize(sys.equations.size());
    std::iota(o.order.begin(), o.order.end(), 0);
    std::shuffle(o.order.begin(), o.order.end(), rng);
    EXPECT_LT(maxabs(build_fundamental(sys, o).P.dense() - ref), 1e-10);
  }
}

TEST(Projector, MatchesNullspaceOracle) {
  const auto sys = circular_system(3);
  const auto fs = build_fundamental(sys);
  const auto orc = nullspace_oracle(sys);
  EXPECT_EQ(orc.rank, 4 * sys.equations.size());
  EXPECT_LT(maxabs(fs.P.dense() - orc.P.dense()), 1e-10);
}

TEST(Projector, SolutionSatisfiesEquations) {
  const auto fs = build_fundamental(circular_system(4));
  EXPECT_LT(fs.interior_residual, 1e-11);
  for (const auto& n : fs.system.equations.nodes)
    EXPECT_LT(equation_residual(fs.system, fs.S, n).cwiseAbs().maxCoeff(), 1e-11);
  // S(n) = delta_n0 - P'(n, 0)
  EXPECT_LT((fs.S[0] + fs.P.block(0, 0) - Mat4<double>::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Projector, DependentEquationRejected) {
  const auto sys = circular_system(2);
  BlockOperator<double> alpha(sys.variables.size());
  const auto at = make_atom(sys, kOrigin);
  merge_into(alpha, at);
  EXPECT_THROW(merge_into(alpha, at), dependent_equation);
}

TEST(Projector, ConsistencyCheckFires) {
  BuildOptions o;
  o.verify_tol = 0;
  EXPECT_THROW(build_fundamental(circular_system(2), o), consistency_error);
}

TEST(Projector, OracleSizeGuard) { EXPECT_THROW(nullspace_oracle(circular_system(4), 16), size_guard); }

TEST(Projector, ExtendedPrecisionAgrees) {
  const auto sd = build_fundamental(circular_system(3));
  const auto sl = build_fundamental(
      build_system(test::counter_circular<LD>(LD(4e-4)), WaveParams<LD>{{0, 0, 0}, LD(1.9e-4), LD(0.1)}, 3));
  double worst = 0;
  for (std::size_t k = 0; k < sd.S.size(); ++k)
    worst = std::max(worst, (sd.S[k] - sl.S[k].cast<cplx<double>>()).cwiseAbs().maxCoeff());
  EXPECT_LT(worst, 1e-10);
}
