#include "common.hpp"

#include <gtest/gtest.h>

using namespace estc;
using estc::test::LD;

namespace {

Mat4<double> dense_random(std::mt19937_64& rng) { return test::random_mat<double>(rng); }

double diff(const Mat4<double>& a, const Mat4<double>& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Gamma, BasisIsHermitianAndUnitary) {
  for (int nu = 0; nu < 16; ++nu) {
    const auto g = gamma_matrix(nu);
    EXPECT_EQ(diff(g, g.adjoint()), 0.0) << nu;
    EXPECT_EQ(diff(g * g, Mat4<double>::Identity()), 0.0) << nu;
  }
}

TEST(Gamma, TraceOrthogonality) {
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b) {
      const cplx<double> t = (gamma_matrix(a) * gamma_matrix(b)).trace();
      EXPECT_EQ(t, cplx<double>(a == b ? 4 : 0, 0)) << a << "," << b;
    }
}

TEST(Gamma, CliffordRelations) {
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      const Mat4<double> ac = gamma_k(m) * gamma_k(n) + gamma_k(n) * gamma_k(m);
      EXPECT_EQ(diff(ac, (m == n ? 2.0 : 0.0) * Mat4<double>::Identity()), 0.0);
      const Mat4<double> aa = alpha_k(m) * alpha_k(n) + alpha_k(n) * alpha_k(m);
      EXPECT_EQ(diff(aa, (m == n ? 2.0 : 0.0) * Mat4<double>::Identity()), 0.0);
    }
}

TEST(Gamma, SpinAlgebra) {
  const cplx<double> i(0, 1);
  EXPECT_EQ(diff(sigma_k(1) * sigma_k(2), i * sigma_k(3)), 0.0);
  EXPECT_EQ(diff(sigma_k(2) * sigma_k(3), i * sigma_k(1)), 0.0);
  EXPECT_EQ(diff(sigma_k(3) * sigma_k(1), i * sigma_k(2)), 0.0);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(diff(sigma_k(k) * alpha_k(4), alpha_k(4) * sigma_k(k)), 0.0);
    // alpha_k = i gamma_4 gamma_k in this basis
    EXPECT_EQ(diff(alpha_k(k), i * gamma_k(4) * gamma_k(k)), 0.0) << k;
  }
}

TEST(Gamma, ProductTableMatchesMatrices) {
  for (int l = 0; l < 16; ++l)
    for (int m = 0; m < 16; ++m) {
      const auto [nu, c] = gamma_product(l, m);
      EXPECT_EQ(diff(gamma_matrix(l) * gamma_matrix(m), c * gamma_matrix(nu)), 0.0) << l << "," << m;
    }
}

TEST(DSet, RoundTrip) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto m = dense_random(rng);
    EXPECT_LT(diff(matrix_of(dset_of(m)), m), 1e-14);
  }
}

TEST(DSet, MultiplicationAgainstDenseProduct) {
  std::mt19937_64 rng(11);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = dense_random(rng), b = dense_random(rng);
    const auto p = matrix_of(dset_mul(dset_of(a), dset_of(b)));
    worst = std::max(worst, diff(p, a * b) / std::max(1.0, (a * b).cwiseAbs().maxCoeff()));
  }
  EXPECT_LT(worst, 1e-13);
}

TEST(DSet, DaggerTraceAndReality) {
  std::mt19937_64 rng(3);
  const auto a = dense_random(rng);
  EXPECT_LT(diff(matrix_of(dset_dagger(dset_of(a))), a.adjoint()), 1e-14);
  EXPECT_LT(std::abs(dset_trace(dset_of(a)) - a.trace()), 1e-14);
  const Mat4<double> h = a + a.adjoint();
  EXPECT_TRUE(dset_is_real(dset_of(h), 1e-14));
  EXPECT_FALSE(dset_is_real(dset_of(a), 1e-14));
}

TEST(DSet, InverseAndSingular) {
  std::mt19937_64 rng(5);
  const auto a = dense_random(rng);
  const auto inv = matrix_of(dset_inverse(dset_of(a)));
  EXPECT_LT(diff(inv * a, Mat4<double>::Identity()), 1e-12);
  // Gamma_0 + Gamma_4 has rank two
  DSet<double> s = dset_basis<double>(0);
  s[4] = 1;
  EXPECT_THROW(dset_inverse(s), singular_matrix);
  EXPECT_THROW(gamma_matrix(16), std::out_of_range);
}

TEST(DSet, ExtendedPrecision) {
  std::mt19937_64 rng(9);
  const auto a = test::random_mat<LD>(rng), b = test::random_mat<LD>(rng);
  const Mat4<LD> p = matrix_of(dset_mul(dset_of(a), dset_of(b)));
  EXPECT_LT(static_cast<double>((p - a * b).cwiseAbs().maxCoeff()), 1e-16);
}
