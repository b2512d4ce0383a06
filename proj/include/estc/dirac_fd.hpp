#pragma once

#include "field.hpp"
#include "gamma.hpp"

#include <array>
#include <numbers>

namespace estc {

// Finite-difference application of the dimensionless Dirac operator
//   D = sum_a alpha_a (-i (Omega/2pi) d/dX_a - A'_a) - i (Omega/2pi) d/dX_4 + alpha_4
// to a matrix-valued function of X. Used as an independent check of the
// Fourier-side residual and of closed-form solutions.
template <class Real, class F>
Mat4<Real> apply_dirac_fd(F&& f, const std::array<Real, 4>& X, const FieldSpec<Real>& field, Real Omega, Real h) {
  static constexpr double w[] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
  auto der = [&](int axis) {
    Mat4<Real> d = Mat4<Real>::Zero();
    for (int j = 0; j < 7; ++j) {
      if (j == 3) continue;
      std::array<Real, 4> Y = X;
      Y[axis] += Real(j - 3) * h;
      d += Real(w[j]) * f(Y);
    }
    return Mat4<Real>(d / h);
  };
  const cplx<Real> mi(0, -Omega / (2 * std::numbers::pi_v<Real>));
  const auto A = vector_potential(field, X);
  const Mat4<Real> F0 = f(X);
  Mat4<Real> r = alpha_k<Real>(4) * F0 + mi * der(3);
  for (int a = 1; a <= 3; ++a) r += alpha_k<Real>(a) * (mi * der(a - 1) - A[a - 1] * F0);
  return r;
}

// Fourth-order central difference of f along one axis.
template <class Real, class F> auto central_diff4(F&& f, std::array<Real, 4> X, int axis, Real h) {
  auto at = [&](Real s) {
    std::array<Real, 4> Y = X;
    Y[axis] += s * h;
    return f(Y);
  };
  return ((at(-2) - at(2)) + Real(8) * (at(1) - at(-1))).eval() / (Real(12) * h);
}

}  // namespace estc
