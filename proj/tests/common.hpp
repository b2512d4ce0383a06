#pragma once

#include <estc/estc.hpp>

#include <cmath>
#include <random>

namespace estc::test {

using LD = long double;

// Two counterpropagating circular waves along e1, amplitude A_m = sqrt(I_A)/2.
template <class Real> FieldSpec<Real> counter_circular(Real intensity, bool same_handed = false) {
  const Real a = std::sqrt(intensity) / 2 / std::sqrt(Real(2));
  FieldSpec<Real> f;
  f.add(1, 2, a, 0).add(1, 3, 0, a).add(4, 2, a, 0).add(4, 3, 0, same_handed ? -a : a);
  return f;
}

// Both waves linearly polarized along e2.
template <class Real> FieldSpec<Real> counter_linear(Real intensity) {
  const Real a = std::sqrt(intensity) / 2;
  FieldSpec<Real> f;
  f.add(1, 2, a, 0).add(4, 2, a, 0);
  return f;
}

template <class Real> Problem<Real> make_problem(const FieldSpec<Real>& f, Real Omega, int g_max) {
  Problem<Real> pb;
  pb.field = f;
  pb.Omega = Omega;
  pb.g_max = g_max;
  return pb;
}

template <class Real> Mat4<Real> random_mat(std::mt19937_64& rng, Real scale = 1) {
  std::normal_distribution<double> nd;
  Mat4<Real> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = cplx<Real>(Real(nd(rng)), Real(nd(rng))) * scale;
  return m;
}

template <class Real> Real max_abs(const MatX<Real>& m) { return m.size() ? m.cwiseAbs().maxCoeff() : Real(0); }

// Random transverse field on a random subset of waves.
template <class Real> FieldSpec<Real> random_field(std::mt19937_64& rng, int waves) {
  std::uniform_real_distribution<double> amp(-0.03, 0.03);
  std::vector<int> js{1, 2, 3, 4, 5, 6};
  std::shuffle(js.begin(), js.end(), rng);
  FieldSpec<Real> f;
  for (int w = 0; w < waves; ++w) {
    const int j = js[w];
    for (int k = 1; k <= 3; ++k)
      if (k != FieldSpec<Real>::axis(j)) f.add(j, k, Real(amp(rng)), Real(amp(rng)));
  }
  return f;
}

}  // namespace estc::test
