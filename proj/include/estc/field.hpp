#pragma once

#include "gamma.hpp"
#include "lattice.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace estc {

template <class Real> using Vec3c = std::array<cplx<Real>, 3>;

struct field_constraint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct resonant_node : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Six plane waves; wave j (1..6) has complex amplitude A_j with components k = 1..3.
template <class Real> struct FieldSpec {
  std::array<Vec3c<Real>, 6> A{};

  // A_jk += a + i b, with 1-based j and k.
  FieldSpec& add(int j, int k, Real a, Real b) {
    if (j < 1 || j > 6 || k < 1 || k > 3) throw field_constraint("field component index out of range");
    A[j - 1][k - 1] += cplx<Real>(a, b);
    return *this;
  }

  // Propagation axis of wave j: e_j for j <= 3, -e_{j-3} otherwise.
  static int axis(int j) { return j <= 3 ? j : j - 3; }

  void validate() const {
    for (int j = 1; j <= 6; ++j)
      if (A[j - 1][axis(j) - 1] != cplx<Real>(0, 0))
        throw field_constraint("longitudinal component of wave " + std::to_string(j) + " must vanish");
  }

  Real intensity() const {
    Real s = 0;
    for (const auto& a : A)
      for (const auto& c : a) s += std::norm(c);
    return 2 * s;
  }

  bool wave_active(int j) const {
    for (const auto& c : A[j - 1])
      if (c != cplx<Real>(0, 0)) return true;
    return false;
  }

  template <class To> FieldSpec<To> cast() const {
    FieldSpec<To> f;
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 3; ++k) f.A[j][k] = cplx<To>(To(A[j][k].real()), To(A[j][k].imag()));
    return f;
  }
};

// Delta_j = (e_j, 1) for j = 1..3 and (-e_{j-3}, 1) for j = 4..6.
inline MultiIndex wave_delta(int j) {
  MultiIndex d{0, 0, 0, 1};
  d[FieldSpec<double>::axis(j) - 1] = j <= 3 ? 1 : -1;
  return d;
}

template <class Real> struct WaveParams {
  std::array<Real, 3> q{};
  Real xi = 0;
  Real Omega = 0;

  Real q2() const { return q[0] * q[0] + q[1] * q[1] + q[2] * q[2]; }
  // sqrt(1+q^2) - 1 without cancellation
  Real root_minus_one() const {
    using std::sqrt;
    return q2() / (1 + sqrt(1 + q2()));
  }
  Real q4() const { return 1 + root_minus_one() + xi; }
  Real w(const MultiIndex& n, int k) const { return q[k - 1] + n[k - 1] * Omega; }
  Real w4(const MultiIndex& n) const { return q4() + n[3] * Omega; }
  Real one_minus_w4(const MultiIndex& n) const { return -(xi + root_minus_one() + n[3] * Omega); }
  Real one_plus_w4(const MultiIndex& n) const { return 2 + xi + root_minus_one() + n[3] * Omega; }
};

// Dimensionless vector potential A'(X) = sum_j A_j exp(i K_j.x) + c.c.
template <class Real> std::array<Real, 3> vector_potential(const FieldSpec<Real>& f, const std::array<Real, 4>& X) {
  using std::cos;
  using std::sin;
  std::array<Real, 3> out{};
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  for (int j = 1; j <= 6; ++j) {
    if (!f.wave_active(j)) continue;
    const int ax = FieldSpec<Real>::axis(j) - 1;
    const Real k = two_pi * ((j <= 3 ? X[ax] : -X[ax]) - X[3]);
    const cplx<Real> e(cos(k), sin(k));
    for (int c = 0; c < 3; ++c) out[c] += 2 * (f.A[j - 1][c] * e).real();
  }
  return out;
}

// Coupling block -i sum_k (A)_k gamma_k for one amplitude.
template <class Real> Mat4<Real> coupling_block(const Vec3c<Real>& a) {
  Mat4<Real> m = Mat4<Real>::Zero();
  const cplx<Real> mi(0, -1);
  for (int k = 1; k <= 3; ++k) m += (mi * a[k - 1]) * gamma_k<Real>(k);
  return m;
}

// Nonzero shifts with field coupling, in S13 order, with their V(s).
template <class Real> std::vector<std::pair<MultiIndex, Mat4<Real>>> shift_blocks(const FieldSpec<Real>& f) {
  std::vector<std::pair<MultiIndex, Mat4<Real>>> out;
  for (const auto& s : s13()) {
    if (s == kOrigin) continue;
    for (int j = 1; j <= 6; ++j) {
      if (!f.wave_active(j)) continue;
      const MultiIndex d = wave_delta(j);
      if (s == -d) {
        out.emplace_back(s, coupling_block<Real>(f.A[j - 1]));
      } else if (s == d) {
        Vec3c<Real> c;
        for (int k = 0; k < 3; ++k) c[k] = std::conj(f.A[j - 1][k]);
        out.emplace_back(s, coupling_block<Real>(c));
      }
    }
  }
  return out;
}

template <class Real> std::vector<MultiIndex> active_shifts(const FieldSpec<Real>& f) {
  std::vector<MultiIndex> out{kOrigin};
  for (const auto& sb : shift_blocks(f)) out.push_back(sb.first);
  return out;
}

template <class Real> Mat4<Real> build_v0(const MultiIndex& n, const WaveParams<Real>& wp) {
  const cplx<Real> i(0, 1);
  Mat4<Real> m = Mat4<Real>::Zero();
  for (int k = 1; k <= 3; ++k) m += (i * wp.w(n, k)) * gamma_k<Real>(k);
  // Gamma_0 - w4 gamma_4 on the diagonal, formed from xi directly
  m(0, 0) = m(1, 1) = wp.one_minus_w4(n);
  m(2, 2) = m(3, 3) = wp.one_plus_w4(n);
  return m;
}

template <class Real>
Mat4<Real> build_v(const MultiIndex& n, const MultiIndex& s, const FieldSpec<Real>& f, const WaveParams<Real>& wp) {
  if (shift_index(s) < 0) throw std::invalid_argument("build_v: shift outside S13");
  if (s == kOrigin) return build_v0(n, wp);
  for (int j = 1; j <= 6; ++j) {
    const MultiIndex d = wave_delta(j);
    if (s == -d) return coupling_block<Real>(f.A[j - 1]);
    if (s == d) {
      Vec3c<Real> c;
      for (int k = 0; k < 3; ++k) c[k] = std::conj(f.A[j - 1][k]);
      return coupling_block<Real>(c);
    }
  }
  return Mat4<Real>::Zero();
}

// 1 + w1^2 + w2^2 + w3^2 - w4^2
template <class Real> Real free_dispersion(const MultiIndex& n, const WaveParams<Real>& wp) {
  Real s = wp.one_minus_w4(n) * wp.one_plus_w4(n);
  for (int k = 1; k <= 3; ++k) s += wp.w(n, k) * wp.w(n, k);
  return s;
}

template <class Real> DSet<Real> build_L_dset(const MultiIndex& n, const FieldSpec<Real>& f, const WaveParams<Real>& wp) {
  const Real w1 = wp.w(n, 1), w2 = wp.w(n, 2), w3 = wp.w(n, 3), w4 = wp.w4(n);
  DSet<Real> d{};
  d[0] = 1 + f.intensity() + w1 * w1 + w2 * w2 + w3 * w3 + w4 * w4;
  d[4] = -2 * w4;
  d[9] = 2 * w3 * w4;
  d[10] = 2 * w1 * w4;
  d[11] = 2 * w2 * w4;
  return d;
}

template <class Real> Mat4<Real> build_L(const MultiIndex& n, const FieldSpec<Real>& f, const WaveParams<Real>& wp) {
  return matrix_of(build_L_dset(n, f, wp));
}

// Scalar |L(n)|.
template <class Real> Real L_det(const MultiIndex& n, const FieldSpec<Real>& f, const WaveParams<Real>& wp) {
  const Real ia = f.intensity();
  Real w2 = wp.w4(n) * wp.w4(n);
  for (int k = 1; k <= 3; ++k) w2 += wp.w(n, k) * wp.w(n, k);
  const Real fd = free_dispersion(n, wp);
  return ia * ia + 2 * ia * (1 + w2) + fd * fd;
}

template <class Real> DSet<Real> build_a_dset(const MultiIndex& n, const FieldSpec<Real>& f, const WaveParams<Real>& wp) {
  const Real det = L_det(n, f, wp);
  if (det <= Real(0)) throw resonant_node("build_a: free-field singularity at a resonant node");
  DSet<Real> d = build_L_dset(n, f, wp);
  for (int nu = 1; nu < 16; ++nu) d[nu] = -d[nu];
  for (auto& c : d) c /= det;
  return d;
}

template <class Real> Mat4<Real> build_a(const MultiIndex& n, const FieldSpec<Real>& f, const WaveParams<Real>& wp) {
  return matrix_of(build_a_dset(n, f, wp));
}

// N(m,n) = sum over shared columns of V(m,s) V(n,t)^dagger.
template <class Real>
Mat4<Real> build_N(const MultiIndex& m, const MultiIndex& n, const FieldSpec<Real>& f, const WaveParams<Real>& wp) {
  Mat4<Real> out = Mat4<Real>::Zero();
  if (g4d(n - m) > 2) return out;
  const auto shifts = active_shifts(f);
  for (const auto& s : shifts)
    for (const auto& t : shifts)
      if (m + s == n + t) out += build_v(m, s, f, wp) * build_v(n, t, f, wp).adjoint();
  return out;
}

}  // namespace estc
