#pragma once

#include "projector.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace estc {

struct zero_norm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solution domain S_d with its blocks S(n) and the wave parameters.
template <class Real> struct SolutionFamily {
  FieldSpec<Real> field;
  WaveParams<Real> wp;
  std::vector<MultiIndex> nodes;
  std::vector<Mat4<Real>> S;
  std::map<MultiIndex, int> index;

  int find(const MultiIndex& n) const {
    auto it = index.find(n);
    return it == index.end() ? -1 : it->second;
  }
  // a(n) = S(n) a0 for every node of the domain
  std::vector<Vec4<Real>> amplitudes(const Vec4<Real>& a0) const {
    std::vector<Vec4<Real>> out;
    out.reserve(S.size());
    for (const auto& s : S) out.push_back(s * a0);
    return out;
  }
};

template <class Real>
SolutionFamily<Real> make_family(const FieldSpec<Real>& field, const WaveParams<Real>& wp,
                                 std::vector<MultiIndex> nodes, std::vector<Mat4<Real>> blocks) {
  if (nodes.size() != blocks.size()) throw std::invalid_argument("make_family: size mismatch");
  SolutionFamily<Real> f;
  f.field = field;
  f.wp = wp;
  f.nodes = std::move(nodes);
  f.S = std::move(blocks);
  for (std::size_t i = 0; i < f.nodes.size(); ++i) f.index.emplace(f.nodes[i], static_cast<int>(i));
  return f;
}

// Keep the blocks that are not identically zero.
template <class Real> SolutionFamily<Real> family_of(const Fundamental<Real>& fs) {
  std::vector<MultiIndex> nodes;
  std::vector<Mat4<Real>> blocks;
  for (int k = 0; k < fs.system.variables.size(); ++k) {
    if (fs.S[k].isZero(0)) continue;
    nodes.push_back(fs.system.variables.nodes[k]);
    blocks.push_back(fs.S[k]);
  }
  return make_family(fs.system.field, fs.system.wp, std::move(nodes), std::move(blocks));
}

template <class Real> Real phase(const SolutionFamily<Real>& f, const MultiIndex& n, const std::array<Real, 4>& X) {
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  const Real om = f.wp.Omega;
  Real p = 0;
  for (int k = 0; k < 3; ++k) p += (n[k] + f.wp.q[k] / om) * X[k];
  p -= (n[3] + f.wp.q4() / om) * X[3];
  return two_pi * p;
}

template <class Real> Mat4<Real> evaluate_Ev(const SolutionFamily<Real>& f, const std::array<Real, 4>& X) {
  Mat4<Real> e = Mat4<Real>::Zero();
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const Real ph = phase(f, f.nodes[i], X);
    e += cplx<Real>(std::cos(ph), std::sin(ph)) * f.S[i];
  }
  return e;
}

// d E_v / d X_axis (axis 0..3) by Fourier weighting.
template <class Real>
Mat4<Real> evaluate_Ev_derivative(const SolutionFamily<Real>& f, const std::array<Real, 4>& X, int axis) {
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  Mat4<Real> e = Mat4<Real>::Zero();
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const MultiIndex& n = f.nodes[i];
    const Real k = axis < 3 ? n[axis] + f.wp.q[axis] / f.wp.Omega : -(n[3] + f.wp.q4() / f.wp.Omega);
    const Real ph = phase(f, n, X);
    e += cplx<Real>(0, two_pi * k) * cplx<Real>(std::cos(ph), std::sin(ph)) * f.S[i];
  }
  return e;
}

template <class Real> Mat4<Real> build_UE(const SolutionFamily<Real>& f) {
  Mat4<Real> u = Mat4<Real>::Zero();
  for (const auto& s : f.S) u += s.adjoint() * s;
  return (u + u.adjoint()) / Real(2);
}

// V_S(n) = sum_s V(n,s) S(n+s) at every node touching the domain.
template <class Real> std::vector<std::pair<MultiIndex, Mat4<Real>>> residual_blocks(const SolutionFamily<Real>& f) {
  const auto couplings = shift_blocks(f.field);
  std::map<MultiIndex, Mat4<Real>> acc;
  auto add = [&](const MultiIndex& n, const Mat4<Real>& m) {
    auto it = acc.find(n);
    if (it == acc.end())
      acc.emplace(n, m);
    else
      it->second += m;
  };
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const MultiIndex& m = f.nodes[i];
    add(m, build_v0(m, f.wp) * f.S[i]);
    for (const auto& c : couplings) add(m - c.first, c.second * f.S[i]);
  }
  std::vector<std::pair<MultiIndex, Mat4<Real>>> out(acc.begin(), acc.end());
  return out;
}

// U_D = sum_n R(n)^dagger R(n) with R(n) = gamma_4 V_S(n), the Fourier block of D Psi.
template <class Real> Mat4<Real> build_UD(const SolutionFamily<Real>& f) {
  const Mat4<Real> g4 = gamma_k<Real>(4);
  Mat4<Real> u = Mat4<Real>::Zero();
  for (const auto& rb : residual_blocks(f)) {
    const Mat4<Real> r = g4 * rb.second;
    u += r.adjoint() * r;
  }
  return (u + u.adjoint()) / Real(2);
}

// D E_v at X from the Fourier blocks.
template <class Real> Mat4<Real> apply_dirac_fourier(const SolutionFamily<Real>& f, const std::array<Real, 4>& X) {
  const Mat4<Real> g4 = gamma_k<Real>(4);
  Mat4<Real> e = Mat4<Real>::Zero();
  for (const auto& rb : residual_blocks(f)) {
    const Real ph = phase(f, rb.first, X);
    e += cplx<Real>(std::cos(ph), std::sin(ph)) * (g4 * rb.second);
  }
  return e;
}

template <class Real> Real quadratic(const Mat4<Real>& m, const Vec4<Real>& a) { return (a.adjoint() * m * a)(0, 0).real(); }

template <class Real> Real residual(const SolutionFamily<Real>& f, const Vec4<Real>& a0) {
  const Real ne = quadratic(build_UE(f), a0);
  if (!(ne > Real(0))) throw zero_norm("residual: zero-norm amplitude");
  const Real nd = std::max(Real(0), quadratic(build_UD(f), a0));
  return std::sqrt(nd / ne);
}

enum class Observable { Identity, H, P1, P2, P3, J1, J2, J3, Sigma1, Sigma2, Sigma3 };

// Kinetic momentum component k (1..3) applied blockwise: sum_m S(m)^dagger O (p_k S)(m).
// `weight` multiplies (p_k S)(m) from the left, so alpha_k weights give the H form.
template <class Real>
Mat4<Real> momentum_form(const SolutionFamily<Real>& f, int k, const Mat4<Real>& weight) {
  Mat4<Real> a = Mat4<Real>::Zero();
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const MultiIndex& m = f.nodes[i];
    Mat4<Real> ps = f.wp.w(m, k) * f.S[i];
    for (int j = 1; j <= 6; ++j) {
      if (!f.field.wave_active(j)) continue;
      const cplx<Real> ajk = f.field.A[j - 1][k - 1];
      if (ajk == cplx<Real>(0, 0)) continue;
      const MultiIndex d = wave_delta(j);
      const int lo = f.find(m - d), hi = f.find(m + d);
      if (lo >= 0) ps -= ajk * f.S[lo];
      if (hi >= 0) ps -= std::conj(ajk) * f.S[hi];
    }
    a += f.S[i].adjoint() * weight * ps;
  }
  return a;
}

template <class Real> Mat4<Real> observable_form(const SolutionFamily<Real>& f, Observable o) {
  auto diag = [&](const Mat4<Real>& op) {
    Mat4<Real> a = Mat4<Real>::Zero();
    for (const auto& s : f.S) a += s.adjoint() * op * s;
    return a;
  };
  Mat4<Real> a;
  switch (o) {
    case Observable::Identity: a = build_UE(f); break;
    case Observable::J1: a = diag(alpha_k<Real>(1)); break;
    case Observable::J2: a = diag(alpha_k<Real>(2)); break;
    case Observable::J3: a = diag(alpha_k<Real>(3)); break;
    case Observable::Sigma1: a = diag(sigma_k<Real>(1)); break;
    case Observable::Sigma2: a = diag(sigma_k<Real>(2)); break;
    case Observable::Sigma3: a = diag(sigma_k<Real>(3)); break;
    case Observable::P1: a = momentum_form<Real>(f, 1, Mat4<Real>::Identity()); break;
    case Observable::P2: a = momentum_form<Real>(f, 2, Mat4<Real>::Identity()); break;
    case Observable::P3: a = momentum_form<Real>(f, 3, Mat4<Real>::Identity()); break;
    case Observable::H:
      a = diag(alpha_k<Real>(4));
      for (int k = 1; k <= 3; ++k) a += momentum_form<Real>(f, k, alpha_k<Real>(k));
      break;
    default: throw std::invalid_argument("mean_value: unknown observable");
  }
  return (a + a.adjoint()) / Real(2);
}

template <class Real> Real mean_value(const SolutionFamily<Real>& f, Observable o, const Vec4<Real>& a0) {
  const Real ne = quadratic(build_UE(f), a0);
  if (!(ne > Real(0))) throw zero_norm("mean_value: zero-norm amplitude");
  return quadratic(observable_form(f, o), a0) / ne;
}

// sum_n b(n)^dagger a(n) over the common domain.
template <class Real>
cplx<Real> orthogonality(const SolutionFamily<Real>& fa, const Vec4<Real>& a0, const SolutionFamily<Real>& fb,
                         const Vec4<Real>& b0) {
  cplx<Real> s(0, 0);
  for (std::size_t i = 0; i < fa.nodes.size(); ++i) {
    const int j = fb.find(fa.nodes[i]);
    if (j < 0) continue;
    s += ((fb.S[j] * b0).adjoint() * (fa.S[i] * a0))(0, 0);
  }
  return s;
}

// Mean spin of a0a e^{i delta} cos(alpha) (line a) + a0b sin(alpha) (line b)
// with the slow relative phase phi_ab frozen over the unit cell.
template <class Real>
std::array<Real, 3> two_line_spin(const SolutionFamily<Real>& fa, const Vec4<Real>& a0a, const SolutionFamily<Real>& fb,
                                  const Vec4<Real>& a0b, Real alpha, Real delta, Real phi_ab) {
  std::map<MultiIndex, Vec4<Real>> psi;
  const cplx<Real> ca = std::polar(std::cos(alpha), delta + phi_ab);
  const Real cb = std::sin(alpha);
  for (std::size_t i = 0; i < fa.nodes.size(); ++i) psi[fa.nodes[i]] = ca * (fa.S[i] * a0a);
  for (std::size_t i = 0; i < fb.nodes.size(); ++i) {
    const Vec4<Real> v = cb * (fb.S[i] * a0b);
    auto it = psi.find(fb.nodes[i]);
    if (it == psi.end())
      psi.emplace(fb.nodes[i], v);
    else
      it->second += v;
  }
  Real norm = 0;
  std::array<Real, 3> s{};
  std::array<Mat4<Real>, 3> sig{sigma_k<Real>(1), sigma_k<Real>(2), sigma_k<Real>(3)};
  for (const auto& kv : psi) {
    norm += kv.second.squaredNorm();
    for (int k = 0; k < 3; ++k) s[k] += (kv.second.adjoint() * sig[k] * kv.second)(0, 0).real();
  }
  if (!(norm > Real(0))) throw zero_norm("two_line_spin: zero-norm state");
  for (auto& x : s) x /= norm;
  return s;
}

}  // namespace estc
