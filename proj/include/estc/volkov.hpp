#pragma once

#include "field.hpp"
#include "gamma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace estc {

struct singular_volkov : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Single wave A_3 = a31 e1 + i b32 e2 propagating along e3.
template <class Real> struct VolkovParams {
  Real a31 = 0, b32 = 0;
  std::array<Real, 3> q{};
  Real q4 = 1;
  Real Omega = 0.1;

  Real intensity() const { return 2 * (a31 * a31 + b32 * b32); }
  Real J4() const {
    if (q4 == q[2]) throw singular_volkov("volkov: q4 == q3 makes J4 singular");
    return 1 / (2 * (q4 - q[2]));
  }
  FieldSpec<Real> field() const {
    FieldSpec<Real> f;
    f.add(3, 1, a31, 0).add(3, 2, 0, b32);
    return f;
  }
};

// zeta is dimensionless: k0 zeta = 2 pi zeta.
template <class Real> Mat4<Real> volkov_J(Real zeta, const VolkovParams<Real>& p) {
  const Real k = 2 * std::numbers::pi_v<Real> * zeta;
  const Real j4 = p.J4();
  const Real j10 = j4 * (p.q[0] - 2 * p.a31 * std::cos(k));
  const Real j11 = j4 * (p.q[1] + 2 * p.b32 * std::sin(k));
  const cplx<Real> i(0, 1);
  DSet<Real> d{};
  d[0] = Real(0.5);
  d[2] = -i * j11;
  d[3] = i * j10;
  d[4] = j4;
  d[9] = Real(-0.5);
  d[10] = j10;
  d[11] = j11;
  d[13] = -i * j4;
  return matrix_of(d);
}

// Q' = Q - (1 + Q^2 + I_A) / (2 Q.N3) N3 with Q = (q, i q4), N3 = (e3, i).
template <class Real> struct QPrime {
  std::array<Real, 3> q;
  Real q4;
};

template <class Real> QPrime<Real> volkov_qprime(const VolkovParams<Real>& p) {
  const Real Q2 = p.q[0] * p.q[0] + p.q[1] * p.q[1] + p.q[2] * p.q[2] - p.q4 * p.q4;
  const Real QN = p.q[2] - p.q4;
  if (QN == Real(0)) throw singular_volkov("volkov: Q.N3 vanishes");
  const Real c = (1 + Q2 + p.intensity()) / (2 * QN);
  return QPrime<Real>{{p.q[0], p.q[1], p.q[2] - c}, p.q4 - c};
}

// 1 + Q'^2 + I_A, zero for every Q.
template <class Real> Real volkov_dispersion_residual(const VolkovParams<Real>& p) {
  const auto qp = volkov_qprime(p);
  return 1 + qp.q[0] * qp.q[0] + qp.q[1] * qp.q[1] + qp.q[2] * qp.q[2] - qp.q4 * qp.q4 + p.intensity();
}

// Linear and periodic parts of the phase at dimensionless X.
template <class Real> std::pair<Real, Real> volkov_phase_parts(const std::array<Real, 4>& X, const VolkovParams<Real>& p) {
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  const auto qp = volkov_qprime(p);
  const Real lin = two_pi / p.Omega * (qp.q[0] * X[0] + qp.q[1] * X[1] + qp.q[2] * X[2] - qp.q4 * X[3]);
  const Real k = two_pi * (X[2] - X[3]);
  // the constant 4 b32 q2 of (1 - cos k) is a global phase and is dropped so the part has zero mean
  const Real per = p.J4() / p.Omega *
                   (-4 * p.b32 * p.q[1] * std::cos(k) - 4 * p.a31 * p.q[0] * std::sin(k) +
                    (p.a31 * p.a31 - p.b32 * p.b32) * std::sin(2 * k));
  return {lin, per};
}

template <class Real> Mat4<Real> volkov_Ev(const std::array<Real, 4>& X, const VolkovParams<Real>& p) {
  const auto ph = volkov_phase_parts(X, p);
  const Real phi = ph.first + ph.second;
  return cplx<Real>(std::cos(phi), std::sin(phi)) * volkov_J(X[2] - X[3], p);
}

template <class Real> Real xi_volkov(const std::array<Real, 3>& q, Real intensity) {
  const Real q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
  // sqrt(1+q2+I) - sqrt(1+q2) without cancellation
  return intensity / (std::sqrt(1 + q2 + intensity) + std::sqrt(1 + q2));
}

}  // namespace estc
