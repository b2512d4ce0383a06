#pragma once

#include "block_operator.hpp"
#include "field.hpp"
#include "lattice.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace estc {

struct dependent_equation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct consistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct size_guard : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline std::string to_string(const MultiIndex& n) {
  return "(" + std::to_string(n[0]) + "," + std::to_string(n[1]) + "," + std::to_string(n[2]) + "," +
         std::to_string(n[3]) + ")";
}

// Equations live on the model nodes; unknowns on the nodes plus the halo
// reached by one active shift.
template <class Real> struct LinearSystem {
  FieldSpec<Real> field;
  WaveParams<Real> wp;
  FiniteModel equations;
  FiniteModel variables;
  std::vector<std::pair<MultiIndex, Mat4<Real>>> couplings;  // V(s) for s != 0
};

template <class Real>
LinearSystem<Real> build_system(const FieldSpec<Real>& field, const WaveParams<Real>& wp, int g_max) {
  LinearSystem<Real> sys;
  sys.field = field;
  sys.wp = wp;
  sys.couplings = shift_blocks(field);
  sys.equations = build_model(g_max, active_shifts(field));
  std::vector<MultiIndex> vars = sys.equations.nodes;
  for (const auto& n : sys.equations.nodes)
    for (const auto& c : sys.couplings) vars.push_back(n + c.first);
  sys.variables = make_model(g_max, std::move(vars));
  return sys;
}

template <class Real> struct ProjectorAtom {
  MultiIndex node{};
  std::vector<int> cols;        // variable ordinals of the stencil
  std::vector<Mat4<Real>> F;    // V(n,s) per column
  Mat4<Real> a;                 // inverse Gram matrix

  // P(n) = F^dagger a F over the given number of slots.
  BlockOperator<Real> projector(int slots) const {
    BlockOperator<Real> p(slots);
    for (std::size_t x = 0; x < cols.size(); ++x)
      for (std::size_t y = 0; y < cols.size(); ++y)
        if (cols[x] <= cols[y]) p.add_block(cols[x], cols[y], F[x].adjoint() * a * F[y]);
    return p;
  }
};

template <class Real> ProjectorAtom<Real> make_atom(const LinearSystem<Real>& sys, const MultiIndex& n) {
  ProjectorAtom<Real> at;
  at.node = n;
  auto push = [&](const MultiIndex& m, const Mat4<Real>& v) {
    const int c = sys.variables.index_of(m);
    if (c < 0) throw std::invalid_argument("atom: stencil leaves the variable set at " + to_string(m));
    at.cols.push_back(c);
    at.F.push_back(v);
  };
  push(n, build_v0(n, sys.wp));
  for (const auto& c : sys.couplings) push(n + c.first, c.second);
  at.a = build_a(n, sys.field, sys.wp);
  return at;
}

// alpha <- alpha + Q Q^dagger with Q an orthonormal basis of the rows of
// G = F - F alpha. Equivalent to alpha + (beta - alpha) gamma (beta - alpha).
template <class Real> void merge_into(BlockOperator<Real>& alpha, const ProjectorAtom<Real>& at, Real rank_tol = Real(1e-12)) {
  const int n = alpha.slots();
  const int dim = 4 * n;
  std::vector<cplx<Real>> g(4 * static_cast<std::size_t>(dim), cplx<Real>(0, 0));
  auto G = [&](int i, int col) -> cplx<Real>& { return g[static_cast<std::size_t>(i) * dim + col]; };

  Real fnorm = 0;
  for (std::size_t t = 0; t < at.cols.size(); ++t) {
    const int c = at.cols[t];
    const Mat4<Real>& ft = at.F[t];
    fnorm += ft.squaredNorm();
    for (int i = 0; i < 4; ++i)
      for (int b = 0; b < 4; ++b) G(i, 4 * c + b) += ft(i, b);
    for (int l = 0; l < n; ++l) {
      const Mat4<Real> blk = alpha.block(c, l);
      if (blk.isZero(0)) continue;
      const Mat4<Real> prod = ft * blk;
      for (int i = 0; i < 4; ++i)
        for (int b = 0; b < 4; ++b) G(i, 4 * l + b) -= prod(i, b);
    }
  }
  fnorm = std::sqrt(fnorm / 4);

  std::vector<int> support;
  for (int l = 0; l < n; ++l) {
    bool nz = false;
    for (int i = 0; i < 4 && !nz; ++i)
      for (int b = 0; b < 4 && !nz; ++b) nz = G(i, 4 * l + b) != cplx<Real>(0, 0);
    if (nz) support.push_back(l);
  }
  const int ts = static_cast<int>(support.size());
  const int len = 4 * ts;

  // Columns u_i = conj(row i of G) on the support, orthonormalised twice.
  std::vector<Real> qr(4 * static_cast<std::size_t>(len)), qi(4 * static_cast<std::size_t>(len));
  for (int i = 0; i < 4; ++i)
    for (int t = 0; t < ts; ++t)
      for (int b = 0; b < 4; ++b) {
        const cplx<Real> v = std::conj(G(i, 4 * support[t] + b));
        qr[static_cast<std::size_t>(i) * len + 4 * t + b] = v.real();
        qi[static_cast<std::size_t>(i) * len + 4 * t + b] = v.imag();
      }
  for (int i = 0; i < 4; ++i) {
    Real* vr = &qr[static_cast<std::size_t>(i) * len];
    Real* vi = &qi[static_cast<std::size_t>(i) * len];
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) {
        const Real* ur = &qr[static_cast<std::size_t>(j) * len];
        const Real* ui = &qi[static_cast<std::size_t>(j) * len];
        Real pr = 0, pi = 0;  // u_j^dagger v
        for (int x = 0; x < len; ++x) {
          pr += ur[x] * vr[x] + ui[x] * vi[x];
          pi += ur[x] * vi[x] - ui[x] * vr[x];
        }
        for (int x = 0; x < len; ++x) {
          vr[x] -= pr * ur[x] - pi * ui[x];
          vi[x] -= pr * ui[x] + pi * ur[x];
        }
      }
    Real nn = 0;
    for (int x = 0; x < len; ++x) nn += vr[x] * vr[x] + vi[x] * vi[x];
    nn = std::sqrt(nn);
    if (!(nn > rank_tol * fnorm))
      throw dependent_equation("merge: dependent equations at node " + to_string(at.node));
    for (int x = 0; x < len; ++x) {
      vr[x] /= nn;
      vi[x] /= nn;
    }
  }

  // Rank-4 update of the packed upper triangle on support x support.
  for (int tk = 0; tk < ts; ++tk) {
    const int k = support[tk];
    for (int tl = tk; tl < ts; ++tl) {
      const int l = support[tl];
      Real* dst = reinterpret_cast<Real*>(alpha.raw(k, l));
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          Real re = 0, im = 0;
          for (int i = 0; i < 4; ++i) {
            const std::size_t xa = static_cast<std::size_t>(i) * len + 4 * tk + a;
            const std::size_t xb = static_cast<std::size_t>(i) * len + 4 * tl + b;
            re += qr[xa] * qr[xb] + qi[xa] * qi[xb];
            im += qi[xa] * qr[xb] - qr[xa] * qi[xb];
          }
          dst[2 * (4 * a + b)] += re;
          dst[2 * (4 * a + b) + 1] += im;
        }
    }
  }
}

template <class Real>
BlockOperator<Real> merge(const BlockOperator<Real>& alpha, const ProjectorAtom<Real>& at, Real rank_tol = Real(1e-12)) {
  BlockOperator<Real> out = alpha;
  merge_into(out, at, rank_tol);
  return out;
}

template <class Real> struct Fundamental {
  LinearSystem<Real> system;
  BlockOperator<Real> P;          // P' over the variable slots
  std::vector<Mat4<Real>> S;      // S(n) by variable ordinal
  Real interior_residual = 0;     // max |V_S(n)| over the equation nodes
};

struct BuildOptions {
  double rank_tol = 1e-12;
  double verify_tol = 1e-9;
  std::vector<int> order;  // merge order over equation ordinals; empty = model order
};

// Residual block V_S(n) = sum_s V(n,s) S(n+s) of the solution column.
template <class Real>
Mat4<Real> equation_residual(const LinearSystem<Real>& sys, const std::vector<Mat4<Real>>& S, const MultiIndex& n) {
  Mat4<Real> r = Mat4<Real>::Zero();
  const int c0 = sys.variables.index_of(n);
  if (c0 >= 0) r += build_v0(n, sys.wp) * S[c0];
  for (const auto& c : sys.couplings) {
    const int k = sys.variables.index_of(n + c.first);
    if (k >= 0) r += c.second * S[k];
  }
  return r;
}

template <class Real> Fundamental<Real> build_fundamental(LinearSystem<Real> sys, const BuildOptions& opt = {}) {
  Fundamental<Real> out;
  const int nvar = sys.variables.size();
  out.P = BlockOperator<Real>(nvar);
  std::vector<int> order = opt.order;
  if (order.empty()) {
    order.resize(sys.equations.size());
    std::iota(order.begin(), order.end(), 0);
  }
  for (int e : order) merge_into(out.P, make_atom(sys, sys.equations.nodes.at(e)), Real(opt.rank_tol));

  const int o = sys.variables.index_of(kOrigin);
  out.S.resize(nvar);
  for (int k = 0; k < nvar; ++k) {
    out.S[k] = -out.P.block(k, o);
    if (k == o) out.S[k] += Mat4<Real>::Identity();
  }
  Real worst = 0;
  for (const auto& n : sys.equations.nodes) {
    const Mat4<Real> r = equation_residual(sys, out.S, n);
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  out.interior_residual = worst;
  out.system = std::move(sys);
  if (!(worst <= Real(opt.verify_tol)))
    throw consistency_error("fundamental solution fails its own equations: max residual " +
                            std::to_string(static_cast<double>(worst)));
  return out;
}

// Dense stacked coefficient matrix: one 4-row band per equation node.
template <class Real> MatX<Real> stacked_covectors(const LinearSystem<Real>& sys) {
  const int m = sys.equations.size(), n = sys.variables.size();
  MatX<Real> c = MatX<Real>::Zero(4 * m, 4 * n);
  for (int e = 0; e < m; ++e) {
    const auto at = make_atom(sys, sys.equations.nodes[e]);
    for (std::size_t t = 0; t < at.cols.size(); ++t) c.template block<4, 4>(4 * e, 4 * at.cols[t]) += at.F[t];
  }
  return c;
}

template <class Real> struct OracleResult {
  BlockOperator<Real> P;  // projector onto the row space
  int rank = 0;
};

// Test oracle: Householder QR of the stacked system, P' = Q Q^dagger.
template <class Real> OracleResult<Real> nullspace_oracle(const LinearSystem<Real>& sys, int guard = 4096) {
  if (4 * sys.equations.size() > guard) throw size_guard("nullspace_oracle: model too large for dense decomposition");
  const MatX<Real> ct = stacked_covectors(sys).adjoint();
  Eigen::ColPivHouseholderQR<MatX<Real>> qr(ct);
  qr.setThreshold(Real(1e-12));
  OracleResult<Real> out;
  out.rank = static_cast<int>(qr.rank());
  const MatX<Real> q = MatX<Real>(qr.householderQ()).leftCols(out.rank);
  out.P = BlockOperator<Real>::from_dense(q * q.adjoint());
  return out;
}

}  // namespace estc
