#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace estc {

template <class Real> using cplx = std::complex<Real>;
template <class Real> using Mat4 = Eigen::Matrix<cplx<Real>, 4, 4>;
template <class Real> using Vec4 = Eigen::Matrix<cplx<Real>, 4, 1>;

// 16 coefficients A_nu of A = sum_nu A_nu Gamma_nu.
template <class Real> using DSet = std::array<cplx<Real>, 16>;

namespace detail {

// Entries of Gamma_nu as (re, im) small integers, row major.
struct GammaEntry {
  signed char re, im;
};
using GammaTable = std::array<std::array<GammaEntry, 16>, 16>;

constexpr GammaTable gamma_table() {
  GammaTable t{};
  auto set = [&t](int nu, int r, int c, int re, int im) {
    t[nu][4 * r + c] = GammaEntry{static_cast<signed char>(re), static_cast<signed char>(im)};
  };
  for (int i = 0; i < 4; ++i) set(0, i, i, 1, 0);
  // Sigma_3
  set(1, 0, 0, 1, 0); set(1, 1, 1, -1, 0); set(1, 2, 2, 1, 0); set(1, 3, 3, -1, 0);
  // Sigma_1
  set(2, 0, 1, 1, 0); set(2, 1, 0, 1, 0); set(2, 2, 3, 1, 0); set(2, 3, 2, 1, 0);
  // Sigma_2
  set(3, 0, 1, 0, -1); set(3, 1, 0, 0, 1); set(3, 2, 3, 0, -1); set(3, 3, 2, 0, 1);
  // gamma_4 = alpha_4
  set(4, 0, 0, 1, 0); set(4, 1, 1, 1, 0); set(4, 2, 2, -1, 0); set(4, 3, 3, -1, 0);
  set(5, 0, 0, 1, 0); set(5, 1, 1, -1, 0); set(5, 2, 2, -1, 0); set(5, 3, 3, 1, 0);
  set(6, 0, 1, 1, 0); set(6, 1, 0, 1, 0); set(6, 2, 3, -1, 0); set(6, 3, 2, -1, 0);
  set(7, 0, 1, 0, -1); set(7, 1, 0, 0, 1); set(7, 2, 3, 0, 1); set(7, 3, 2, 0, -1);
  set(8, 0, 2, -1, 0); set(8, 1, 3, -1, 0); set(8, 2, 0, -1, 0); set(8, 3, 1, -1, 0);
  // alpha_3
  set(9, 0, 2, 1, 0); set(9, 1, 3, -1, 0); set(9, 2, 0, 1, 0); set(9, 3, 1, -1, 0);
  // alpha_1
  set(10, 0, 3, 1, 0); set(10, 1, 2, 1, 0); set(10, 2, 1, 1, 0); set(10, 3, 0, 1, 0);
  // alpha_2
  set(11, 0, 3, 0, -1); set(11, 1, 2, 0, 1); set(11, 2, 1, 0, -1); set(11, 3, 0, 0, 1);
  set(12, 0, 2, 0, 1); set(12, 1, 3, 0, 1); set(12, 2, 0, 0, -1); set(12, 3, 1, 0, -1);
  // gamma_3
  set(13, 0, 2, 0, -1); set(13, 1, 3, 0, 1); set(13, 2, 0, 0, 1); set(13, 3, 1, 0, -1);
  // gamma_1
  set(14, 0, 3, 0, -1); set(14, 1, 2, 0, -1); set(14, 2, 1, 0, 1); set(14, 3, 0, 0, 1);
  // gamma_2
  set(15, 0, 3, -1, 0); set(15, 1, 2, 1, 0); set(15, 2, 1, 1, 0); set(15, 3, 0, -1, 0);
  return t;
}

inline constexpr GammaTable kGamma = gamma_table();

// Gamma_l Gamma_m = c Gamma_nu with c in {1, i, -1, -i}; c stored as power of i.
struct Product {
  int nu;
  int ipow;
};
using ProductTable = std::array<std::array<Product, 16>, 16>;

constexpr int cmul_re(GammaEntry a, GammaEntry b) { return a.re * b.re - a.im * b.im; }
constexpr int cmul_im(GammaEntry a, GammaEntry b) { return a.re * b.im + a.im * b.re; }

// Brute force: multiply the integer matrices and match against every Gamma_nu.
constexpr ProductTable product_table() {
  ProductTable out{};
  for (int l = 0; l < 16; ++l) {
    for (int m = 0; m < 16; ++m) {
      int pre[16]{}, pim[16]{};
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          for (int k = 0; k < 4; ++k) {
            pre[4 * r + c] += cmul_re(kGamma[l][4 * r + k], kGamma[m][4 * k + c]);
            pim[4 * r + c] += cmul_im(kGamma[l][4 * r + k], kGamma[m][4 * k + c]);
          }
      out[l][m] = Product{-1, 0};
      for (int nu = 0; nu < 16 && out[l][m].nu < 0; ++nu) {
        for (int p = 0; p < 4; ++p) {
          // candidate c = i^p
          const int cre = (p == 0) ? 1 : (p == 2) ? -1 : 0;
          const int cim = (p == 1) ? 1 : (p == 3) ? -1 : 0;
          bool ok = true;
          for (int e = 0; e < 16 && ok; ++e) {
            const GammaEntry g = kGamma[nu][e];
            ok = pre[e] == cre * g.re - cim * g.im && pim[e] == cre * g.im + cim * g.re;
          }
          if (ok) {
            out[l][m] = Product{nu, p};
            break;
          }
        }
      }
    }
  }
  return out;
}

inline constexpr ProductTable kProduct = product_table();

template <class Real> cplx<Real> ipow(int p) {
  switch (p & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace detail

// Structure constants: Gamma_l Gamma_m = c * Gamma_nu.
template <class Real = double> std::pair<int, cplx<Real>> gamma_product(int l, int m) {
  const auto p = detail::kProduct.at(l).at(m);
  return {p.nu, detail::ipow<Real>(p.ipow)};
}

template <class Real = double> Mat4<Real> gamma_matrix(int nu) {
  if (nu < 0 || nu > 15) throw std::out_of_range("gamma index out of range");
  Mat4<Real> m;
  for (int e = 0; e < 16; ++e) {
    const auto g = detail::kGamma[nu][e];
    m(e / 4, e % 4) = cplx<Real>(g.re, g.im);
  }
  return m;
}

// Physics names. k runs 1..4 for gamma, 1..3 for alpha and sigma.
inline int gamma_index(int k) {
  static constexpr int idx[] = {14, 15, 13, 4};
  if (k < 1 || k > 4) throw std::out_of_range("gamma_k: k in 1..4");
  return idx[k - 1];
}
inline int alpha_index(int k) {
  static constexpr int idx[] = {10, 11, 9, 4};
  if (k < 1 || k > 4) throw std::out_of_range("alpha_k: k in 1..4");
  return idx[k - 1];
}
inline int sigma_index(int k) {
  static constexpr int idx[] = {2, 3, 1};
  if (k < 1 || k > 3) throw std::out_of_range("sigma_k: k in 1..3");
  return idx[k - 1];
}
template <class Real = double> Mat4<Real> gamma_k(int k) { return gamma_matrix<Real>(gamma_index(k)); }
template <class Real = double> Mat4<Real> alpha_k(int k) { return gamma_matrix<Real>(alpha_index(k)); }
template <class Real = double> Mat4<Real> sigma_k(int k) { return gamma_matrix<Real>(sigma_index(k)); }

template <class Real> DSet<Real> dset_of(const Mat4<Real>& a) {
  DSet<Real> d{};
  for (int nu = 0; nu < 16; ++nu) {
    // tr(A Gamma_nu) / 4, using the integer entries of Gamma_nu
    cplx<Real> s(0, 0);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        const auto g = detail::kGamma[nu][4 * c + r];
        if (g.re || g.im) s += a(r, c) * cplx<Real>(g.re, g.im);
      }
    d[nu] = s / Real(4);
  }
  return d;
}

template <class Real> Mat4<Real> matrix_of(const DSet<Real>& d) {
  Mat4<Real> m = Mat4<Real>::Zero();
  for (int nu = 0; nu < 16; ++nu) {
    if (d[nu] == cplx<Real>(0, 0)) continue;
    for (int e = 0; e < 16; ++e) {
      const auto g = detail::kGamma[nu][e];
      if (g.re || g.im) m(e / 4, e % 4) += d[nu] * cplx<Real>(g.re, g.im);
    }
  }
  return m;
}

template <class Real> DSet<Real> dset_basis(int nu, cplx<Real> c = cplx<Real>(1, 0)) {
  DSet<Real> d{};
  d.at(nu) = c;
  return d;
}

template <class Real> DSet<Real> dset_mul(const DSet<Real>& a, const DSet<Real>& b) {
  DSet<Real> out{};
  for (int l = 0; l < 16; ++l) {
    if (a[l] == cplx<Real>(0, 0)) continue;
    for (int m = 0; m < 16; ++m) {
      const auto p = detail::kProduct[l][m];
      out[p.nu] += a[l] * b[m] * detail::ipow<Real>(p.ipow);
    }
  }
  return out;
}

// All Gamma_nu are Hermitian, so the dagger conjugates the coefficients.
template <class Real> DSet<Real> dset_dagger(const DSet<Real>& a) {
  DSet<Real> out;
  for (int nu = 0; nu < 16; ++nu) out[nu] = std::conj(a[nu]);
  return out;
}

template <class Real> cplx<Real> dset_trace(const DSet<Real>& a) { return Real(4) * a[0]; }

template <class Real> bool dset_is_real(const DSet<Real>& a, Real tol = Real(0)) {
  for (const auto& c : a)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

struct singular_matrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Real> DSet<Real> dset_inverse(const DSet<Real>& a) {
  const Mat4<Real> m = matrix_of(a);
  Real scale = 0;
  for (int i = 0; i < 16; ++i) scale = std::max(scale, std::abs(m(i / 4, i % 4)));
  Eigen::PartialPivLU<Mat4<Real>> lu(m);
  const Real det = std::abs(lu.determinant());
  if (scale == Real(0) || det < Real(1e-13) * scale * scale * scale * scale)
    throw singular_matrix("dset_inverse: singular matrix");
  return dset_of<Real>(lu.inverse());
}

}  // namespace estc
