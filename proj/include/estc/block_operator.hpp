#pragma once

#include "gamma.hpp"

#include <cstddef>
#include <vector>

namespace estc {

template <class Real> using MatX = Eigen::Matrix<cplx<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real> using VecX = Eigen::Matrix<cplx<Real>, Eigen::Dynamic, 1>;

// Hermitian operator on n bispinor slots. Upper-triangle 4x4 blocks are
// packed row by row; block(l,k) for l > k is completed as block(k,l)^dagger.
template <class Real> class BlockOperator {
 public:
  BlockOperator() = default;
  explicit BlockOperator(int n) : n_(n), data_(packed_size(n), cplx<Real>(0, 0)) {}

  int slots() const { return n_; }
  int dim() const { return 4 * n_; }

  Mat4<Real> block(int k, int l) const {
    if (k <= l) return Eigen::Map<const Eigen::Matrix<cplx<Real>, 4, 4, Eigen::RowMajor>>(raw(k, l));
    return block(l, k).adjoint();
  }

  void add_block(int k, int l, const Mat4<Real>& m) {
    if (k > l) return add_block(l, k, m.adjoint());
    Eigen::Map<Eigen::Matrix<cplx<Real>, 4, 4, Eigen::RowMajor>> b(raw(k, l));
    if (k == l)
      b += (m + m.adjoint()) / Real(2);
    else
      b += m;
  }

  void set_block(int k, int l, const Mat4<Real>& m) {
    if (k > l) return set_block(l, k, m.adjoint());
    Eigen::Map<Eigen::Matrix<cplx<Real>, 4, 4, Eigen::RowMajor>> b(raw(k, l));
    b = m;
  }

  // Direct access to the packed upper block (k <= l), 16 entries row major.
  cplx<Real>* raw(int k, int l) { return data_.data() + offset(k, l); }
  const cplx<Real>* raw(int k, int l) const { return data_.data() + offset(k, l); }

  MatX<Real> dense() const {
    MatX<Real> m(dim(), dim());
    for (int k = 0; k < n_; ++k)
      for (int l = k; l < n_; ++l) {
        const Mat4<Real> b = block(k, l);
        m.template block<4, 4>(4 * k, 4 * l) = b;
        if (l != k) m.template block<4, 4>(4 * l, 4 * k) = b.adjoint();
      }
    return m;
  }

  static BlockOperator from_dense(const MatX<Real>& m) {
    BlockOperator op(static_cast<int>(m.rows() / 4));
    for (int k = 0; k < op.n_; ++k)
      for (int l = k; l < op.n_; ++l) {
        Mat4<Real> b = m.template block<4, 4>(4 * k, 4 * l);
        if (k == l) b = (b + b.adjoint()).eval() / Real(2);
        op.set_block(k, l, b);
      }
    return op;
  }

  Real trace() const {
    Real t = 0;
    for (int k = 0; k < n_; ++k) t += block(k, k).trace().real();
    return t;
  }

 private:
  static std::size_t packed_size(int n) { return static_cast<std::size_t>(n) * (n + 1) / 2 * 16; }
  std::size_t offset(int k, int l) const {
    const std::size_t kk = k;
    return (kk * (2 * static_cast<std::size_t>(n_) - kk + 1) / 2 + (l - k)) * 16;
  }

  int n_ = 0;
  std::vector<cplx<Real>> data_;
};

}  // namespace estc
