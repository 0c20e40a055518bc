#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "dlr/dense.hpp"
#include "dlr/error.hpp"

namespace dlr {

// Dense tensor of order 1..8, entries stored with the first index varying
// fastest. Mode indices are 0-based throughout.
template <class Scalar>
class Tensor {
 public:
  static constexpr int kMaxOrder = 8;

  Tensor() = default;

  explicit Tensor(std::vector<Index> dims) : dims_(std::move(dims)) {
    require(!dims_.empty() && int(dims_.size()) <= kMaxOrder,
            "tensor order must be in [1,8]");
    Index n = 1;
    for (Index d : dims_) {
      require(d >= 1, "tensor dimensions must be positive");
      n *= d;
    }
    data_.assign(size_t(n), Scalar(0));
  }

  int order() const { return int(dims_.size()); }
  Index dim(int mode) const { return dims_[size_t(mode)]; }
  const std::vector<Index>& dims() const { return dims_; }
  Index size() const { return Index(data_.size()); }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }
  Scalar& operator[](Index linear) { return data_[size_t(linear)]; }
  const Scalar& operator[](Index linear) const { return data_[size_t(linear)]; }

  Scalar& at(const std::vector<Index>& idx) { return data_[size_t(linear_index(idx))]; }
  const Scalar& at(const std::vector<Index>& idx) const {
    return data_[size_t(linear_index(idx))];
  }

  Index linear_index(const std::vector<Index>& idx) const {
    require(idx.size() == dims_.size(), "index order mismatch");
    Index lin = 0, stride = 1;
    for (size_t k = 0; k < dims_.size(); ++k) {
      require(idx[k] >= 0 && idx[k] < dims_[k], "index out of range");
      lin += stride * idx[k];
      stride *= dims_[k];
    }
    return lin;
  }

  Tensor& operator+=(const Tensor& o) {
    require(dims_ == o.dims_, "tensor shape mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    require(dims_ == o.dims_, "tensor shape mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor& operator*=(double a) {
    for (auto& x : data_) x *= a;
    return *this;
  }

  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(double a, Tensor t) { return t *= a; }

  bool all_finite() const {
    for (const Scalar& x : data_)
      if (!std::isfinite(std::real(x)) || !std::isfinite(std::imag(x))) return false;
    return true;
  }

 private:
  std::vector<Index> dims_;
  std::vector<Scalar> data_;
};

template <class Scalar>
bool all_finite(const Tensor<Scalar>& t) {
  return t.all_finite();
}

template <class Scalar>
double frobenius_norm(const Tensor<Scalar>& t) {
  double s = 0;
  for (Index i = 0; i < t.size(); ++i) s += std::norm(t[i]);
  return std::sqrt(s);
}

// Mode-i matricization: row index is the mode-i index, the column index
// enumerates the remaining modes in increasing mode order with the lowest
// remaining mode varying fastest (Kolda-Bader unfolding).
template <class Scalar>
Matrix<Scalar> matricize(const Tensor<Scalar>& t, int mode) {
  require(mode >= 0 && mode < t.order(), "mode out of range");
  const Index n = t.dim(mode);
  Index stride = 1;
  for (int k = 0; k < mode; ++k) stride *= t.dim(k);
  const Index block = stride * n;
  Matrix<Scalar> m(n, t.size() / n);
  for (Index lin = 0; lin < t.size(); ++lin) {
    const Index i = (lin / stride) % n;
    const Index j = (lin % stride) + (lin / block) * stride;
    m(i, j) = t[lin];
  }
  return m;
}

// Exact inverse of matricize for the given mode.
template <class Scalar>
Tensor<Scalar> tensorize(int mode, const Matrix<Scalar>& m, const std::vector<Index>& dims) {
  require(mode >= 0 && mode < int(dims.size()), "mode out of range");
  Tensor<Scalar> t(dims);
  const Index n = t.dim(mode);
  require(m.rows() == n && m.cols() == t.size() / n, "shape mismatch in tensorize");
  Index stride = 1;
  for (int k = 0; k < mode; ++k) stride *= t.dim(k);
  const Index block = stride * n;
  for (Index lin = 0; lin < t.size(); ++lin) {
    const Index i = (lin / stride) % n;
    const Index j = (lin % stride) + (lin / block) * stride;
    t[lin] = m(i, j);
  }
  return t;
}

// Mode-i product: Mat_i(result) = m * Mat_i(t). Products over distinct
// modes commute.
template <class Scalar>
Tensor<Scalar> mode_product(const Tensor<Scalar>& t, int mode, const Matrix<Scalar>& m) {
  require(mode >= 0 && mode < t.order(), "mode out of range");
  require(m.cols() == t.dim(mode), "shape mismatch in mode_product");
  Matrix<Scalar> prod = m * matricize(t, mode);
  std::vector<Index> dims = t.dims();
  dims[size_t(mode)] = m.rows();
  return tensorize(mode, prod, dims);
}

// Multi-mode product T x_0 ms[0] x_1 ms[1] ... over all modes.
template <class Scalar>
Tensor<Scalar> multi_mode_product(Tensor<Scalar> t, const std::vector<Matrix<Scalar>>& ms) {
  require(int(ms.size()) == t.order(), "one factor per mode required");
  for (int i = 0; i < int(ms.size()); ++i) t = mode_product(t, i, ms[i]);
  return t;
}

template <class Scalar>
Tensor<Scalar> tensor_from_matrix(const Matrix<Scalar>& m) {
  return tensorize(0, m, {m.rows(), m.cols()});
}

template <class Scalar>
Matrix<Scalar> matrix_from_tensor(const Tensor<Scalar>& t) {
  require(t.order() == 2, "order-2 tensor expected");
  return matricize(t, 0);
}

}  // namespace dlr
