#pragma once

#include <utility>

#include "dlr/dense.hpp"

namespace dlr {

// SVD-like factorization U S V^H of a rank-r matrix. U and V have
// orthonormal columns; S is a general (not necessarily diagonal) r x r
// matrix between steps and diagonal right after truncation.
template <class Scalar>
struct LowRankFactor {
  OrthonormalBasis<Scalar> U;  // m x r
  Matrix<Scalar> S;            // r x r
  OrthonormalBasis<Scalar> V;  // n x r

  Index rows() const { return U.rows(); }
  Index cols() const { return V.rows(); }
  Index rank() const { return S.rows(); }

  // Dense U S V^H; for tests and small problems only.
  Matrix<Scalar> reconstruct() const { return U.matrix() * S * V.matrix().adjoint(); }

  // Best rank-r approximation of a dense matrix (initial values).
  static LowRankFactor from_dense(const Matrix<Scalar>& a, Index r) {
    require(r >= 1 && r <= std::min(a.rows(), a.cols()), "rank out of range");
    SvdFactors<Scalar> f = svd(a);
    return {OrthonormalBasis<Scalar>(f.u.matrix().leftCols(r)),
            Matrix<Scalar>(f.sigma.head(r).template cast<Scalar>().asDiagonal()),
            OrthonormalBasis<Scalar>(f.v.matrix().leftCols(r))};
  }

  // Factorization of a product L R^H of two rank-r slabs (m x r, n x r).
  static LowRankFactor from_product(const Matrix<Scalar>& l, const Matrix<Scalar>& r) {
    require(l.cols() == r.cols(), "factor width mismatch");
    QrFactors<Scalar> ql = qr_factor(l);
    QrFactors<Scalar> qr = qr_factor(r);
    return {std::move(ql.q), Matrix<Scalar>(ql.r * qr.r.adjoint()), std::move(qr.q)};
  }
};

}  // namespace dlr
