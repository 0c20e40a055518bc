#pragma once

#include <Eigen/Sparse>
#include <cstring>
#include <memory>
#include <mutex>

#include "dlr/matrix_problem.hpp"

namespace dlr {

// MatrixProblem for the linear two-sided right-hand side
//   F(t, Y) = coeff * (A Y + Y B)
// with sparse A (m x m) and B (n x n). The projected hooks reduce to
//   K: coeff * (A K + K (V0^H B V0))
//   L: conj(coeff) * (B^H L + L (U0^H A^H U0))
//   S: coeff * ((U^H A U) S + S (V^H B V))
// The small projected blocks are memoized on the exact bytes of the frozen
// bases, which the integrator reuses across all substep evaluations of a
// step. Hooks take a mutex, so concurrent K/L evaluation stays safe.
template <class Scalar>
MatrixProblem<Scalar> make_sylvester_problem(Eigen::SparseMatrix<Scalar> a,
                                             Eigen::SparseMatrix<Scalar> b, Scalar coeff) {
  require(a.rows() == a.cols() && b.rows() == b.cols(), "square coefficient matrices required");

  struct Cache {
    std::mutex mu;
    Matrix<Scalar> key_left, proj_left;    // U^H A U keyed on U
    Matrix<Scalar> key_right, proj_right;  // V^H B V keyed on V
  };

  struct State {
    Eigen::SparseMatrix<Scalar> a, b, a_adj, b_adj;
    Scalar coeff;
    Cache k_cache, l_cache, s_cache;
  };
  auto st = std::make_shared<State>();
  st->a = std::move(a);
  st->b = std::move(b);
  st->a_adj = st->a.adjoint();
  st->b_adj = st->b.adjoint();
  st->coeff = coeff;

  auto same = [](const Matrix<Scalar>& x, const Matrix<Scalar>& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() &&
           std::memcmp(x.data(), y.data(), sizeof(Scalar) * size_t(x.size())) == 0;
  };

  // basis^H M basis with memoization keyed on the basis bytes.
  auto projected = [same](const Eigen::SparseMatrix<Scalar>& m, const Matrix<Scalar>& basis,
                          Matrix<Scalar>& key, Matrix<Scalar>& value, std::mutex& mu) {
    std::scoped_lock lock(mu);
    if (!same(key, basis)) {
      key = basis;
      value = basis.adjoint() * (m * basis).eval();
    }
    return value;
  };

  MatrixProblem<Scalar> p;
  p.rows = st->a.rows();
  p.cols = st->b.rows();
  p.rhs_dense = [st](double, const Matrix<Scalar>& y) -> Matrix<Scalar> {
    return st->coeff * (st->a * y + y * st->b);
  };
  p.rhs_K = [st, projected](double, const Matrix<Scalar>& k,
                            const Matrix<Scalar>& v0) -> Matrix<Scalar> {
    Matrix<Scalar> proj =
        projected(st->b, v0, st->k_cache.key_right, st->k_cache.proj_right, st->k_cache.mu);
    return st->coeff * (st->a * k + k * proj);
  };
  p.rhs_L = [st, projected](double, const Matrix<Scalar>& l,
                            const Matrix<Scalar>& u0) -> Matrix<Scalar> {
    Matrix<Scalar> proj =
        projected(st->a_adj, u0, st->l_cache.key_left, st->l_cache.proj_left, st->l_cache.mu);
    return Eigen::numext::conj(st->coeff) * (st->b_adj * l + l * proj);
  };
  p.rhs_S = [st, projected](double, const Matrix<Scalar>& s, const Matrix<Scalar>& u_hat,
                            const Matrix<Scalar>& v_hat) -> Matrix<Scalar> {
    Matrix<Scalar> pa =
        projected(st->a, u_hat, st->s_cache.key_left, st->s_cache.proj_left, st->s_cache.mu);
    Matrix<Scalar> pb =
        projected(st->b, v_hat, st->s_cache.key_right, st->s_cache.proj_right, st->s_cache.mu);
    return st->coeff * (pa * s + s * pb);
  };
  return p;
}

template <class Scalar>
Eigen::SparseMatrix<Scalar> sparse_from_dense(const Matrix<Scalar>& m) {
  Eigen::SparseMatrix<Scalar> out = m.sparseView();
  out.makeCompressed();
  return out;
}

}  // namespace dlr
