#pragma once

#include <functional>
#include <random>

#include "dlr/dense.hpp"
#include "dlr/error.hpp"

namespace dlr {

// Right-hand side F(t, Y) of a matrix differential equation, with optional
// projected-evaluation hooks. When a hook is absent it is synthesized from
// the dense right-hand side:
//   K-step: F(t, K V0^H) V0
//   L-step: F(t, U0 L^H)^H U0
//   S-step: U^H F(t, U S V^H) V
// Hooks must agree with the synthesized forms (see hook_defect below); they
// exist so linear problems can avoid materializing dense m x n evaluations.
// All evaluation functions must be safe for concurrent invocation; the
// integrator may run the K and L substeps in parallel.
template <class Scalar>
struct MatrixProblem {
  Index rows = 0;
  Index cols = 0;
  std::function<Matrix<Scalar>(double, const Matrix<Scalar>&)> rhs_dense;
  std::function<Matrix<Scalar>(double, const Matrix<Scalar>&, const Matrix<Scalar>&)> rhs_K;
  std::function<Matrix<Scalar>(double, const Matrix<Scalar>&, const Matrix<Scalar>&)> rhs_L;
  std::function<Matrix<Scalar>(double, const Matrix<Scalar>&, const Matrix<Scalar>&,
                               const Matrix<Scalar>&)>
      rhs_S;

  Matrix<Scalar> eval_dense(double t, const Matrix<Scalar>& y) const {
    require(bool(rhs_dense), "problem has no dense right-hand side");
    return rhs_dense(t, y);
  }

  Matrix<Scalar> eval_K(double t, const Matrix<Scalar>& k, const Matrix<Scalar>& v0) const {
    if (rhs_K) return rhs_K(t, k, v0);
    return eval_dense(t, k * v0.adjoint()) * v0;
  }

  Matrix<Scalar> eval_L(double t, const Matrix<Scalar>& l, const Matrix<Scalar>& u0) const {
    if (rhs_L) return rhs_L(t, l, u0);
    return eval_dense(t, u0 * l.adjoint()).adjoint() * u0;
  }

  Matrix<Scalar> eval_S(double t, const Matrix<Scalar>& s, const Matrix<Scalar>& u_hat,
                        const Matrix<Scalar>& v_hat) const {
    if (rhs_S) return rhs_S(t, s, u_hat, v_hat);
    return u_hat.adjoint() * eval_dense(t, u_hat * s * v_hat.adjoint()) * v_hat;
  }
};

// Largest relative disagreement between the problem's projected hooks and
// their dense synthesis over `trials` random probes. Zero when no hooks are
// installed. The MatrixProblem contract requires this to stay below 1e-10.
template <class Scalar>
double hook_defect(const MatrixProblem<Scalar>& p, std::mt19937_64& rng, int trials = 3,
                   Index r = 3, double t = 0.37) {
  double worst = 0.0;
  auto rel = [](double d, double scale) { return d / std::max(scale, 1e-30); };
  for (int trial = 0; trial < trials; ++trial) {
    Matrix<Scalar> u0 = random_orthonormal<Scalar>(p.rows, r, rng).matrix();
    Matrix<Scalar> v0 = random_orthonormal<Scalar>(p.cols, r, rng).matrix();
    Matrix<Scalar> k = random_gaussian<Scalar>(p.rows, r, rng);
    Matrix<Scalar> l = random_gaussian<Scalar>(p.cols, r, rng);
    Matrix<Scalar> s = random_gaussian<Scalar>(r, r, rng);
    if (p.rhs_K) {
      Matrix<Scalar> a = p.rhs_K(t, k, v0);
      Matrix<Scalar> b = p.eval_dense(t, k * v0.adjoint()) * v0;
      worst = std::max(worst, rel((a - b).norm(), b.norm()));
    }
    if (p.rhs_L) {
      Matrix<Scalar> a = p.rhs_L(t, l, u0);
      Matrix<Scalar> b = p.eval_dense(t, u0 * l.adjoint()).adjoint() * u0;
      worst = std::max(worst, rel((a - b).norm(), b.norm()));
    }
    if (p.rhs_S) {
      Matrix<Scalar> a = p.rhs_S(t, s, u0, v0);
      Matrix<Scalar> b = u0.adjoint() * p.eval_dense(t, u0 * s * v0.adjoint()) * v0;
      worst = std::max(worst, rel((a - b).norm(), b.norm()));
    }
  }
  return worst;
}

}  // namespace dlr
