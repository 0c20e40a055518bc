#pragma once

#include <cstdint>
#include <vector>

#include "dlr/dense.hpp"
#include "dlr/hamiltonian.hpp"
#include "dlr/low_rank.hpp"
#include "dlr/matrix_problem.hpp"
#include "dlr/tucker.hpp"

namespace dlr::problems {

// Closed-form rank-r path A(t) = L(t) R(t)^T with polynomial slabs
// L(t) = L0 + t L1 + t^2 L2 (m x r) and R(t) = R0 + t R1 (n x r), so A is a
// matrix polynomial of degree 3 with exact derivative
// A'(t) = L'(t) R(t)^T + L(t) R'(t)^T. Driving F(t, Y) = A'(t) makes the
// integrator's substep ODEs state-independent polynomials that RK4
// integrates exactly, which the exactness tests exploit.
class SyntheticMatrixPath {
 public:
  SyntheticMatrixPath(Index m, Index n, Index r, std::uint64_t seed);

  Index rank() const { return r_; }
  RealMatrix value(double t) const;
  RealMatrix derivative(double t) const;
  LowRankFactor<double> factor(double t) const;
  MatrixProblem<double> problem() const;  // F(t, Y) = A'(t)
  // Smallest singular value of A(t); positive values certify rank r.
  double min_singular_value(double t) const;
  // min sv of U(t1)^T U(t0) (and the V analogue), the invertibility
  // condition of the exactness property.
  double basis_overlap(double t0, double t1) const;

 private:
  Index m_, n_, r_;
  RealMatrix l0_, l1_, l2_, r0_, r1_;
};

// Order-d analogue: A(t) = C x_i M_i(t) with constant core of multilinear
// rank (r_1, ..., r_d) and linear factors M_i(t) = M_i0 + t M_i1.
class SyntheticTuckerPath {
 public:
  SyntheticTuckerPath(std::vector<Index> dims, std::vector<Index> ranks, std::uint64_t seed);

  const std::vector<Index>& dims() const { return dims_; }
  Tensor<double> value(double t) const;
  Tensor<double> derivative(double t) const;
  TuckerFactor<double> factor(double t) const;
  TensorProblem<double> problem() const;  // F(t, Y) = A'(t)

 private:
  std::vector<Matrix<double>> factors(double t) const;

  std::vector<Index> dims_, ranks_;
  Tensor<double> core_;
  std::vector<RealMatrix> m0_, m1_;
};

// Gradient flow Y' = -grad f(Y) for f(Y) = 1/2 |Y - A_target|_F^2 with a
// seeded rank-r target.
class GradientFlowProblem {
 public:
  GradientFlowProblem(Index m, Index n, Index target_rank, std::uint64_t seed);

  const RealMatrix& target() const { return target_; }
  double functional(const RealMatrix& y) const;
  RealMatrix gradient(const RealMatrix& y) const;  // Y - A_target
  MatrixProblem<double> problem() const;           // F = -(Y - A_target)
  LowRankFactor<double> initial(Index r, std::uint64_t seed) const;

 private:
  Index m_, n_;
  RealMatrix target_;
};

// Harmonic chain H(Q, P) = 1/2 <P, P> + 1/2 <Q, A_stiff Q> with
// A_stiff = tridiag(-1, 2, -1)/dx^2 acting on the rows of Q.
HamiltonianSystem make_harmonic_chain(Index rows, Index cols, double dx);

// Seeded complex low-rank initial value with normalized factors.
LowRankFactor<Complex> random_complex_factor(Index m, Index n, Index r, std::uint64_t seed);

}  // namespace dlr::problems
