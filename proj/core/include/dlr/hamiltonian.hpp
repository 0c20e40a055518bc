#pragma once

#include <functional>
#include <random>

#include "dlr/dense.hpp"
#include "dlr/error.hpp"
#include "dlr/matrix_problem.hpp"

namespace dlr {

// Hamiltonian system Q' = grad_P H, P' = -grad_Q H on m x n real matrices.
struct HamiltonianSystem {
  Index rows = 0;
  Index cols = 0;
  std::function<double(const RealMatrix&, const RealMatrix&)> h;
  std::function<RealMatrix(const RealMatrix&, const RealMatrix&)> grad_q;
  std::function<RealMatrix(const RealMatrix&, const RealMatrix&)> grad_p;
};

// Largest relative disagreement between the gradient maps and central
// finite differences of H along random directions. The HamiltonianSystem
// contract requires <= 1e-6.
inline double gradient_defect(const HamiltonianSystem& sys, std::mt19937_64& rng,
                              int trials = 5, double eps = 1e-6) {
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    RealMatrix q = random_gaussian<double>(sys.rows, sys.cols, rng);
    RealMatrix p = random_gaussian<double>(sys.rows, sys.cols, rng);
    RealMatrix dir = random_gaussian<double>(sys.rows, sys.cols, rng);
    dir /= dir.norm();
    const double dq_fd = (sys.h(q + eps * dir, p) - sys.h(q - eps * dir, p)) / (2 * eps);
    const double dp_fd = (sys.h(q, p + eps * dir) - sys.h(q, p - eps * dir)) / (2 * eps);
    const double dq = (sys.grad_q(q, p).array() * dir.array()).sum();
    const double dp = (sys.grad_p(q, p).array() * dir.array()).sum();
    const double scale = std::max({std::abs(dq_fd), std::abs(dp_fd), 1e-12});
    worst = std::max(worst, std::abs(dq - dq_fd) / scale);
    worst = std::max(worst, std::abs(dp - dp_fd) / scale);
  }
  return worst;
}

// Complex form of a Hamiltonian system: i Z' = grad_{Zbar} E(Z, Zbar) with
// Z = Q + iP and E(Z, Zbar) = 2 H(Q, P).
struct ComplexifiedSystem {
  MatrixProblem<Complex> problem;
  std::function<double(const ComplexMatrix&)> energy;  // E(Z, Zbar)
  std::function<double(const RealMatrix&, const RealMatrix&)> hamiltonian;
};

// F(t, Z) = -i (grad_Q H + i grad_P H) evaluated at Q = Re Z, P = Im Z.
inline ComplexifiedSystem complexify(const HamiltonianSystem& sys) {
  ComplexifiedSystem out;
  out.problem.rows = sys.rows;
  out.problem.cols = sys.cols;
  out.problem.rhs_dense = [sys](double, const ComplexMatrix& z) {
    const RealMatrix q = z.real();
    const RealMatrix p = z.imag();
    const RealMatrix gq = sys.grad_q(q, p);
    const RealMatrix gp = sys.grad_p(q, p);
    // -i (gq + i gp) = gp - i gq
    ComplexMatrix f(z.rows(), z.cols());
    f.real() = gp;
    f.imag() = -gq;
    return f;
  };
  out.hamiltonian = sys.h;
  out.energy = [sys](const ComplexMatrix& z) { return 2.0 * sys.h(z.real(), z.imag()); };
  return out;
}

}  // namespace dlr
