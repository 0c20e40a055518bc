#pragma once

#include "dlr/dense.hpp"
#include "dlr/low_rank.hpp"
#include "dlr/matrix_problem.hpp"

namespace dlr::problems {

// 1-D radiation transport with isotropic scattering,
//   df/dt + mu df/dx + sigma_s f = (sigma_s/2) integral f dmu,
// discretized by a semi-discrete Lax-Friedrichs scheme in x and a
// normalized-Legendre moment expansion in mu. The moment matrix Y is
// Nx x (N+1) with rows = spatial cells and columns = moments; the
// right-hand side is
//   F(Y) = -D1 Y A^T + Dstab Y + Y G^T
// with A the tridiagonal advection matrix (off-diagonals
// gamma_k = (k+1)/sqrt((2k+1)(2k+3))), G = diag(0, -sigma_s, ...),
// D1 the central difference and Dstab = (1,-2,1)/(2 dt) stabilization.
// The initial condition is an isotropic Gaussian, which is exactly rank 1
// in moment space.
struct TransportProblem {
  double x_min = -5.0;
  double x_max = 5.0;
  Index nx = 200;
  Index npol = 64;  // number of moments, N+1
  double sigma_s = 1.0;
  double sigma_ic = 3e-2;
  double cfl = 0.99;
  enum class Boundary { ZeroInflow, Periodic };
  Boundary boundary = Boundary::ZeroInflow;

  double dx() const { return (x_max - x_min) / double(nx); }
  double dt() const { return cfl * dx(); }  // characteristic speeds |mu| <= 1
  double cell_center(Index j) const { return x_min + (double(j) + 0.5) * dx(); }

  RealMatrix flux_matrix() const;     // (N+1) x (N+1) symmetric tridiagonal
  RealVector scatter_diagonal() const;

  MatrixProblem<double> problem() const;

  RealMatrix initial_moments() const;      // Nx x (N+1), rank 1
  LowRankFactor<double> initial_rank1() const;

  // Full-rank explicit-Euler reference on the same grid and step size.
  RealMatrix oracle(double t_end) const;

  // Scalar flux Phi = integral f dmu = sqrt(2) * moment 0.
  RealVector scalar_flux(const RealMatrix& y) const;
};

}  // namespace dlr::problems
