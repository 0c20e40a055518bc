#pragma once

#include <cstdint>

#include "dlr/dense.hpp"
#include "dlr/low_rank.hpp"
#include "dlr/matrix_problem.hpp"

namespace dlr::problems {

// Exact flow Y(t) = exp(-tB) Y0 exp(-tB)^T of Y' = -(B Y + Y B^T) for
// symmetric B, via the eigendecomposition of B.
RealMatrix symmetric_flow_reference(const RealMatrix& b, const RealMatrix& y0, double t);

// Linear matrix ODE Y' = -(B Y + Y B^T) with B = V_cos - D/2, where
// D = tridiag(-1, 2, -1) and V_cos = diag(1 - cos(2 pi j / n)) for
// j = -n/2 .. n/2-1. The full-rank initial value is A0 = U0 S0 V0^T with
// seeded random orthogonal U0, V0 and (S0)_ii = 10^{-i}; runs start from
// its best rank-r truncation. The flow has the closed form
// A(t) = exp(-tB) A0 exp(-tB)^T, used as the error reference.
class Sec51Problem {
 public:
  Sec51Problem(Index n, std::uint64_t seed);

  Index n() const { return n_; }
  const RealMatrix& b() const { return b_; }

  // F(t, Y) = -(B Y + Y B^T); projected hooks installed (B is sparse).
  MatrixProblem<double> problem() const;
  // Schroedinger form i Y' = H[Y] with H[Y] = B Y + Y B, i.e.
  // F(t, Y) = -i (B Y + Y B), on the complex field.
  MatrixProblem<Complex> schroedinger_problem() const;

  RealMatrix a0() const;
  LowRankFactor<double> initial(Index r) const;
  // Symmetric variant Y0 = U0 S0 U0^T (S0 diagonal, hence symmetric).
  LowRankFactor<double> symmetric_initial(Index r) const;
  // Normalized complex initial value of rank r for the Schroedinger runs.
  LowRankFactor<Complex> schroedinger_initial(Index r, std::uint64_t seed) const;

  // Exact flow exp(-tB) A0 exp(-tB)^T via the eigendecomposition of B.
  RealMatrix reference(double t) const;
  // Exact propagator exp(-tB).
  RealMatrix propagator(double t) const;

  // H[Y] = B Y + Y B as a dense map (energy monitoring).
  ComplexMatrix hamiltonian_map(const ComplexMatrix& y) const;

 private:
  Index n_;
  std::uint64_t seed_;
  RealMatrix b_;
  RealMatrix u0_, v0_;   // full n x n orthogonal factors
  RealVector s0_;        // 10^{-i}
  RealMatrix evecs_;     // eigendecomposition of B
  RealVector evals_;
};

}  // namespace dlr::problems
