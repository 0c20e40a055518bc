#pragma once

#include <vector>

#include "dlr/dense.hpp"

namespace dlr::problems {

// Legendre polynomials P_0..P_n at x via the three-term recurrence.
std::vector<double> legendre_all(int n, double x);

double legendre(int k, double x);

struct Quadrature {
  std::vector<double> nodes;    // in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule with n nodes on [-1, 1], exact for degree <= 2n-1.
// Nodes found by Newton iteration from the Chebyshev initial guess; the
// computation is deterministic.
Quadrature gauss_legendre(int n);

}  // namespace dlr::problems
