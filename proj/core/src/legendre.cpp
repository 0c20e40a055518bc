#include "dlr/problems/legendre.hpp"

#include <cmath>

#include "dlr/error.hpp"

namespace dlr::problems {

std::vector<double> legendre_all(int n, double x) {
  require(n >= 0, "legendre: negative degree");
  std::vector<double> p(size_t(n) + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = x;
  for (int k = 1; k < n; ++k)
    p[size_t(k) + 1] = ((2 * k + 1) * x * p[size_t(k)] - k * p[size_t(k) - 1]) / (k + 1);
  return p;
}

double legendre(int k, double x) { return legendre_all(k, x)[size_t(k)]; }

Quadrature gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: need at least one node");
  Quadrature q;
  q.nodes.resize(size_t(n));
  q.weights.resize(size_t(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess for the i-th root of P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto p = legendre_all(n, x);
      dp = n * (x * p[size_t(n)] - p[size_t(n) - 1]) / (x * x - 1.0);
      const double dx = p[size_t(n)] / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const auto p = legendre_all(n, x);
    dp = n * (x * p[size_t(n)] - p[size_t(n) - 1]) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[size_t(i)] = -x;
    q.weights[size_t(i)] = w;
    q.nodes[size_t(n - 1 - i)] = x;
    q.weights[size_t(n - 1 - i)] = w;
  }
  if (n % 2 == 1) q.nodes[size_t(n / 2)] = 0.0;
  return q;
}

}  // namespace dlr::problems
