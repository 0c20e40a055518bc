#pragma once

#include <string>
#include <vector>

#include "dlr/dense.hpp"
#include "dlr/low_rank.hpp"
#include "dlr/matrix_problem.hpp"
#include "dlr/truncation.hpp"

namespace dlr::problems {

// Burgers' equation with uncertain ramp initial condition, projected onto a
// tensorized normalized Legendre basis of the random vector
// xi in [-1,1] x [0,1] (stochastic Galerkin). The coefficient matrix Y is
// Nx x K with rows = spatial cells and columns = basis functions,
// k = a + (degree+1) b. The spatial discretization is a first-order finite
// volume scheme with Lax-Friedrichs fluxes; the modal flux is
//   F_k(u) = 1/2 sum_{l,m} C_klm u_l u_m
// with the triple tensor C_klm = <phi_k phi_l phi_m> precomputed by
// Gauss-Legendre quadrature (stored sparsely as a product of 1-D factors).
class BurgersUQProblem {
 public:
  struct Params {
    double x_lo = 0.0;
    double x_hi = 1.0;
    Index nx = 200;
    double t_end = 0.04;
    double x0 = 0.3;
    double x1 = 0.4;
    double u_left = 12.0;
    double u_right = 1.0;
    double sigma1 = 0.2;
    double sigma2 = 5.0;
    int degree = 9;    // per-variable cap; K = (degree+1)^2
    double cfl = 0.95;
    int quad_1d = 0;   // C_klm quadrature nodes; 0 = exact default
    int ic_quad = 64;  // initial-condition projection nodes per variable
  };

  struct Entry {
    Index l, m;  // l <= m
    double c;    // weight such that F_k = sum entries c * u_l * u_m
  };

  explicit BurgersUQProblem(Params params);

  const Params& params() const { return params_; }
  Index basis_count() const { return k_; }
  double dx() const { return (params_.x_hi - params_.x_lo) / double(params_.nx); }
  double u_max() const { return params_.u_left + params_.sigma2; }
  double dt() const { return params_.cfl * dx() / u_max(); }
  double cell_center(Index j) const { return params_.x_lo + (double(j) + 0.5) * dx(); }

  double basis_value(Index basis, double xi1, double xi2) const;
  const std::vector<std::vector<Entry>>& flux_triples() const { return triples_; }
  double triple(Index k, Index l, Index m) const;  // C_klm

  // Modal flux per cell.
  RealMatrix flux(const RealMatrix& u) const;
  MatrixProblem<double> problem() const;

  RealMatrix initial_coeffs() const;
  LowRankFactor<double> initial(Index r) const;
  LowRankFactor<double> initial_by_policy(const TruncationPolicy& policy) const;

  // Exact solution by characteristics for one sample of xi: a traveling
  // ramp until the shock time t_s = (x1-x0)/(u_left-u_r(xi2)), then a
  // single shock moving at the Rankine-Hugoniot speed.
  double sample_solution(double t, double x, double xi1, double xi2) const;

  struct Moments {
    RealVector expectation;
    RealVector std_dev;
  };
  // Quadrature average of the characteristics solution over xi.
  Moments oracle(double t, int qnodes = 50) const;
  static Moments moments_from_coeffs(const RealMatrix& y);

  // Binary C_klm cache: magic "DLRC", two uint32 degree caps, then the
  // dense (K^3) payload of little-endian 8-byte floats, m fastest.
  void write_c_cache(const std::string& path) const;
  bool read_c_cache(const std::string& path);  // false on mismatch

 private:
  void build_triples(const std::vector<double>& t1, const std::vector<double>& t2);
  std::vector<double> triple_products_1d() const;

  Params params_;
  Index k_ = 0;
  std::vector<std::vector<Entry>> triples_;  // per k, entries with l <= m
};

}  // namespace dlr::problems
