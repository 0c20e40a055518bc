#include "dlr/problems/transport.hpp"

#include <cmath>

#include "dlr/error.hpp"

namespace dlr::problems {

RealMatrix TransportProblem::flux_matrix() const {
  RealMatrix a = RealMatrix::Zero(npol, npol);
  for (Index k = 0; k + 1 < npol; ++k) {
    const double gamma =
        (double(k) + 1.0) / std::sqrt((2.0 * double(k) + 1.0) * (2.0 * double(k) + 3.0));
    a(k, k + 1) = gamma;
    a(k + 1, k) = gamma;
  }
  return a;
}

RealVector TransportProblem::scatter_diagonal() const {
  RealVector g = RealVector::Constant(npol, -sigma_s);
  g(0) = 0.0;
  return g;
}

MatrixProblem<double> TransportProblem::problem() const {
  const double inv_2dx = 1.0 / (2.0 * dx());
  const double inv_2dt = 1.0 / (2.0 * dt());
  const RealMatrix a = flux_matrix();
  const RealVector g = scatter_diagonal();
  const Index cells = nx;
  const Boundary bc = boundary;

  MatrixProblem<double> p;
  p.rows = nx;
  p.cols = npol;
  p.rhs_dense = [inv_2dx, inv_2dt, a, g, cells, bc](double, const RealMatrix& y) {
    require(y.rows() == cells, "transport: row count mismatch");
    // Shifted copies with ghost rows: zero inflow uses vacuum ghosts,
    // the periodic variant wraps (used by the conservation tests).
    RealMatrix up(cells, y.cols());   // Y_{j+1}
    RealMatrix down(cells, y.cols()); // Y_{j-1}
    up.topRows(cells - 1) = y.bottomRows(cells - 1);
    down.bottomRows(cells - 1) = y.topRows(cells - 1);
    if (bc == Boundary::Periodic) {
      up.row(cells - 1) = y.row(0);
      down.row(0) = y.row(cells - 1);
    } else {
      up.row(cells - 1).setZero();
      down.row(0).setZero();
    }
    RealMatrix f = -inv_2dx * (up - down) * a;
    f += inv_2dt * (up - 2.0 * y + down);
    f += y * g.asDiagonal();
    return f;
  };
  return p;
}

RealMatrix TransportProblem::initial_moments() const {
  RealMatrix y = RealMatrix::Zero(nx, npol);
  const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * sigma_ic);
  for (Index j = 0; j < nx; ++j) {
    const double x = cell_center(j);
    // f(0,x,mu) = g(x) isotropic; with phi_0 = 1/sqrt(2) the moment-0
    // coefficient is sqrt(2) g(x).
    y(j, 0) = std::sqrt(2.0) * norm * std::exp(-x * x / (2.0 * sigma_ic * sigma_ic));
  }
  return y;
}

LowRankFactor<double> TransportProblem::initial_rank1() const {
  const RealMatrix y0 = initial_moments();
  const double scale = y0.col(0).norm();
  RealMatrix u = y0.col(0) / scale;
  RealMatrix v = RealMatrix::Zero(npol, 1);
  v(0, 0) = 1.0;
  RealMatrix s(1, 1);
  s(0, 0) = scale;
  return {OrthonormalBasis<double>(std::move(u)), std::move(s),
          OrthonormalBasis<double>(std::move(v))};
}

RealMatrix TransportProblem::oracle(double t_end) const {
  MatrixProblem<double> p = problem();
  RealMatrix y = initial_moments();
  const double step = dt();
  double t = 0.0;
  while (t < t_end - 1e-12 * t_end) {
    const double hs = std::min(step, t_end - t);
    y += hs * p.eval_dense(t, y);
    require(all_finite(y), "transport oracle diverged");
    t += hs;
  }
  return y;
}

RealVector TransportProblem::scalar_flux(const RealMatrix& y) const {
  return std::sqrt(2.0) * y.col(0);
}

}  // namespace dlr::problems
