#include "dlr/problems/burgers.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dlr/error.hpp"
#include "dlr/problems/legendre.hpp"

namespace dlr::problems {

namespace {

// Orthonormal Legendre factors w.r.t. the uniform probability measure:
// phi_a(s) = sqrt(2a+1) P_a(s) on [-1,1]; the xi2 factor is the shifted
// variant on [0,1].
std::vector<double> basis_1d(int degree, double s) {
  auto p = legendre_all(degree, s);
  for (int a = 0; a <= degree; ++a) p[size_t(a)] *= std::sqrt(2.0 * a + 1.0);
  return p;
}

}  // namespace

BurgersUQProblem::BurgersUQProblem(Params params) : params_(std::move(params)) {
  require(params_.degree >= 0 && params_.nx >= 3, "burgers: bad discretization parameters");
  k_ = Index(params_.degree + 1) * Index(params_.degree + 1);
  // The xi1 and xi2 factors share one triple-product tensor: mapping the
  // shifted basis back to [-1,1] turns its integrals into the plain ones.
  const std::vector<double> t1 = triple_products_1d();
  build_triples(t1, t1);
}

// Dense 1-D triple-product tensor <phi_a phi_b phi_c> of size (p+1)^3 by
// Gauss-Legendre quadrature, exact for the degree-3p integrand.
std::vector<double> BurgersUQProblem::triple_products_1d() const {
  const int p = params_.degree;
  const int nq = params_.quad_1d > 0 ? params_.quad_1d : (3 * p) / 2 + 2;
  const Quadrature q = gauss_legendre(nq);
  const size_t np = size_t(p) + 1;
  std::vector<double> t(np * np * np, 0.0);
  for (int i = 0; i < nq; ++i) {
    const double s = q.nodes[size_t(i)];
    const double w = q.weights[size_t(i)] / 2.0;  // probability measure
    const auto phi = basis_1d(p, s);
    for (size_t a = 0; a < np; ++a)
      for (size_t b = a; b < np; ++b)
        for (size_t c = b; c < np; ++c) {
          const double v = w * phi[a] * phi[b] * phi[c];
          t[(a * np + b) * np + c] += v;
        }
  }
  // Symmetrize: fill the remaining permutations.
  for (size_t a = 0; a < np; ++a)
    for (size_t b = 0; b < np; ++b)
      for (size_t c = 0; c < np; ++c) {
        size_t idx[3] = {a, b, c};
        std::sort(idx, idx + 3);
        t[(a * np + b) * np + c] = t[(idx[0] * np + idx[1]) * np + idx[2]];
      }
  return t;
}

void BurgersUQProblem::build_triples(const std::vector<double>& t1,
                                     const std::vector<double>& t2) {
  const Index np = params_.degree + 1;
  const double tol = 1e-14;
  triples_.assign(size_t(k_), {});
  auto t1v = [&](Index a, Index b, Index c) { return t1[size_t((a * np + b) * np + c)]; };
  auto t2v = [&](Index a, Index b, Index c) { return t2[size_t((a * np + b) * np + c)]; };
  for (Index ak = 0; ak < np; ++ak)
    for (Index bk = 0; bk < np; ++bk) {
      const Index k = ak + np * bk;
      for (Index al = 0; al < np; ++al)
        for (Index am = 0; am < np; ++am) {
          const double c1 = t1v(ak, al, am);
          if (std::abs(c1) < tol) continue;
          for (Index bl = 0; bl < np; ++bl)
            for (Index bm = 0; bm < np; ++bm) {
              const double c2 = t2v(bk, bl, bm);
              if (std::abs(c2) < tol) continue;
              const Index l = al + np * bl;
              const Index m = am + np * bm;
              if (l > m) continue;
              const double c = c1 * c2;
              triples_[size_t(k)].push_back({l, m, l == m ? 0.5 * c : c});
            }
        }
    }
}

double BurgersUQProblem::basis_value(Index basis, double xi1, double xi2) const {
  const Index np = params_.degree + 1;
  const Index a = basis % np;
  const Index b = basis / np;
  const auto p1 = basis_1d(params_.degree, xi1);
  const auto p2 = basis_1d(params_.degree, 2.0 * xi2 - 1.0);
  return p1[size_t(a)] * p2[size_t(b)];
}

double BurgersUQProblem::triple(Index k, Index l, Index m) const {
  if (l > m) std::swap(l, m);
  for (const Entry& e : triples_[size_t(k)])
    if (e.l == l && e.m == m) return l == m ? 2.0 * e.c : e.c;
  return 0.0;
}

RealMatrix BurgersUQProblem::flux(const RealMatrix& u) const {
  RealMatrix f = RealMatrix::Zero(u.rows(), k_);
  for (Index k = 0; k < k_; ++k) {
    auto col = f.col(k);
    for (const Entry& e : triples_[size_t(k)])
      col += e.c * u.col(e.l).cwiseProduct(u.col(e.m));
  }
  return f;
}

MatrixProblem<double> BurgersUQProblem::problem() const {
  const double inv_dx = 1.0 / dx();
  const double stab = dx() / (2.0 * dt());
  const Index cells = params_.nx;
  const BurgersUQProblem* self = this;

  MatrixProblem<double> p;
  p.rows = cells;
  p.cols = k_;
  p.rhs_dense = [self, inv_dx, stab, cells](double, const RealMatrix& y) {
    require(y.rows() == cells, "burgers: row count mismatch");
    const RealMatrix f = self->flux(y);
    // Outflow (copy) ghost cells at both ends: the ghost flux equals the
    // boundary flux, so interface fluxes at the ends reduce to the cell's
    // own flux.
    RealMatrix fhat(cells + 1, y.cols());  // interface j-1/2 for j = 0..cells
    fhat.topRows(1) = f.topRows(1);
    fhat.bottomRows(1) = f.bottomRows(1);
    fhat.middleRows(1, cells - 1) =
        0.5 * (f.topRows(cells - 1) + f.bottomRows(cells - 1)) -
        stab * (y.bottomRows(cells - 1) - y.topRows(cells - 1));
    return RealMatrix(-inv_dx * (fhat.bottomRows(cells) - fhat.topRows(cells)));
  };
  return p;
}

RealMatrix BurgersUQProblem::initial_coeffs() const {
  const int nq = params_.ic_quad;
  const Quadrature q = gauss_legendre(nq);
  const Index np = params_.degree + 1;

  // Basis values at the tensor quadrature nodes.
  RealMatrix b1(np, nq), b2(np, nq);
  for (int i = 0; i < nq; ++i) {
    const auto v = basis_1d(params_.degree, q.nodes[size_t(i)]);
    for (Index a = 0; a < np; ++a) {
      b1(a, i) = v[size_t(a)];
      b2(a, i) = v[size_t(a)];
    }
  }

  RealMatrix y(params_.nx, k_);
  RealMatrix g(nq, nq);
  for (Index j = 0; j < params_.nx; ++j) {
    const double x = cell_center(j);
    for (int i1 = 0; i1 < nq; ++i1)
      for (int i2 = 0; i2 < nq; ++i2) {
        const double xi1 = q.nodes[size_t(i1)];
        const double xi2 = (q.nodes[size_t(i2)] + 1.0) / 2.0;
        const double w = q.weights[size_t(i1)] * q.weights[size_t(i2)] / 4.0;
        g(i1, i2) = w * sample_solution(0.0, x, xi1, xi2);
      }
    const RealMatrix coeff = b1 * g * b2.transpose();  // (a, b) projection
    for (Index a = 0; a < np; ++a)
      for (Index b = 0; b < np; ++b) y(j, a + np * b) = coeff(a, b);
  }
  return y;
}

LowRankFactor<double> BurgersUQProblem::initial(Index r) const {
  return LowRankFactor<double>::from_dense(initial_coeffs(), r);
}

LowRankFactor<double> BurgersUQProblem::initial_by_policy(const TruncationPolicy& policy) const {
  const RealMatrix y0 = initial_coeffs();
  SvdFactors<double> f = svd(y0);
  const RankChoice choice = pick_rank(f.sigma, policy.theta(f.sigma), policy.r_min, policy.r_max);
  return LowRankFactor<double>::from_dense(y0, choice.rank);
}

double BurgersUQProblem::sample_solution(double t, double x, double xi1, double xi2) const {
  const double ul = params_.u_left;
  const double ur = params_.u_right + params_.sigma2 * xi2;
  const double lo = params_.x0 + params_.sigma1 * xi1;
  const double hi = params_.x1 + params_.sigma1 * xi1;
  const double t_shock = (params_.x1 - params_.x0) / (ul - ur);
  if (t < t_shock) {
    const double xl = lo + ul * t;
    const double xr = hi + ur * t;
    if (x <= xl) return ul;
    if (x >= xr) return ur;
    return ul + (ur - ul) * (x - xl) / (xr - xl);
  }
  const double x_star = lo + ul * t_shock;
  const double x_sh = x_star + 0.5 * (ul + ur) * (t - t_shock);
  return x < x_sh ? ul : ur;
}

BurgersUQProblem::Moments BurgersUQProblem::oracle(double t, int qnodes) const {
  const Quadrature q = gauss_legendre(qnodes);
  Moments out;
  out.expectation = RealVector::Zero(params_.nx);
  out.std_dev = RealVector::Zero(params_.nx);
  RealVector second = RealVector::Zero(params_.nx);
  for (int i1 = 0; i1 < qnodes; ++i1)
    for (int i2 = 0; i2 < qnodes; ++i2) {
      const double xi1 = q.nodes[size_t(i1)];
      const double xi2 = (q.nodes[size_t(i2)] + 1.0) / 2.0;
      const double w = q.weights[size_t(i1)] * q.weights[size_t(i2)] / 4.0;
      for (Index j = 0; j < params_.nx; ++j) {
        const double u = sample_solution(t, cell_center(j), xi1, xi2);
        out.expectation(j) += w * u;
        second(j) += w * u * u;
      }
    }
  for (Index j = 0; j < params_.nx; ++j)
    out.std_dev(j) =
        std::sqrt(std::max(0.0, second(j) - out.expectation(j) * out.expectation(j)));
  return out;
}

BurgersUQProblem::Moments BurgersUQProblem::moments_from_coeffs(const RealMatrix& y) {
  Moments out;
  out.expectation = y.col(0);
  out.std_dev = y.rightCols(y.cols() - 1).rowwise().norm();
  return out;
}

void BurgersUQProblem::write_c_cache(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  require(bool(f), "cannot open cache file for writing: " + path);
  f.write("DLRC", 4);
  const std::uint32_t caps[2] = {std::uint32_t(params_.degree), std::uint32_t(params_.degree)};
  f.write(reinterpret_cast<const char*>(caps), sizeof(caps));
  for (Index k = 0; k < k_; ++k)
    for (Index l = 0; l < k_; ++l)
      for (Index m = 0; m < k_; ++m) {
        const double v = triple(k, l, m);
        f.write(reinterpret_cast<const char*>(&v), sizeof(v));
      }
  require(bool(f), "short write to cache file: " + path);
}

bool BurgersUQProblem::read_c_cache(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  char magic[4];
  std::uint32_t caps[2];
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(caps), sizeof(caps));
  if (!f || std::memcmp(magic, "DLRC", 4) != 0) return false;
  if (Index(caps[0]) != Index(params_.degree) || Index(caps[1]) != Index(params_.degree))
    return false;
  std::vector<double> dense(size_t(k_) * size_t(k_) * size_t(k_));
  f.read(reinterpret_cast<char*>(dense.data()), std::streamsize(dense.size() * sizeof(double)));
  if (!f) return false;
  triples_.assign(size_t(k_), {});
  for (Index k = 0; k < k_; ++k)
    for (Index l = 0; l < k_; ++l)
      for (Index m = l; m < k_; ++m) {
        const double c = dense[size_t((k * k_ + l) * k_ + m)];
        if (std::abs(c) < 1e-14) continue;
        triples_[size_t(k)].push_back({l, m, l == m ? 0.5 * c : c});
      }
  return true;
}

}  // namespace dlr::problems
