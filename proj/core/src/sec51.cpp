#include "dlr/problems/sec51.hpp"

#include <cmath>
#include <random>

#include "dlr/linear_problem.hpp"

namespace dlr::problems {

RealMatrix symmetric_flow_reference(const RealMatrix& b, const RealMatrix& y0, double t) {
  require((b - b.transpose()).norm() <= 1e-12 * std::max(1.0, b.norm()),
          "symmetric coefficient matrix required");
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(b);
  const RealMatrix e = eig.eigenvectors() *
                       (-t * eig.eigenvalues().array()).exp().matrix().asDiagonal() *
                       eig.eigenvectors().transpose();
  return e * y0 * e.transpose();
}

Sec51Problem::Sec51Problem(Index n, std::uint64_t seed) : n_(n), seed_(seed) {
  require(n >= 2 && n % 2 == 0, "sec51: n must be even and >= 2");

  RealMatrix d = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    d(i, i) = 2.0;
    if (i + 1 < n) {
      d(i, i + 1) = -1.0;
      d(i + 1, i) = -1.0;
    }
  }
  RealMatrix vcos = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const double j = double(i) - double(n) / 2.0;  // j = -n/2 .. n/2-1
    vcos(i, i) = 1.0 - std::cos(2.0 * M_PI * j / double(n));
  }
  b_ = vcos - 0.5 * d;

  std::mt19937_64 rng(seed);
  u0_ = random_orthonormal<double>(n, n, rng).matrix();
  v0_ = random_orthonormal<double>(n, n, rng).matrix();
  s0_ = RealVector(n);
  for (Index i = 0; i < n; ++i) s0_(i) = std::pow(10.0, -double(i + 1));

  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(b_);
  evecs_ = eig.eigenvectors();
  evals_ = eig.eigenvalues();
}

MatrixProblem<double> Sec51Problem::problem() const {
  return make_sylvester_problem<double>(sparse_from_dense(b_), sparse_from_dense(b_), -1.0);
}

MatrixProblem<Complex> Sec51Problem::schroedinger_problem() const {
  ComplexMatrix bc = b_.cast<Complex>();
  return make_sylvester_problem<Complex>(sparse_from_dense(bc), sparse_from_dense(bc),
                                         Complex(0.0, -1.0));
}

RealMatrix Sec51Problem::a0() const {
  return u0_ * s0_.asDiagonal() * v0_.transpose();
}

LowRankFactor<double> Sec51Problem::initial(Index r) const {
  require(r >= 1 && r <= n_, "rank out of range");
  return {OrthonormalBasis<double>(u0_.leftCols(r)),
          RealMatrix(s0_.head(r).asDiagonal()),
          OrthonormalBasis<double>(v0_.leftCols(r))};
}

LowRankFactor<double> Sec51Problem::symmetric_initial(Index r) const {
  require(r >= 1 && r <= n_, "rank out of range");
  return {OrthonormalBasis<double>(u0_.leftCols(r)),
          RealMatrix(s0_.head(r).asDiagonal()),
          OrthonormalBasis<double>(u0_.leftCols(r))};
}

LowRankFactor<Complex> Sec51Problem::schroedinger_initial(Index r, std::uint64_t seed) const {
  require(r >= 1 && r <= n_, "rank out of range");
  std::mt19937_64 rng(seed);
  OrthonormalBasis<Complex> u = random_orthonormal<Complex>(n_, r, rng);
  OrthonormalBasis<Complex> v = random_orthonormal<Complex>(n_, r, rng);
  RealVector sigma(r);
  for (Index i = 0; i < r; ++i) sigma(i) = std::pow(2.0, -double(i));
  sigma /= sigma.norm();  // |Y0|_F = 1
  return {std::move(u), ComplexMatrix(sigma.cast<Complex>().asDiagonal()), std::move(v)};
}

RealMatrix Sec51Problem::propagator(double t) const {
  return evecs_ * (-t * evals_.array()).exp().matrix().asDiagonal() * evecs_.transpose();
}

RealMatrix Sec51Problem::reference(double t) const {
  const RealMatrix e = propagator(t);
  return e * a0() * e.transpose();
}

ComplexMatrix Sec51Problem::hamiltonian_map(const ComplexMatrix& y) const {
  return b_.cast<Complex>() * y + y * b_.cast<Complex>();
}

}  // namespace dlr::problems
