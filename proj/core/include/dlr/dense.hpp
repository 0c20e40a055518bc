#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <utility>

#include "dlr/error.hpp"

namespace dlr {

using Index = Eigen::Index;
using Real = double;
using Complex = std::complex<double>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RealMatrix = Matrix<Real>;
using ComplexMatrix = Matrix<Complex>;
using RealVector = Eigen::VectorXd;

// Real and complex fields share one code path. Adjoints are plain
// transposes over the reals and conjugate transposes over the complex
// numbers; Eigen's adjoint() implements exactly that, so every adjoint in
// the library routes through it.
enum class Field { Real, Complex };

template <class Scalar>
constexpr Field field_of() {
  return Eigen::NumTraits<Scalar>::IsComplex ? Field::Complex : Field::Real;
}

template <class Scalar>
double frobenius_norm(const Matrix<Scalar>& m) {
  return m.norm();
}

template <class Scalar>
bool all_finite(const Matrix<Scalar>& m) {
  return m.allFinite();
}

template <class Scalar>
Matrix<Scalar> hstack(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  require(a.rows() == b.rows(), "hstack: row count mismatch");
  Matrix<Scalar> out(a.rows(), a.cols() + b.cols());
  out.leftCols(a.cols()) = a;
  out.rightCols(b.cols()) = b;
  return out;
}

template <class Scalar>
double orthonormality_defect(const Matrix<Scalar>& q) {
  return (q.adjoint() * q - Matrix<Scalar>::Identity(q.cols(), q.cols())).norm();
}

// Matrix with orthonormal columns, |Q^H Q - I|_F <= 1e-10 * sqrt(k).
// Constructed by the QR/SVD routines below; the constructor re-checks the
// invariant so a defective basis cannot propagate.
template <class Scalar>
class OrthonormalBasis {
 public:
  OrthonormalBasis() = default;
  explicit OrthonormalBasis(Matrix<Scalar> q) : q_(std::move(q)) {
    require(orthonormality_defect(q_) <= 1e-10 * std::sqrt(double(q_.cols())),
            "matrix does not have orthonormal columns");
  }

  Index rows() const { return q_.rows(); }
  Index cols() const { return q_.cols(); }
  const Matrix<Scalar>& matrix() const { return q_; }

 private:
  Matrix<Scalar> q_;
};

template <class Scalar>
struct QrFactors {
  OrthonormalBasis<Scalar> q;
  Matrix<Scalar> r;  // k x k upper triangular, nonnegative real diagonal
};

// Householder QR of an n x k matrix, k <= n, with the sign convention that
// the diagonal of R is nonnegative. The convention makes the factorization
// deterministic: identical input bytes give identical output bytes, which
// the symmetry-preservation tests rely on.
template <class Scalar>
QrFactors<Scalar> qr_factor(const Matrix<Scalar>& m) {
  require(m.cols() <= m.rows(), "k exceeds n");
  require(all_finite(m), "non-finite input");
  const Index n = m.rows(), k = m.cols();
  Eigen::HouseholderQR<Matrix<Scalar>> qr(m);
  Matrix<Scalar> q = qr.householderQ() * Matrix<Scalar>::Identity(n, k);
  Matrix<Scalar> r = qr.matrixQR()
                         .topRows(k)
                         .template triangularView<Eigen::Upper>();
  for (Index j = 0; j < k; ++j) {
    if (std::real(Scalar(r(j, j))) < 0) {
      q.col(j) = -q.col(j);
      r.row(j) = -r.row(j);
    }
  }
  return {OrthonormalBasis<Scalar>(std::move(q)), std::move(r)};
}

template <class Scalar>
OrthonormalBasis<Scalar> qr_orth(const Matrix<Scalar>& m) {
  return qr_factor(m).q;
}

template <class Scalar>
struct SvdFactors {
  OrthonormalBasis<Scalar> u;
  RealVector sigma;  // nonincreasing, nonnegative
  OrthonormalBasis<Scalar> v;
};

// Thin SVD, m = U diag(sigma) V^H with sigma sorted descending.
template <class Scalar>
SvdFactors<Scalar> svd(const Matrix<Scalar>& m) {
  require(all_finite(m), "non-finite input");
  Eigen::JacobiSVD<Matrix<Scalar>> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {OrthonormalBasis<Scalar>(dec.matrixU()), dec.singularValues(),
          OrthonormalBasis<Scalar>(dec.matrixV())};
}

template <class Scalar>
RealVector singular_values(const Matrix<Scalar>& m) {
  require(all_finite(m), "non-finite input");
  Eigen::JacobiSVD<Matrix<Scalar>> dec(m);
  return dec.singularValues();
}

// Seeded dense Gaussian matrix; complex entries are (g1 + i g2)/sqrt(2).
template <class Scalar>
Matrix<Scalar> random_gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix<Scalar> m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      if constexpr (field_of<Scalar>() == Field::Complex) {
        const double re = dist(rng), im = dist(rng);
        m(i, j) = Scalar(re, im) / std::sqrt(2.0);
      } else {
        m(i, j) = dist(rng);
      }
    }
  return m;
}

template <class Scalar>
OrthonormalBasis<Scalar> random_orthonormal(Index n, Index k, std::mt19937_64& rng) {
  return qr_orth(random_gaussian<Scalar>(n, k, rng));
}

}  // namespace dlr
