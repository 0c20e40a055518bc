#include <doctest.h>

#include <random>

#include "dlr/dense.hpp"
#include "dlr/tensor.hpp"

using namespace dlr;

namespace {

template <class Scalar>
bool bitwise_equal(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(Scalar) * size_t(a.size())) == 0;
}

template <class Scalar>
Tensor<Scalar> random_tensor(const std::vector<Index>& dims, std::mt19937_64& rng) {
  Tensor<Scalar> t(dims);
  std::normal_distribution<double> dist;
  for (Index i = 0; i < t.size(); ++i) t[i] = Scalar(dist(rng));
  return t;
}

// Kronecker product, used to brute-force the matricization identity.
RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("qr_orth on already-orthonormal columns returns them") {
  RealMatrix m = RealMatrix::Identity(3, 3).leftCols(2);
  const OrthonormalBasis<double> q = qr_orth(m);
  CHECK((q.matrix() - m).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("qr_orth rescales scaled unit columns with positive signs") {
  RealMatrix m(3, 2);
  m << 2, 0, 0, 0, 0, 3;
  RealMatrix expected(3, 2);
  expected << 1, 0, 0, 0, 0, 1;
  const OrthonormalBasis<double> q = qr_orth(m);
  CHECK((q.matrix() - expected).norm() <= 1e-14);
}

TEST_CASE("qr_orth spans the range and is orthonormal on rank-deficient input") {
  std::mt19937_64 rng(7);
  const RealMatrix m = random_gaussian<double>(6, 2, rng) *
                       random_gaussian<double>(2, 4, rng);  // 6x4 of rank 2
  const OrthonormalBasis<double> q = qr_orth(m);
  CHECK(orthonormality_defect(q.matrix()) <= 1e-12);
  CHECK((q.matrix() * q.matrix().adjoint() * m - m).norm() <= 1e-12 * m.norm());
}

TEST_CASE("qr_orth is deterministic") {
  std::mt19937_64 rng(11);
  const RealMatrix m = random_gaussian<double>(9, 5, rng);
  CHECK(bitwise_equal(qr_orth(m).matrix(), qr_orth(m).matrix()));
}

TEST_CASE("qr rejects wide input") {
  CHECK_THROWS_WITH_AS(qr_orth(RealMatrix(RealMatrix::Zero(2, 4))), "k exceeds n", Error);
}

TEST_CASE("qr_factor reproduces the input with nonnegative diagonal") {
  std::mt19937_64 rng(3);
  SUBCASE("real") {
    const RealMatrix m = random_gaussian<double>(8, 4, rng);
    const QrFactors<double> f = qr_factor(m);
    CHECK((f.q.matrix() * f.r - m).norm() <= 1e-13 * m.norm());
    for (Index j = 0; j < 4; ++j) CHECK(f.r(j, j) >= 0.0);
  }
  SUBCASE("complex") {
    const ComplexMatrix m = random_gaussian<Complex>(8, 4, rng);
    const QrFactors<Complex> f = qr_factor(m);
    CHECK((f.q.matrix() * f.r - m).norm() <= 1e-13 * m.norm());
    CHECK(orthonormality_defect(f.q.matrix()) <= 1e-13);
    for (Index j = 0; j < 4; ++j) {
      CHECK(std::real(f.r(j, j)) >= 0.0);
      CHECK(std::abs(std::imag(f.r(j, j))) <= 1e-14 * m.norm());
    }
  }
}

TEST_CASE("svd of simple matrices") {
  SUBCASE("diagonal") {
    RealMatrix m = RealMatrix::Zero(2, 2);
    m(0, 0) = 3;
    m(1, 1) = 1;
    const SvdFactors<double> f = svd(m);
    CHECK(f.sigma(0) == doctest::Approx(3.0));
    CHECK(f.sigma(1) == doctest::Approx(1.0));
  }
  SUBCASE("zero") {
    const SvdFactors<double> f = svd(RealMatrix(RealMatrix::Zero(2, 2)));
    CHECK(f.sigma(0) == 0.0);
    CHECK(f.sigma(1) == 0.0);
  }
  SUBCASE("rank one ones") {
    // Eigenvalues of M^T M are 4 and 0, so the singular values are 2 and 0.
    RealMatrix m(2, 2);
    m << 1, 1, 1, 1;
    const SvdFactors<double> f = svd(m);
    CHECK(f.sigma(0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(f.sigma(1) <= 1e-14);
  }
}

TEST_CASE("svd reconstructs and matches the eigen-decomposition route") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 3; ++trial) {
    const RealMatrix m = random_gaussian<double>(7, 5, rng);
    const SvdFactors<double> f = svd(m);
    const RealMatrix rec =
        f.u.matrix() * f.sigma.asDiagonal() * f.v.matrix().adjoint();
    CHECK((rec - m).norm() <= 1e-12 * m.norm());
    for (Index j = 0; j + 1 < f.sigma.size(); ++j) CHECK(f.sigma(j) >= f.sigma(j + 1));

    // Independent oracle: singular values are square roots of the
    // eigenvalues of M^H M.
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(RealMatrix(m.adjoint() * m));
    RealVector expected = eig.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
    for (Index j = 0; j < f.sigma.size(); ++j)
      CHECK(f.sigma(j) == doctest::Approx(expected(j)).epsilon(1e-10));
  }
}

TEST_CASE("svd rejects non-finite input") {
  RealMatrix m = RealMatrix::Zero(2, 2);
  m(0, 1) = std::nan("");
  CHECK_THROWS_WITH_AS(svd(m), "non-finite input", Error);
}

TEST_CASE("matricize of an order-2 tensor is the matrix itself") {
  std::mt19937_64 rng(23);
  const RealMatrix m = random_gaussian<double>(4, 5, rng);
  const Tensor<double> t = tensor_from_matrix(m);
  CHECK(bitwise_equal(matricize(t, 0), m));
  CHECK(bitwise_equal(matricize(t, 1), RealMatrix(m.transpose())));
}

TEST_CASE("matricize of a rank-one unit tensor") {
  Tensor<double> t({2, 2, 2});
  t.at({0, 0, 0}) = 1.0;
  const RealMatrix m = matricize(t, 1);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 4);
  CHECK(m(0, 0) == 1.0);
  CHECK(m.norm() == 1.0);
}

TEST_CASE("matricize and tensorize are mutually inverse") {
  std::mt19937_64 rng(29);
  const std::vector<std::vector<Index>> shapes = {{2, 3, 4}, {3, 2, 2}, {5, 4}, {2, 2, 2, 3}};
  for (const auto& dims : shapes) {
    const Tensor<double> t = random_tensor<double>(dims, rng);
    for (int mode = 0; mode < t.order(); ++mode) {
      const Tensor<double> back = tensorize(mode, matricize(t, mode), dims);
      REQUIRE(back.size() == t.size());
      bool equal = true;
      for (Index i = 0; i < t.size(); ++i) equal = equal && back[i] == t[i];
      CHECK(equal);
    }
  }
}

TEST_CASE("tensorize rejects shape mismatches and zero maps to zero") {
  std::mt19937_64 rng(43);
  CHECK_THROWS_AS(tensorize(0, RealMatrix(RealMatrix::Zero(2, 5)), {2, 2, 2}), Error);
  CHECK_THROWS_AS(matricize(random_tensor<double>({2, 2}, rng), 2), Error);
  const Tensor<double> z = tensorize(0, RealMatrix(RealMatrix::Zero(2, 4)), {2, 2, 2});
  CHECK(frobenius_norm(z) == 0.0);
}

TEST_CASE("mode_product with identity and order-2 equivalence") {
  std::mt19937_64 rng(31);
  const Tensor<double> t = random_tensor<double>({3, 4, 2}, rng);
  const Tensor<double> same = mode_product(t, 1, RealMatrix(RealMatrix::Identity(4, 4)));
  bool equal = true;
  for (Index i = 0; i < t.size(); ++i) equal = equal && same[i] == t[i];
  CHECK(equal);

  const RealMatrix m = random_gaussian<double>(6, 3, rng);
  const Tensor<double> t2 = random_tensor<double>({3, 5}, rng);
  const Tensor<double> prod = mode_product(t2, 0, m);
  CHECK((matrix_from_tensor(prod) - m * matrix_from_tensor(t2)).norm() <= 1e-14);
}

TEST_CASE("mode products match the Kronecker matricization identity") {
  // Mat_i(C x_j U_j) = U_i Mat_i(C) (kron of the remaining U_j in
  // decreasing mode order)^T; decreasing order pairs with the convention
  // that the lowest remaining mode varies fastest.
  std::mt19937_64 rng(37);
  const Tensor<double> c = random_tensor<double>({2, 2, 2}, rng);
  const std::vector<RealMatrix> u = {random_gaussian<double>(3, 2, rng),
                                     random_gaussian<double>(4, 2, rng),
                                     random_gaussian<double>(5, 2, rng)};
  const Tensor<double> y = multi_mode_product(c, u);
  for (int i = 0; i < 3; ++i) {
    RealMatrix kron_rest;
    bool first = true;
    for (int j = 2; j >= 0; --j) {
      if (j == i) continue;
      kron_rest = first ? u[size_t(j)] : RealMatrix(kron(kron_rest, u[size_t(j)]));
      first = false;
    }
    const RealMatrix lhs = matricize(y, i);
    const RealMatrix rhs = u[size_t(i)] * matricize(c, i) * kron_rest.transpose();
    CHECK((lhs - rhs).norm() <= 1e-13 * rhs.norm());
  }
}

TEST_CASE("mode products over distinct modes commute") {
  std::mt19937_64 rng(41);
  const Tensor<double> t = random_tensor<double>({3, 4, 5}, rng);
  const RealMatrix a = random_gaussian<double>(2, 3, rng);
  const RealMatrix b = random_gaussian<double>(6, 4, rng);
  const Tensor<double> ab = mode_product(mode_product(t, 0, a), 1, b);
  const Tensor<double> ba = mode_product(mode_product(t, 1, b), 0, a);
  CHECK(frobenius_norm(ab - ba) <= 1e-13 * frobenius_norm(ab));
}

TEST_CASE("frobenius norms") {
  CHECK(frobenius_norm(RealMatrix(RealMatrix::Identity(3, 3))) ==
        doctest::Approx(std::sqrt(3.0)));
  CHECK(frobenius_norm(RealMatrix(RealMatrix::Zero(4, 2))) == 0.0);
  RealMatrix m(1, 2);
  m << 3, 4;
  CHECK(frobenius_norm(m) == doctest::Approx(5.0));

  // Complex inner product uses conjugation: |(i, 1)| = sqrt(2).
  ComplexMatrix c(1, 2);
  c(0, 0) = Complex(0, 1);
  c(0, 1) = Complex(1, 0);
  CHECK(frobenius_norm(c) == doctest::Approx(std::sqrt(2.0)));

  Tensor<Complex> t({2, 2});
  t[0] = Complex(0, 2);
  CHECK(frobenius_norm(t) == doctest::Approx(2.0));
}

TEST_CASE("orthonormal basis constructor enforces the column invariant") {
  RealMatrix bad = RealMatrix(3, 2);
  bad << 1, 1, 0, 0, 0, 0;
  CHECK_THROWS_AS(OrthonormalBasis<double>{bad}, Error);
}
