#include "dlr/problems/synthetic.hpp"

#include <random>

#include "dlr/error.hpp"

namespace dlr::problems {

SyntheticMatrixPath::SyntheticMatrixPath(Index m, Index n, Index r, std::uint64_t seed)
    : m_(m), n_(n), r_(r) {
  require(r >= 1 && r <= std::min(m, n), "rank out of range");
  std::mt19937_64 rng(seed);
  l0_ = random_gaussian<double>(m, r, rng);
  l1_ = 0.5 * random_gaussian<double>(m, r, rng);
  l2_ = 0.25 * random_gaussian<double>(m, r, rng);
  r0_ = random_gaussian<double>(n, r, rng);
  r1_ = 0.5 * random_gaussian<double>(n, r, rng);
}

RealMatrix SyntheticMatrixPath::value(double t) const {
  const RealMatrix l = l0_ + t * l1_ + (t * t) * l2_;
  const RealMatrix r = r0_ + t * r1_;
  return l * r.transpose();
}

RealMatrix SyntheticMatrixPath::derivative(double t) const {
  const RealMatrix l = l0_ + t * l1_ + (t * t) * l2_;
  const RealMatrix dl = l1_ + (2.0 * t) * l2_;
  const RealMatrix r = r0_ + t * r1_;
  return dl * r.transpose() + l * r1_.transpose();
}

LowRankFactor<double> SyntheticMatrixPath::factor(double t) const {
  const RealMatrix l = l0_ + t * l1_ + (t * t) * l2_;
  const RealMatrix r = r0_ + t * r1_;
  return LowRankFactor<double>::from_product(l, r);
}

MatrixProblem<double> SyntheticMatrixPath::problem() const {
  MatrixProblem<double> p;
  p.rows = m_;
  p.cols = n_;
  const SyntheticMatrixPath self = *this;
  p.rhs_dense = [self](double t, const RealMatrix&) { return self.derivative(t); };
  return p;
}

double SyntheticMatrixPath::min_singular_value(double t) const {
  const RealVector sv = singular_values(value(t));
  return sv(sv.size() - 1);
}

double SyntheticMatrixPath::basis_overlap(double t0, double t1) const {
  const LowRankFactor<double> f0 = factor(t0);
  const LowRankFactor<double> f1 = factor(t1);
  const RealVector su = singular_values(
      RealMatrix(f1.U.matrix().transpose() * f0.U.matrix()));
  const RealVector sv = singular_values(
      RealMatrix(f1.V.matrix().transpose() * f0.V.matrix()));
  return std::min(su(su.size() - 1), sv(sv.size() - 1));
}

SyntheticTuckerPath::SyntheticTuckerPath(std::vector<Index> dims, std::vector<Index> ranks,
                                         std::uint64_t seed)
    : dims_(std::move(dims)), ranks_(std::move(ranks)) {
  require(dims_.size() == ranks_.size(), "one rank per mode required");
  std::mt19937_64 rng(seed);
  core_ = Tensor<double>(ranks_);
  std::normal_distribution<double> dist;
  for (Index i = 0; i < core_.size(); ++i) core_[i] = dist(rng);
  for (size_t i = 0; i < dims_.size(); ++i) {
    m0_.push_back(random_gaussian<double>(dims_[i], ranks_[i], rng));
    m1_.push_back(0.5 * random_gaussian<double>(dims_[i], ranks_[i], rng));
  }
}

std::vector<Matrix<double>> SyntheticTuckerPath::factors(double t) const {
  std::vector<RealMatrix> ms;
  for (size_t i = 0; i < m0_.size(); ++i) ms.push_back(m0_[i] + t * m1_[i]);
  return ms;
}

Tensor<double> SyntheticTuckerPath::value(double t) const {
  return multi_mode_product(core_, factors(t));
}

Tensor<double> SyntheticTuckerPath::derivative(double t) const {
  // Product rule over the d linear factors.
  const std::vector<RealMatrix> ms = factors(t);
  Tensor<double> out(dims_);
  for (size_t k = 0; k < ms.size(); ++k) {
    std::vector<RealMatrix> mod = ms;
    mod[k] = m1_[k];
    out += multi_mode_product(core_, mod);
  }
  return out;
}

TuckerFactor<double> SyntheticTuckerPath::factor(double t) const {
  return TuckerFactor<double>::from_factors(core_, factors(t));
}

TensorProblem<double> SyntheticTuckerPath::problem() const {
  TensorProblem<double> p;
  p.dims = dims_;
  const SyntheticTuckerPath self = *this;
  p.rhs_dense = [self](double t, const Tensor<double>&) { return self.derivative(t); };
  return p;
}

GradientFlowProblem::GradientFlowProblem(Index m, Index n, Index target_rank, std::uint64_t seed)
    : m_(m), n_(n) {
  std::mt19937_64 rng(seed);
  target_ = random_gaussian<double>(m, target_rank, rng) *
            random_gaussian<double>(n, target_rank, rng).transpose();
}

double GradientFlowProblem::functional(const RealMatrix& y) const {
  return 0.5 * (y - target_).squaredNorm();
}

RealMatrix GradientFlowProblem::gradient(const RealMatrix& y) const { return y - target_; }

MatrixProblem<double> GradientFlowProblem::problem() const {
  MatrixProblem<double> p;
  p.rows = m_;
  p.cols = n_;
  const RealMatrix target = target_;
  p.rhs_dense = [target](double, const RealMatrix& y) { return RealMatrix(target - y); };
  return p;
}

LowRankFactor<double> GradientFlowProblem::initial(Index r, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  return LowRankFactor<double>::from_product(random_gaussian<double>(m_, r, rng),
                                             random_gaussian<double>(n_, r, rng));
}

HamiltonianSystem make_harmonic_chain(Index rows, Index cols, double dx) {
  RealMatrix a = RealMatrix::Zero(rows, rows);
  for (Index i = 0; i < rows; ++i) {
    a(i, i) = 2.0;
    if (i + 1 < rows) {
      a(i, i + 1) = -1.0;
      a(i + 1, i) = -1.0;
    }
  }
  a /= dx * dx;
  HamiltonianSystem sys;
  sys.rows = rows;
  sys.cols = cols;
  sys.h = [a](const RealMatrix& q, const RealMatrix& p) {
    return 0.5 * p.squaredNorm() + 0.5 * (q.array() * (a * q).array()).sum();
  };
  sys.grad_q = [a](const RealMatrix& q, const RealMatrix&) { return RealMatrix(a * q); };
  sys.grad_p = [](const RealMatrix&, const RealMatrix& p) { return p; };
  return sys;
}

LowRankFactor<Complex> random_complex_factor(Index m, Index n, Index r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OrthonormalBasis<Complex> u = random_orthonormal<Complex>(m, r, rng);
  OrthonormalBasis<Complex> v = random_orthonormal<Complex>(n, r, rng);
  RealVector sigma(r);
  for (Index i = 0; i < r; ++i) sigma(i) = std::pow(2.0, -double(i));
  sigma /= sigma.norm();
  return {std::move(u), ComplexMatrix(sigma.cast<Complex>().asDiagonal()), std::move(v)};
}

}  // namespace dlr::problems
