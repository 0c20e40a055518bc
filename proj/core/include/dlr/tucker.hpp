#pragma once

#include <functional>
#include <random>
#include <vector>

#include "dlr/dense.hpp"
#include "dlr/error.hpp"
#include "dlr/tensor.hpp"

namespace dlr {

// Tucker factorization: core tensor C (r_1 x ... x r_d) and d orthonormal
// basis matrices U_i (n_i x r_i), representing Y = C x_1 U_1 ... x_d U_d.
template <class Scalar>
struct TuckerFactor {
  Tensor<Scalar> core;
  std::vector<OrthonormalBasis<Scalar>> bases;

  int order() const { return core.order(); }

  std::vector<Index> dims() const {
    std::vector<Index> out;
    for (const auto& b : bases) out.push_back(b.rows());
    return out;
  }

  std::vector<Index> ranks() const { return core.dims(); }

  Tensor<Scalar> reconstruct() const {
    Tensor<Scalar> y = core;
    for (int i = 0; i < order(); ++i) y = mode_product(y, i, bases[size_t(i)].matrix());
    return y;
  }

  // Higher-order SVD truncated to the given multilinear rank.
  static TuckerFactor hosvd(const Tensor<Scalar>& a, const std::vector<Index>& ranks) {
    require(int(ranks.size()) == a.order(), "one rank per mode required");
    TuckerFactor f;
    Tensor<Scalar> c = a;
    f.bases.reserve(ranks.size());
    for (int i = 0; i < a.order(); ++i) {
      require(ranks[size_t(i)] >= 1 && ranks[size_t(i)] <= a.dim(i), "rank out of range");
      SvdFactors<Scalar> dec = svd(matricize(a, i));
      Matrix<Scalar> u = dec.u.matrix().leftCols(ranks[size_t(i)]);
      c = mode_product(c, i, Matrix<Scalar>(u.adjoint()));
      f.bases.emplace_back(std::move(u));
    }
    f.core = std::move(c);
    return f;
  }

  // Factorization of C x_i M_i with general (non-orthonormal) factors M_i:
  // QR each factor and absorb the triangular parts into the core.
  static TuckerFactor from_factors(Tensor<Scalar> c, const std::vector<Matrix<Scalar>>& ms) {
    require(int(ms.size()) == c.order(), "one factor per mode required");
    TuckerFactor f;
    f.bases.reserve(ms.size());
    for (int i = 0; i < c.order(); ++i) {
      QrFactors<Scalar> qr = qr_factor(ms[size_t(i)]);
      c = mode_product(c, i, qr.r);
      f.bases.push_back(std::move(qr.q));
    }
    f.core = std::move(c);
    return f;
  }
};

// Data the mode-i K-step hook may use: the co-range factor W_i from the QR
// of Mat_i(C0)^T and the frozen bases U_j^0.
template <class Scalar>
struct ModeFrame {
  int mode;
  const Matrix<Scalar>& w;
  const std::vector<OrthonormalBasis<Scalar>>& bases;
};

// Right-hand side F(t, Y) of a tensor differential equation with optional
// projected hooks, mirroring MatrixProblem. Synthesized evaluations realize
// K_i(t) V_i^{0,H} as a tensor contraction and never materialize the
// n_i x n_{not-i} matrix V_i^0.
template <class Scalar>
struct TensorProblem {
  std::vector<Index> dims;
  std::function<Tensor<Scalar>(double, const Tensor<Scalar>&)> rhs_dense;
  std::function<Matrix<Scalar>(double, const Matrix<Scalar>&, const ModeFrame<Scalar>&)> rhs_K;
  std::function<Tensor<Scalar>(double, const Tensor<Scalar>&,
                               const std::vector<Matrix<Scalar>>&)>
      rhs_core;

  Tensor<Scalar> eval_dense(double t, const Tensor<Scalar>& y) const {
    require(bool(rhs_dense), "problem has no dense right-hand side");
    return rhs_dense(t, y);
  }

  // d/dt K_i = Mat_i(F(t, Ten_i(K_i V_i^{0,H}))) V_i^0 with
  // Ten_i(K_i V_i^{0,H}) = Ten_i(K_i W^T) x_{j != i} U_j and
  // Mat_i(G) V_i^0 = Mat_i(G x_{j != i} U_j^H) conj(W).
  Matrix<Scalar> eval_K(double t, const Matrix<Scalar>& k, const ModeFrame<Scalar>& frame) const {
    if (rhs_K) return rhs_K(t, k, frame);
    const int i = frame.mode;
    std::vector<Index> small_dims;
    for (const auto& b : frame.bases) small_dims.push_back(b.cols());
    small_dims[size_t(i)] = k.rows();
    Tensor<Scalar> y = tensorize(i, Matrix<Scalar>(k * frame.w.transpose()), small_dims);
    for (int j = 0; j < int(frame.bases.size()); ++j)
      if (j != i) y = mode_product(y, j, frame.bases[size_t(j)].matrix());
    Tensor<Scalar> g = eval_dense(t, y);
    for (int j = 0; j < int(frame.bases.size()); ++j)
      if (j != i) g = mode_product(g, j, Matrix<Scalar>(frame.bases[size_t(j)].matrix().adjoint()));
    return matricize(g, i) * frame.w.conjugate();
  }

  // d/dt C^ = F(t, C^ x_i U^_i) x_i U^_i^H
  Tensor<Scalar> eval_core(double t, const Tensor<Scalar>& c,
                           const std::vector<Matrix<Scalar>>& u_hats) const {
    if (rhs_core) return rhs_core(t, c, u_hats);
    Tensor<Scalar> y = c;
    for (int i = 0; i < c.order(); ++i) y = mode_product(y, i, u_hats[size_t(i)]);
    Tensor<Scalar> g = eval_dense(t, y);
    for (int i = 0; i < c.order(); ++i)
      g = mode_product(g, i, Matrix<Scalar>(u_hats[size_t(i)].adjoint()));
    return g;
  }
};

// Largest relative disagreement between installed tensor hooks and their
// dense synthesis on random probes; the TensorProblem contract requires
// <= 1e-10.
template <class Scalar>
double hook_defect(const TensorProblem<Scalar>& p, std::mt19937_64& rng, int trials = 3,
                   Index r = 2, double t = 0.41) {
  double worst = 0.0;
  const int d = int(p.dims.size());
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<OrthonormalBasis<Scalar>> bases;
    std::vector<Index> ranks;
    for (int i = 0; i < d; ++i) {
      const Index ri = std::min(r, p.dims[size_t(i)]);
      bases.push_back(random_orthonormal<Scalar>(p.dims[size_t(i)], ri, rng));
      ranks.push_back(ri);
    }
    if (p.rhs_K) {
      for (int i = 0; i < d; ++i) {
        Index rest = 1;
        for (int j = 0; j < d; ++j)
          if (j != i) rest *= ranks[size_t(j)];
        if (rest < ranks[size_t(i)]) continue;
        Matrix<Scalar> w = random_orthonormal<Scalar>(rest, ranks[size_t(i)], rng).matrix();
        Matrix<Scalar> k = random_gaussian<Scalar>(p.dims[size_t(i)], ranks[size_t(i)], rng);
        ModeFrame<Scalar> frame{i, w, bases};
        Matrix<Scalar> a = p.rhs_K(t, k, frame);
        TensorProblem<Scalar> bare{p.dims, p.rhs_dense, nullptr, nullptr};
        Matrix<Scalar> b = bare.eval_K(t, k, frame);
        worst = std::max(worst, (a - b).norm() / std::max(b.norm(), 1e-30));
      }
    }
    if (p.rhs_core) {
      Tensor<Scalar> c(ranks);
      std::normal_distribution<double> dist;
      for (Index idx = 0; idx < c.size(); ++idx)
        c[idx] = Scalar(dist(rng));
      std::vector<Matrix<Scalar>> u_hats;
      for (const auto& b : bases) u_hats.push_back(b.matrix());
      Tensor<Scalar> a = p.rhs_core(t, c, u_hats);
      TensorProblem<Scalar> bare{p.dims, p.rhs_dense, nullptr, nullptr};
      Tensor<Scalar> b = bare.eval_core(t, c, u_hats);
      worst = std::max(worst, frobenius_norm(a - b) / std::max(frobenius_norm(b), 1e-30));
    }
  }
  return worst;
}

}  // namespace dlr
