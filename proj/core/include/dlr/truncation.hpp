#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "dlr/dense.hpp"
#include "dlr/low_rank.hpp"

namespace dlr {

enum class TruncationMode {
  Absolute,          // theta = tau
  RelativeSpectral,  // theta = tau * sigma_1(S_hat)
};

struct TruncationPolicy {
  TruncationMode mode = TruncationMode::Absolute;
  double tau = 0.0;
  Index r_min = 1;
  Index r_max = std::numeric_limits<Index>::max();

  double theta(const RealVector& sigma) const {
    if (mode == TruncationMode::RelativeSpectral)
      return tau * (sigma.size() > 0 ? sigma(0) : 0.0);
    return tau;
  }
};

struct RankChoice {
  Index rank = 0;
  double discarded_mass = 0.0;  // sqrt(sum of discarded sigma_j^2)
};

// Minimal rank r1 with (sum_{j>r1} sigma_j^2)^{1/2} <= theta (ties accept),
// then clamped to [r_min, r_max]. discarded_mass reflects the clamped rank.
inline RankChoice pick_rank(const RealVector& sigma, double theta, Index r_min, Index r_max) {
  const Index n = sigma.size();
  RealVector tail_sq(n + 1);
  tail_sq(n) = 0.0;
  for (Index j = n - 1; j >= 0; --j) tail_sq(j) = tail_sq(j + 1) + sigma(j) * sigma(j);
  Index r1 = n;
  for (Index r = 0; r <= n; ++r) {
    if (std::sqrt(tail_sq(r)) <= theta) {
      r1 = r;
      break;
    }
  }
  r1 = std::clamp(r1, std::min(std::max<Index>(r_min, 1), n), std::min(r_max, n));
  return {r1, std::sqrt(tail_sq(r1))};
}

template <class Scalar>
struct TruncationResult {
  LowRankFactor<Scalar> factor;
  double discarded_mass = 0.0;
  double theta = 0.0;     // tolerance actually applied
  RealVector sigma_full;  // all singular values of S_hat
};

// Truncation step: SVD of S_hat, tail-norm rank rule, and rotation of the
// augmented bases onto the retained singular vectors. S of the result is
// diagonal with descending entries.
template <class Scalar>
TruncationResult<Scalar> truncate_detailed(const Matrix<Scalar>& s_hat,
                                           const OrthonormalBasis<Scalar>& u_hat,
                                           const OrthonormalBasis<Scalar>& v_hat,
                                           const TruncationPolicy& policy) {
  require(u_hat.cols() == s_hat.rows() && v_hat.cols() == s_hat.cols(),
          "truncate: inconsistent shapes");
  SvdFactors<Scalar> f = svd(s_hat);
  const double theta = policy.theta(f.sigma);
  const RankChoice choice = pick_rank(f.sigma, theta, policy.r_min, policy.r_max);
  const Index r1 = choice.rank;
  LowRankFactor<Scalar> y1{
      OrthonormalBasis<Scalar>(u_hat.matrix() * f.u.matrix().leftCols(r1)),
      Matrix<Scalar>(f.sigma.head(r1).template cast<Scalar>().asDiagonal()),
      OrthonormalBasis<Scalar>(v_hat.matrix() * f.v.matrix().leftCols(r1))};
  return {std::move(y1), choice.discarded_mass, theta, std::move(f.sigma)};
}

template <class Scalar>
std::pair<LowRankFactor<Scalar>, double> truncate(const Matrix<Scalar>& s_hat,
                                                  const OrthonormalBasis<Scalar>& u_hat,
                                                  const OrthonormalBasis<Scalar>& v_hat,
                                                  const TruncationPolicy& policy) {
  TruncationResult<Scalar> res = truncate_detailed(s_hat, u_hat, v_hat, policy);
  return {std::move(res.factor), res.discarded_mass};
}

}  // namespace dlr
