#pragma once

#include <future>
#include <utility>

#include "dlr/dense.hpp"
#include "dlr/low_rank.hpp"
#include "dlr/matrix_problem.hpp"
#include "dlr/runge_kutta.hpp"
#include "dlr/step_report.hpp"
#include "dlr/truncation.hpp"

namespace dlr {

struct StepOptions {
  // Record the projected-initial-value defect
  // |U^ S^(t0) V^H - U0 S0 V0^H|_F / |S0|_F in the step report
  // (diagnostics key "projected_initial_defect_rel"). The check densifies
  // the step's m x n difference and is skipped above 2^22 entries.
  bool check_projected_initial = true;
  // Integrate the K and L substeps on two threads. Off by default so runs
  // stay byte-deterministic without thread-count bookkeeping.
  bool parallel_kl = false;
};

namespace detail {

// Orthonormal basis with q columns whose span contains the range of `a`
// when q >= rank(a); plain Householder QR keeps all columns even when `a`
// is rank deficient, and the same nonnegative-diagonal sign convention as
// qr_factor keeps the result deterministic.
template <class Scalar>
OrthonormalBasis<Scalar> orth_columns(const Matrix<Scalar>& a, Index q) {
  require(q <= a.rows(), "requested more basis columns than rows");
  require(all_finite(a), "non-finite input");
  Eigen::HouseholderQR<Matrix<Scalar>> qr(a);
  Matrix<Scalar> full_q = qr.householderQ() * Matrix<Scalar>::Identity(a.rows(), q);
  const Index diag_len = std::min(q, std::min(a.rows(), a.cols()));
  for (Index j = 0; j < diag_len; ++j)
    if (std::real(Scalar(qr.matrixQR()(j, j))) < 0) full_q.col(j) = -full_q.col(j);
  return OrthonormalBasis<Scalar>(std::move(full_q));
}

template <class Scalar>
void record_projected_initial_defect(const LowRankFactor<Scalar>& y0,
                                     const OrthonormalBasis<Scalar>& u_hat,
                                     const Matrix<Scalar>& s_hat0,
                                     const OrthonormalBasis<Scalar>& v_hat,
                                     StepReport& report) {
  if (y0.rows() * y0.cols() > (Index(1) << 22)) return;
  const Matrix<Scalar> diff =
      u_hat.matrix() * s_hat0 * v_hat.matrix().adjoint() - y0.reconstruct();
  report.diagnostics["projected_initial_defect_rel"] =
      diff.norm() / std::max(y0.S.norm(), 1e-300);
}

}  // namespace detail

// One step of the rank-adaptive integrator: basis augmentation by parallel
// K- and L-substeps, Galerkin S-substep in the augmented subspace, then SVD
// truncation to the policy tolerance. Rank at most doubles per step; the
// augmented basis is capped at min(m, n) columns. When `augmented_out` is
// non-null it receives the rank-2r Galerkin solution U^ S^(t1) V^H before
// truncation (the structure monitors evaluate energies on it).
template <class Scalar>
std::pair<LowRankFactor<Scalar>, StepReport> adaptive_matrix_step(
    const LowRankFactor<Scalar>& y0, const MatrixProblem<Scalar>& problem, double t0, double h,
    const SubstepMethod& method, const TruncationPolicy& policy, const StepOptions& options = {},
    LowRankFactor<Scalar>* augmented_out = nullptr) {
  require(h > 0, "stepsize must be positive");
  const Index m = y0.rows(), n = y0.cols(), r = y0.rank();
  require(m == problem.rows && n == problem.cols, "factor/problem shape mismatch");
  const Index q = std::min(2 * r, std::min(m, n));

  const Matrix<Scalar>& u0 = y0.U.matrix();
  const Matrix<Scalar>& v0 = y0.V.matrix();

  auto integrate_k = [&] {
    Matrix<Scalar> k0 = u0 * y0.S;
    return rk_integrate([&](double t, const Matrix<Scalar>& k) { return problem.eval_K(t, k, v0); },
                        std::move(k0), t0, h, method, "K-step");
  };
  auto integrate_l = [&] {
    Matrix<Scalar> l0 = v0 * y0.S.adjoint();
    return rk_integrate([&](double t, const Matrix<Scalar>& l) { return problem.eval_L(t, l, u0); },
                        std::move(l0), t0, h, method, "L-step");
  };

  Matrix<Scalar> k1, l1;
  if (options.parallel_kl) {
    auto k_future = std::async(std::launch::async, integrate_k);
    l1 = integrate_l();
    k1 = k_future.get();
  } else {
    k1 = integrate_k();
    l1 = integrate_l();
  }

  OrthonormalBasis<Scalar> u_hat = detail::orth_columns(hstack(k1, u0), q);
  OrthonormalBasis<Scalar> v_hat = detail::orth_columns(hstack(l1, v0), q);
  Matrix<Scalar> m_hat = u_hat.matrix().adjoint() * u0;
  Matrix<Scalar> n_hat = v_hat.matrix().adjoint() * v0;

  Matrix<Scalar> s_hat0 = m_hat * y0.S * n_hat.adjoint();

  StepReport report;
  report.t_start = t0;
  report.t_end = t0 + h;
  report.rank_before = r;
  report.rank_augmented = q;
  if (options.check_projected_initial)
    detail::record_projected_initial_defect(y0, u_hat, s_hat0, v_hat, report);

  Matrix<Scalar> s_hat1 = rk_integrate(
      [&](double t, const Matrix<Scalar>& s) {
        return problem.eval_S(t, s, u_hat.matrix(), v_hat.matrix());
      },
      std::move(s_hat0), t0, h, method, "S-step");

  if (augmented_out) *augmented_out = {u_hat, s_hat1, v_hat};

  TruncationResult<Scalar> trunc = truncate_detailed(s_hat1, u_hat, v_hat, policy);
  report.rank_after = trunc.factor.rank();
  report.discarded_mass = trunc.discarded_mass;
  report.sigma = trunc.factor.S.diagonal().real();
  report.diagnostics["theta"] = trunc.theta;
  return {std::move(trunc.factor), std::move(report)};
}

// One step of the fixed-rank predecessor: identical K/L/S structure but the
// bases are rebuilt from K(t1) and L(t1) alone (no augmentation by U0, V0)
// and there is no truncation, so the rank never changes.
template <class Scalar>
std::pair<LowRankFactor<Scalar>, StepReport> fixed_rank_matrix_step(
    const LowRankFactor<Scalar>& y0, const MatrixProblem<Scalar>& problem, double t0, double h,
    const SubstepMethod& method, const StepOptions& options = {}) {
  require(h > 0, "stepsize must be positive");
  const Index m = y0.rows(), n = y0.cols(), r = y0.rank();
  require(m == problem.rows && n == problem.cols, "factor/problem shape mismatch");
  require(r <= std::min(m, n), "rank exceeds matrix dimensions");

  const Matrix<Scalar>& u0 = y0.U.matrix();
  const Matrix<Scalar>& v0 = y0.V.matrix();

  auto integrate_k = [&] {
    Matrix<Scalar> k0 = u0 * y0.S;
    return rk_integrate([&](double t, const Matrix<Scalar>& k) { return problem.eval_K(t, k, v0); },
                        std::move(k0), t0, h, method, "K-step");
  };
  auto integrate_l = [&] {
    Matrix<Scalar> l0 = v0 * y0.S.adjoint();
    return rk_integrate([&](double t, const Matrix<Scalar>& l) { return problem.eval_L(t, l, u0); },
                        std::move(l0), t0, h, method, "L-step");
  };

  Matrix<Scalar> k1, l1;
  if (options.parallel_kl) {
    auto k_future = std::async(std::launch::async, integrate_k);
    l1 = integrate_l();
    k1 = k_future.get();
  } else {
    k1 = integrate_k();
    l1 = integrate_l();
  }

  OrthonormalBasis<Scalar> u1 = detail::orth_columns(k1, r);
  OrthonormalBasis<Scalar> v1 = detail::orth_columns(l1, r);
  Matrix<Scalar> m_hat = u1.matrix().adjoint() * u0;
  Matrix<Scalar> n_hat = v1.matrix().adjoint() * v0;

  StepReport report;
  report.t_start = t0;
  report.t_end = t0 + h;
  report.rank_before = r;
  report.rank_augmented = r;
  report.rank_after = r;

  Matrix<Scalar> s0 = m_hat * y0.S * n_hat.adjoint();
  Matrix<Scalar> s1 = rk_integrate(
      [&](double t, const Matrix<Scalar>& s) { return problem.eval_S(t, s, u1.matrix(), v1.matrix()); },
      std::move(s0), t0, h, method, "S-step");

  report.sigma = singular_values(s1);
  LowRankFactor<Scalar> y1{std::move(u1), std::move(s1), std::move(v1)};
  return {std::move(y1), std::move(report)};
}

}  // namespace dlr
