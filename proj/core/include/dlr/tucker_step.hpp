#pragma once

#include <future>
#include <numeric>
#include <utility>

#include "dlr/matrix_step.hpp"
#include "dlr/runge_kutta.hpp"
#include "dlr/step_report.hpp"
#include "dlr/truncation.hpp"
#include "dlr/tucker.hpp"

namespace dlr {

struct TuckerStepOptions {
  bool check_projected_initial = true;
  // Run the d mode K-steps on separate threads (they are independent).
  bool parallel_k = false;
  // Truncation processes modes sequentially; the order is configurable
  // because the result depends on it in general. Empty means 0..d-1.
  std::vector<int> truncation_order;
  // Execution order of the K-steps. Results are order-independent; the
  // override exists so tests can assert exactly that.
  std::vector<int> kstep_order;
};

namespace detail {

inline std::vector<int> order_or_default(const std::vector<int>& order, int d) {
  if (order.empty()) {
    auto def = std::vector<int>(size_t(d));
    std::iota(def.begin(), def.end(), 0);
    return def;
  }
  require(int(order.size()) == d, "mode order must list every mode once");
  return order;
}

}  // namespace detail

// Sequential mode-wise truncation of an augmented core: for each mode in
// order, SVD of the current core's mode-i matricization, tail rule with
// per-mode budget theta/d, then rotation of that mode's basis. Total
// reconstruction error is at most the sum of per-mode discarded masses.
template <class Scalar>
std::pair<TuckerFactor<Scalar>, std::vector<double>> truncate_tucker(
    const Tensor<Scalar>& c_hat, const std::vector<OrthonormalBasis<Scalar>>& u_hats,
    const TruncationPolicy& policy, const std::vector<int>& order = {}) {
  const int d = c_hat.order();
  require(int(u_hats.size()) == d, "one basis per mode required");
  for (int i = 0; i < d; ++i)
    require(u_hats[size_t(i)].cols() == c_hat.dim(i), "basis/core shape mismatch");

  Tensor<Scalar> core = c_hat;
  auto new_bases = std::vector<Matrix<Scalar>>(size_t(d));
  for (int i = 0; i < d; ++i) new_bases[size_t(i)] = u_hats[size_t(i)].matrix();

  std::vector<double> discarded;
  for (int i : detail::order_or_default(order, d)) {
    SvdFactors<Scalar> dec = svd(matricize(core, i));
    const double theta_i = policy.theta(dec.sigma) / d;
    const RankChoice choice = pick_rank(dec.sigma, theta_i, policy.r_min, policy.r_max);
    const Index r1 = choice.rank;
    discarded.push_back(choice.discarded_mass);
    Matrix<Scalar> sq = dec.sigma.head(r1).template cast<Scalar>().asDiagonal() *
                        dec.v.matrix().leftCols(r1).adjoint();
    std::vector<Index> dims = core.dims();
    dims[size_t(i)] = r1;
    core = tensorize(i, sq, dims);
    new_bases[size_t(i)] = new_bases[size_t(i)] * dec.u.matrix().leftCols(r1);
  }

  TuckerFactor<Scalar> out;
  out.core = std::move(core);
  for (auto& b : new_bases) out.bases.emplace_back(std::move(b));
  return {std::move(out), std::move(discarded)};
}

// One step of the rank-adaptive Tucker integrator: per-mode K-steps with
// basis augmentation, a Galerkin step for the augmented core, and
// sequential mode-wise truncation with per-mode budget theta/d.
template <class Scalar>
std::pair<TuckerFactor<Scalar>, TuckerStepReport> adaptive_tucker_step(
    const TuckerFactor<Scalar>& y0, const TensorProblem<Scalar>& problem, double t0, double h,
    const SubstepMethod& method, const TruncationPolicy& policy,
    const TuckerStepOptions& options = {}, TuckerFactor<Scalar>* augmented_out = nullptr) {
  require(h > 0, "stepsize must be positive");
  const int d = y0.order();
  require(y0.dims() == problem.dims, "factor/problem shape mismatch");

  TuckerStepReport report;
  report.t_start = t0;
  report.t_end = t0 + h;
  report.rank_before = y0.ranks();

  // Mode K-steps (independent; may run in parallel).
  auto u_hats = std::vector<OrthonormalBasis<Scalar>>(size_t(d));
  auto m_hats = std::vector<Matrix<Scalar>>(size_t(d));
  auto run_mode = [&](int i) {
    const Index ri = y0.core.dim(i);
    const Index rest = y0.core.size() / ri;
    require(ri <= rest, "core is rank deficient along mode " + std::to_string(i));
    QrFactors<Scalar> wq = qr_factor(Matrix<Scalar>(matricize(y0.core, i).transpose()));
    const Matrix<Scalar>& w = wq.q.matrix();
    Matrix<Scalar> s0 = wq.r.transpose();
    Matrix<Scalar> k0 = y0.bases[size_t(i)].matrix() * s0;
    ModeFrame<Scalar> frame{i, w, y0.bases};
    Matrix<Scalar> k1 = rk_integrate(
        [&](double t, const Matrix<Scalar>& k) { return problem.eval_K(t, k, frame); },
        std::move(k0), t0, h, method, ("K-step mode " + std::to_string(i)).c_str());
    const Index qi = std::min(2 * ri, y0.bases[size_t(i)].rows());
    u_hats[size_t(i)] =
        detail::orth_columns(hstack(k1, y0.bases[size_t(i)].matrix()), qi);
    m_hats[size_t(i)] = u_hats[size_t(i)].matrix().adjoint() * y0.bases[size_t(i)].matrix();
  };

  const std::vector<int> korder = detail::order_or_default(options.kstep_order, d);
  if (options.parallel_k) {
    std::vector<std::future<void>> futures;
    for (int i : korder)
      futures.push_back(std::async(std::launch::async, [&, i] { run_mode(i); }));
    for (auto& f : futures) f.get();
  } else {
    for (int i : korder) run_mode(i);
  }
  for (int i = 0; i < d; ++i) report.rank_augmented.push_back(u_hats[size_t(i)].cols());

  // Augmented core step.
  Tensor<Scalar> c_hat0 = y0.core;
  for (int i = 0; i < d; ++i) c_hat0 = mode_product(c_hat0, i, m_hats[size_t(i)]);

  if (options.check_projected_initial) {
    Index total = 1;
    for (Index nd : problem.dims) total *= nd;
    if (total <= (Index(1) << 22)) {
      Tensor<Scalar> projected = c_hat0;
      for (int i = 0; i < d; ++i)
        projected = mode_product(projected, i, u_hats[size_t(i)].matrix());
      report.diagnostics["projected_initial_defect_rel"] =
          frobenius_norm(projected - y0.reconstruct()) /
          std::max(frobenius_norm(y0.core), 1e-300);
    }
  }

  std::vector<Matrix<Scalar>> u_hat_mats;
  for (const auto& b : u_hats) u_hat_mats.push_back(b.matrix());
  Tensor<Scalar> c_hat1 = rk_integrate(
      [&](double t, const Tensor<Scalar>& c) { return problem.eval_core(t, c, u_hat_mats); },
      std::move(c_hat0), t0, h, method, "core step");

  if (augmented_out) *augmented_out = {c_hat1, u_hats};

  auto [y1, discarded] = truncate_tucker(c_hat1, u_hats, policy, options.truncation_order);
  report.rank_after = y1.ranks();
  report.discarded_mass = std::move(discarded);
  return {std::move(y1), std::move(report)};
}

}  // namespace dlr
