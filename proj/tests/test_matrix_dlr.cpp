#include <doctest.h>

#include <cmath>
#include <random>

#include "dlr/linear_problem.hpp"
#include "dlr/low_rank.hpp"
#include "dlr/matrix_step.hpp"
#include "dlr/problems/sec51.hpp"
#include "dlr/problems/synthetic.hpp"
#include "dlr/runge_kutta.hpp"
#include "dlr/truncation.hpp"

using namespace dlr;

namespace {

template <class Scalar>
bool bitwise_equal(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(Scalar) * size_t(a.size())) == 0;
}

LowRankFactor<double> random_factor(Index m, Index n, const RealVector& sigma,
                                    std::mt19937_64& rng) {
  return {random_orthonormal<double>(m, sigma.size(), rng),
          RealMatrix(sigma.asDiagonal()),
          random_orthonormal<double>(n, sigma.size(), rng)};
}

MatrixProblem<double> zero_problem(Index m, Index n) {
  MatrixProblem<double> p;
  p.rows = m;
  p.cols = n;
  p.rhs_dense = [](double, const RealMatrix& y) { return RealMatrix(RealMatrix::Zero(y.rows(), y.cols())); };
  return p;
}

}  // namespace

TEST_CASE("rk_integrate leaves the state unchanged for a zero field") {
  RealMatrix x0 = RealMatrix::Constant(2, 2, 1.25);
  for (RkKind kind : {RkKind::RK1Euler, RkKind::RK2Heun, RkKind::RK4}) {
    const RealMatrix x1 = rk_integrate(
        [](double, const RealMatrix& x) { return RealMatrix(RealMatrix::Zero(x.rows(), x.cols())); },
        x0, 0.0, 0.7, {kind, 3});
    CHECK(bitwise_equal(x0, x1));
  }
}

TEST_CASE("rk_integrate on x' = x matches the closed-form stage algebra") {
  auto f = [](double, const RealMatrix& x) { return x; };
  RealMatrix x0(1, 1);
  x0 << 1.0;
  const double h = 0.1;

  SUBCASE("euler") {
    const RealMatrix x1 = rk_integrate(f, x0, 0.0, h, {RkKind::RK1Euler, 1});
    CHECK(x1(0, 0) == doctest::Approx(1.1).epsilon(1e-15));
  }
  SUBCASE("euler with two substeps compounds") {
    const RealMatrix x1 = rk_integrate(f, x0, 0.0, h, {RkKind::RK1Euler, 2});
    CHECK(x1(0, 0) == doctest::Approx(1.05 * 1.05).epsilon(1e-15));
  }
  SUBCASE("heun is the degree-2 Taylor truncation") {
    const RealMatrix x1 = rk_integrate(f, x0, 0.0, h, {RkKind::RK2Heun, 1});
    CHECK(x1(0, 0) == doctest::Approx(1.0 + h + h * h / 2).epsilon(1e-15));
  }
  SUBCASE("rk4 is the degree-4 Taylor truncation") {
    const RealMatrix x1 = rk_integrate(f, x0, 0.0, h, {RkKind::RK4, 1});
    const double expected = 1.0 + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24;
    CHECK(x1(0, 0) == doctest::Approx(expected).epsilon(1e-15));
    const double err = std::abs(x1(0, 0) - std::exp(h));
    CHECK(err > 7e-8);
    CHECK(err < 1e-7);
  }
}

TEST_CASE("rk_integrate reports the diverged substep by name") {
  auto f = [](double, const RealMatrix& x) {
    return RealMatrix(RealMatrix::Constant(x.rows(), x.cols(), std::nan("")));
  };
  RealMatrix x0 = RealMatrix::Zero(1, 1);
  CHECK_THROWS_WITH_AS(rk_integrate(f, x0, 0.0, 1.0, {RkKind::RK1Euler, 1}, "K-step"),
                       "substep diverged in K-step", Error);
}

TEST_CASE("pick_rank implements the tail rule with tie acceptance and clamps") {
  RealVector sigma(4);
  sigma << 1.0, 1e-3, 1e-9, 1e-12;
  SUBCASE("tail rule") {
    const RankChoice c = pick_rank(sigma, 1e-6, 1, 100);
    CHECK(c.rank == 2);
    CHECK(c.discarded_mass == doctest::Approx(std::sqrt(1e-18 + 1e-24)).epsilon(1e-12));
  }
  SUBCASE("floor clamp") {
    const RankChoice c = pick_rank(sigma, 10.0, 1, 100);
    CHECK(c.rank == 1);
  }
  SUBCASE("ceiling clamp") {
    const RankChoice c = pick_rank(sigma, 0.0, 1, 3);
    CHECK(c.rank == 3);
  }
  SUBCASE("exact tie accepts") {
    RealVector s(3);
    s << 5.0, 4.0, 3.0;  // tail after rank 1 is exactly 5
    const RankChoice c = pick_rank(s, 5.0, 1, 100);
    CHECK(c.rank == 1);
  }
}

TEST_CASE("truncate keeps everything at theta = 0 and matches the SVD oracle") {
  std::mt19937_64 rng(5);
  const Index q = 8;
  const RealMatrix s_hat = random_gaussian<double>(q, q, rng);
  const OrthonormalBasis<double> u_hat = random_orthonormal<double>(12, q, rng);
  const OrthonormalBasis<double> v_hat = random_orthonormal<double>(10, q, rng);
  TruncationPolicy policy;
  policy.tau = 0.0;
  const auto [y1, discarded] = truncate(s_hat, u_hat, v_hat, policy);
  CHECK(y1.rank() == q);
  CHECK(discarded == 0.0);
  const RealMatrix full = u_hat.matrix() * s_hat * v_hat.matrix().adjoint();
  CHECK((y1.reconstruct() - full).norm() <= 1e-12 * full.norm());
}

TEST_CASE("truncate discards within the tolerance") {
  std::mt19937_64 rng(9);
  const Index q = 6;
  RealVector sigma(q);
  sigma << 1.0, 0.5, 1e-4, 1e-5, 1e-9, 1e-11;
  const RealMatrix s_hat = random_orthonormal<double>(q, q, rng).matrix() *
                           sigma.asDiagonal() *
                           random_orthonormal<double>(q, q, rng).matrix().transpose();
  const OrthonormalBasis<double> u_hat = random_orthonormal<double>(9, q, rng);
  const OrthonormalBasis<double> v_hat = random_orthonormal<double>(8, q, rng);
  TruncationPolicy policy;
  policy.tau = 1e-3;
  const auto [y1, discarded] = truncate(s_hat, u_hat, v_hat, policy);
  CHECK(y1.rank() == 2);
  const RealMatrix full = u_hat.matrix() * s_hat * v_hat.matrix().adjoint();
  const double err = (y1.reconstruct() - full).norm();
  CHECK(err <= policy.tau * (1 + 1e-10));
  CHECK(err == doctest::Approx(discarded).epsilon(1e-8));
  // The result's S is diagonal with descending entries.
  CHECK(y1.S.diagonal().asDiagonal().toDenseMatrix().isApprox(y1.S));
  CHECK(y1.S(0, 0) >= y1.S(1, 1));
}

TEST_CASE("adaptive step with zero right-hand side reproduces the factor") {
  std::mt19937_64 rng(13);
  RealVector sigma(3);
  sigma << 1.0, 0.1, 0.01;
  const LowRankFactor<double> y0 = random_factor(8, 6, sigma, rng);
  TruncationPolicy policy;
  policy.tau = 1e-6;  // below sigma_r = 1e-2
  const auto [y1, report] =
      adaptive_matrix_step(y0, zero_problem(8, 6), 0.0, 0.5, {RkKind::RK2Heun, 2}, policy);
  CHECK(report.rank_before == 3);
  CHECK(report.rank_augmented == 6);
  CHECK(report.rank_after == 3);
  CHECK(report.discarded_mass <= 1e-13);
  CHECK((y1.reconstruct() - y0.reconstruct()).norm() <= 1e-13 * y0.S.norm());
  CHECK(report.diagnostics.at("projected_initial_defect_rel") <= 1e-12);
}

TEST_CASE("adaptive step matches a straight-line script of its four stages") {
  // 3x3 instance small enough to execute the K/L/S stages independently:
  // Y0 = e1 e1^T, F(Y) = B Y with a nilpotent shift B, one Euler substep.
  RealMatrix b = RealMatrix::Zero(3, 3);
  b(0, 1) = 1.0;
  MatrixProblem<double> problem;
  problem.rows = problem.cols = 3;
  problem.rhs_dense = [b](double, const RealMatrix& y) { return RealMatrix(b * y); };

  RealMatrix e1 = RealMatrix::Zero(3, 1);
  e1(0, 0) = 1.0;
  RealMatrix s0 = RealMatrix::Identity(1, 1);
  const LowRankFactor<double> y0{OrthonormalBasis<double>(e1), s0, OrthonormalBasis<double>(e1)};

  const double h = 0.5;
  TruncationPolicy policy;
  policy.tau = 0.0;
  const SubstepMethod method{RkKind::RK1Euler, 1};
  const auto [y1, report] = adaptive_matrix_step(y0, problem, 0.0, h, method, policy);

  // Independent mirror of the four stages.
  const RealMatrix u0 = e1, v0 = e1;
  RealMatrix k0 = u0 * s0;
  RealMatrix k1 = k0 + h * RealMatrix(problem.eval_dense(0.0, k0 * v0.adjoint()) * v0);
  RealMatrix l0 = v0 * s0.adjoint();
  RealMatrix l1 =
      l0 + h * RealMatrix(problem.eval_dense(0.0, u0 * l0.adjoint()).adjoint() * u0);
  const OrthonormalBasis<double> u_hat = qr_orth(hstack(k1, u0));
  const OrthonormalBasis<double> v_hat = qr_orth(hstack(l1, v0));
  const RealMatrix m_hat = u_hat.matrix().adjoint() * u0;
  const RealMatrix n_hat = v_hat.matrix().adjoint() * v0;
  RealMatrix s_hat = m_hat * s0 * n_hat.adjoint();
  s_hat = s_hat + h * RealMatrix(u_hat.matrix().adjoint() *
                                 problem.eval_dense(0.0, u_hat.matrix() * s_hat *
                                                             v_hat.matrix().adjoint()) *
                                 v_hat.matrix());
  const auto [expected, expected_mass] = truncate(s_hat, u_hat, v_hat, policy);

  CHECK(bitwise_equal(y1.U.matrix(), expected.U.matrix()));
  CHECK(bitwise_equal(y1.S, expected.S));
  CHECK(bitwise_equal(y1.V.matrix(), expected.V.matrix()));
  CHECK(report.discarded_mass == expected_mass);
  CHECK(report.rank_before == 1);
  CHECK(report.rank_augmented == 2);
}

TEST_CASE("fixed-rank step matches its straight-line script and keeps rank") {
  RealMatrix b = RealMatrix::Zero(3, 3);
  b(0, 1) = 1.0;
  MatrixProblem<double> problem;
  problem.rows = problem.cols = 3;
  problem.rhs_dense = [b](double, const RealMatrix& y) { return RealMatrix(b * y); };

  RealMatrix e1 = RealMatrix::Zero(3, 1);
  e1(0, 0) = 1.0;
  RealMatrix s0 = RealMatrix::Identity(1, 1);
  const LowRankFactor<double> y0{OrthonormalBasis<double>(e1), s0, OrthonormalBasis<double>(e1)};
  const double h = 0.5;
  const auto [y1, report] =
      fixed_rank_matrix_step(y0, problem, 0.0, h, {RkKind::RK1Euler, 1});

  const RealMatrix u0 = e1, v0 = e1;
  RealMatrix k1 = u0 * s0 + h * RealMatrix(problem.eval_dense(0.0, u0 * s0 * v0.adjoint()) * v0);
  RealMatrix l1 = v0 * s0.adjoint() +
                  h * RealMatrix(problem.eval_dense(0.0, u0 * s0 * v0.adjoint()).adjoint() * u0);
  const OrthonormalBasis<double> u1 = qr_orth(k1);
  const OrthonormalBasis<double> v1 = qr_orth(l1);
  RealMatrix s_hat = (u1.matrix().adjoint() * u0) * s0 * (v1.matrix().adjoint() * v0).adjoint();
  s_hat = s_hat + h * RealMatrix(u1.matrix().adjoint() *
                                 problem.eval_dense(0.0, u1.matrix() * s_hat *
                                                             v1.matrix().adjoint()) *
                                 v1.matrix());
  CHECK(report.rank_after == 1);
  CHECK(bitwise_equal(y1.U.matrix(), u1.matrix()));
  CHECK(bitwise_equal(y1.S, s_hat));
  CHECK(bitwise_equal(y1.V.matrix(), v1.matrix()));
}

TEST_CASE("fixed-rank step with zero right-hand side reproduces the factor") {
  std::mt19937_64 rng(17);
  RealVector sigma(4);
  sigma << 1.0, 0.5, 0.25, 0.125;
  const LowRankFactor<double> y0 = random_factor(9, 7, sigma, rng);
  const auto [y1, report] =
      fixed_rank_matrix_step(y0, zero_problem(9, 7), 0.0, 0.3, {RkKind::RK4, 1});
  CHECK(report.rank_after == 4);
  CHECK((y1.reconstruct() - y0.reconstruct()).norm() <= 1e-13 * y0.S.norm());
}

TEST_CASE("one adaptive step reproduces a rank-r path exactly") {
  // F(t, Y) = A'(t) with A of fixed rank: the substep ODEs become
  // state-independent cubics that RK4 integrates exactly, so the only
  // error left is roundoff.
  const problems::SyntheticMatrixPath path(10, 8, 2, 21);
  CHECK(path.basis_overlap(0.0, 0.1) > 0.1);
  const LowRankFactor<double> y0 = path.factor(0.0);
  TruncationPolicy policy;
  policy.tau = 1e-14;
  const auto [y1, report] =
      adaptive_matrix_step(y0, path.problem(), 0.0, 0.1, {RkKind::RK4, 64}, policy);
  const RealMatrix a1 = path.value(0.1);
  CHECK((y1.reconstruct() - a1).norm() <= 1e-10 * a1.norm());
}

TEST_CASE("projected initial value stays exact along a linear flow") {
  std::mt19937_64 rng(33);
  const problems::Sec51Problem prob(16, 101);
  MatrixProblem<double> p = prob.problem();
  LowRankFactor<double> y = prob.initial(4);
  TruncationPolicy policy;
  policy.tau = 1e-8;
  double t = 0.0;
  for (int step = 0; step < 10; ++step) {
    auto [y1, report] = adaptive_matrix_step(y, p, t, 0.01, {RkKind::RK2Heun, 1}, policy);
    CHECK(report.diagnostics.at("projected_initial_defect_rel") <= 1e-12);
    CHECK(report.rank_after <= 2 * report.rank_before);
    y = std::move(y1);
    t += 0.01;
  }
}

TEST_CASE("sec51 projected hooks agree with their dense synthesis") {
  const problems::Sec51Problem prob(12, 55);
  std::mt19937_64 rng(3);
  CHECK(hook_defect(prob.problem(), rng) <= 1e-10);
  std::mt19937_64 rng2(4);
  CHECK(hook_defect(prob.schroedinger_problem(), rng2) <= 1e-10);
}

TEST_CASE("symmetric problems stay symmetric step after step") {
  const problems::Sec51Problem prob(16, 77);
  MatrixProblem<double> p = prob.problem();
  LowRankFactor<double> y = prob.symmetric_initial(4);
  TruncationPolicy policy;
  policy.tau = 1e-6;
  double t = 0.0;
  for (int step = 0; step < 8; ++step) {
    auto [y1, report] = adaptive_matrix_step(y, p, t, 0.002, {RkKind::RK2Heun, 1}, policy);
    y = std::move(y1);
    t += 0.002;
    const RealMatrix dense = y.reconstruct();
    CHECK((dense - dense.transpose()).norm() <= 1e-12 * dense.norm());
  }
}

TEST_CASE("norm is conserved up to the tolerance for conservative fields") {
  // F(Y) = W Y with skew-symmetric W satisfies <Y, F(Y)> = 0.
  std::mt19937_64 rng(39);
  RealMatrix w = random_gaussian<double>(12, 12, rng);
  w = 0.5 * (w - w.transpose()).eval();
  MatrixProblem<double> p;
  p.rows = p.cols = 12;
  p.rhs_dense = [w](double, const RealMatrix& y) { return RealMatrix(w * y); };

  RealVector sigma(3);
  sigma << 0.8, 0.5, 0.33;
  sigma /= sigma.norm();
  LowRankFactor<double> y = random_factor(12, 12, sigma, rng);
  TruncationPolicy policy;
  policy.tau = 1e-8;
  double t = 0.0;
  for (int step = 0; step < 10; ++step) {
    const double before = y.S.norm();
    auto [y1, report] = adaptive_matrix_step(y, p, t, 0.05, {RkKind::RK4, 16}, policy);
    y = std::move(y1);
    t += 0.05;
    CHECK(std::abs(y.S.norm() - before) <= 2 * policy.tau);
  }
}

TEST_CASE("augmented basis is capped at min(m, n)") {
  std::mt19937_64 rng(45);
  RealVector sigma(2);
  sigma << 1.0, 0.5;
  const LowRankFactor<double> y0 = random_factor(3, 3, sigma, rng);
  TruncationPolicy policy;
  policy.tau = 0.0;
  const auto [y1, report] =
      adaptive_matrix_step(y0, zero_problem(3, 3), 0.0, 0.1, {RkKind::RK1Euler, 1}, policy);
  CHECK(report.rank_augmented == 3);  // 2r = 4 capped to min(m, n) = 3
  CHECK((y1.reconstruct() - y0.reconstruct()).norm() <= 1e-13);
}

TEST_CASE("parallel K/L evaluation matches the sequential result bitwise") {
  const problems::Sec51Problem prob(16, 9);
  MatrixProblem<double> p = prob.problem();
  const LowRankFactor<double> y0 = prob.initial(4);
  TruncationPolicy policy;
  policy.tau = 1e-8;
  StepOptions seq;
  StepOptions par;
  par.parallel_kl = true;
  const auto [ys, rs] = adaptive_matrix_step(y0, p, 0.0, 0.01, {RkKind::RK2Heun, 1}, policy, seq);
  const auto [yp, rp] = adaptive_matrix_step(y0, p, 0.0, 0.01, {RkKind::RK2Heun, 1}, policy, par);
  CHECK(bitwise_equal(ys.U.matrix(), yp.U.matrix()));
  CHECK(bitwise_equal(ys.S, yp.S));
  CHECK(bitwise_equal(ys.V.matrix(), yp.V.matrix()));
}
