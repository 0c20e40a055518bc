#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dlr/dense.hpp"
#include "dlr/error.hpp"
#include "dlr/low_rank.hpp"
#include "dlr/tucker.hpp"

namespace dlr {

enum class MonitorKind {
  FrobeniusNorm,
  SchroedingerEnergy,   // <Y, H[Y]> with a self-adjoint linear map H
  GradientFunctional,   // f(Y)
  SymmetryDefect,       // |Y - Y^T|_F
  HamiltonianEnergy,    // H(Re Z, Im Z)
};

// Named scalar diagnostic evaluated along a run. The log records (t, value)
// pairs with strictly increasing times. Monitors are owned by a single run.
template <class Scalar>
struct Monitor {
  MonitorKind kind = MonitorKind::FrobeniusNorm;
  std::string name;
  // SchroedingerEnergy: dense application of the Hamiltonian map.
  std::function<Matrix<Scalar>(const Matrix<Scalar>&)> hamiltonian_map;
  // GradientFunctional: the functional being minimized.
  std::function<double(const Matrix<Scalar>&)> functional;
  // HamiltonianEnergy: H(Q, P) on the real and imaginary parts.
  std::function<double(const RealMatrix&, const RealMatrix&)> hamiltonian;
  std::vector<std::pair<double, double>> log;
};

namespace detail {

template <class Scalar>
double monitor_value(const Monitor<Scalar>& mon, const LowRankFactor<Scalar>& y) {
  switch (mon.kind) {
    case MonitorKind::FrobeniusNorm:
      // |Y|_F = |S|_F by orthonormality of U and V.
      return y.S.norm();
    case MonitorKind::SchroedingerEnergy: {
      require(field_of<Scalar>() == Field::Complex,
              "SchroedingerEnergy monitor requires a complex-field problem");
      require(bool(mon.hamiltonian_map), "SchroedingerEnergy monitor needs H");
      Matrix<Scalar> w =
          y.U.matrix().adjoint() * mon.hamiltonian_map(y.reconstruct()) * y.V.matrix();
      return std::real(Scalar((y.S.adjoint() * w).trace()));
    }
    case MonitorKind::GradientFunctional:
      require(bool(mon.functional), "GradientFunctional monitor needs f");
      return mon.functional(y.reconstruct());
    case MonitorKind::SymmetryDefect: {
      Matrix<Scalar> dense = y.reconstruct();
      return (dense - dense.transpose().eval()).norm();
    }
    case MonitorKind::HamiltonianEnergy: {
      require(field_of<Scalar>() == Field::Complex,
              "HamiltonianEnergy monitor requires a complex-field problem");
      require(bool(mon.hamiltonian), "HamiltonianEnergy monitor needs H(Q,P)");
      Matrix<Scalar> dense = y.reconstruct();
      return mon.hamiltonian(dense.real(), dense.imag());
    }
  }
  fail("unreachable monitor kind");
}

template <class Scalar>
double monitor_value(const Monitor<Scalar>& mon, const TuckerFactor<Scalar>& y) {
  if (mon.kind == MonitorKind::FrobeniusNorm) return frobenius_norm(y.core);
  fail("monitor kind not supported for Tucker factors");
}

}  // namespace detail

// Evaluates the monitor at (t, Y) and appends to the log. Values must be
// finite and times strictly increasing.
template <class Scalar, class Factor>
double monitor_step(Monitor<Scalar>& mon, double t, const Factor& y) {
  require(mon.log.empty() || t > mon.log.back().first,
          "monitor log times must be strictly increasing");
  const double value = detail::monitor_value(mon, y);
  require(std::isfinite(value), "monitor produced a non-finite value");
  mon.log.emplace_back(t, value);
  return value;
}

struct GradientCheck {
  bool pass = true;
  Index first_violation = -1;  // index n of the first f(Y_{n+1}) > f(Y_n) + beta_bound*theta
  double worst_excess = 0.0;
};

// Verifies monotone decrease of a functional log up to beta_bound*theta per
// step. The stepsize h is part of the gradient-flow contract (the decrease
// term is of size alpha^2 h) but the realized decrease is reported, not
// required.
inline GradientCheck check_gradient_decrease(const std::vector<std::pair<double, double>>& log,
                                             double /*h*/, double theta, double beta_bound) {
  GradientCheck out;
  const double slack = beta_bound * theta;
  for (size_t n = 0; n + 1 < log.size(); ++n) {
    const double excess = log[n + 1].second - log[n].second - slack;
    out.worst_excess = std::max(out.worst_excess, excess);
    if (excess > 0 && out.pass) {
      out.pass = false;
      out.first_violation = Index(n);
    }
  }
  return out;
}

}  // namespace dlr
