#pragma once

#include <string>

#include "dlr/dense.hpp"
#include "dlr/error.hpp"

namespace dlr {

enum class RkKind { RK1Euler, RK2Heun, RK4 };

// Explicit Runge-Kutta substep solver: `substeps` equal sub-intervals of
// [t0, t0+h] integrated with the chosen scheme.
struct SubstepMethod {
  RkKind kind = RkKind::RK4;
  int substeps = 1;
};

// Integrates X' = f(t, X) from t0 to t0+h. State needs linear-combination
// arithmetic and an all_finite() found via ADL; dense matrices and tensors
// both qualify. Throws "substep diverged in <label>" on non-finite states.
template <class State, class Rhs>
State rk_integrate(Rhs&& f, State x, double t0, double h, const SubstepMethod& method,
                   const char* label = "substep") {
  require(h > 0, "stepsize must be positive");
  require(method.substeps >= 1, "substeps must be >= 1");
  const double hs = h / method.substeps;
  for (int s = 0; s < method.substeps; ++s) {
    const double t = t0 + s * hs;
    switch (method.kind) {
      case RkKind::RK1Euler: {
        State k1 = f(t, x);
        x = x + hs * k1;
        break;
      }
      case RkKind::RK2Heun: {
        State k1 = f(t, x);
        State mid = x + hs * k1;
        State k2 = f(t + hs, mid);
        x = x + (hs / 2.0) * k1 + (hs / 2.0) * k2;
        break;
      }
      case RkKind::RK4: {
        State k1 = f(t, x);
        State x2 = x + (hs / 2.0) * k1;
        State k2 = f(t + hs / 2.0, x2);
        State x3 = x + (hs / 2.0) * k2;
        State k3 = f(t + hs / 2.0, x3);
        State x4 = x + hs * k3;
        State k4 = f(t + hs, x4);
        x = x + (hs / 6.0) * k1 + (hs / 3.0) * k2 + (hs / 3.0) * k3 + (hs / 6.0) * k4;
        break;
      }
    }
    if (!all_finite(x)) fail(std::string("substep diverged in ") + label);
  }
  return x;
}

}  // namespace dlr
