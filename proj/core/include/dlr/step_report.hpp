#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlr/dense.hpp"

namespace dlr {

// Per-step record of the integrator: accepted rank, discarded singular
// mass, retained singular values, and named diagnostics (truncation
// tolerance used, projected-initial-value defect, ...).
struct StepReport {
  double t_start = 0.0;
  double t_end = 0.0;
  Index rank_before = 0;
  Index rank_augmented = 0;
  Index rank_after = 0;
  double discarded_mass = 0.0;
  RealVector sigma;  // retained singular values, descending
  std::map<std::string, double> diagnostics;
};

// Tucker variant: one rank/mass entry per mode.
struct TuckerStepReport {
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<Index> rank_before;
  std::vector<Index> rank_augmented;
  std::vector<Index> rank_after;
  std::vector<double> discarded_mass;  // per truncated mode, in truncation order
  std::map<std::string, double> diagnostics;
};

}  // namespace dlr
