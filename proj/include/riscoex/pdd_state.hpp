#pragma once

#include <vector>

#include "riscoex/types.hpp"

namespace riscoex {

/// Auxiliary, dual and penalty variables of the augmented-Lagrangian solver.
///
/// y_k lives on the noise-normalized interference channel
/// sqrt(p^c / sigma^2) (h_ts + H_ts phi1), so that |y_k|^2 and ||w_k||^2
/// carry the same units inside the radar constraint.
struct PddState {
  cd v{0.0, 0.0};
  std::vector<cd> x;
  std::vector<cd> y;
  std::vector<cd> lambda1;
  std::vector<cd> lambda2;
  std::vector<cd> x_anchor;
  double rho = 1e-3;
  double eta = 1e-1;
  double c_shrink = 0.6;
};

}  // namespace riscoex
