#pragma once

#include <cmath>
#include <functional>
#include <optional>

namespace riscoex::detail {

struct BisectionResult {
  double root = 0.0;   // upper end of the final bracket: fn(root) <= target
  double value = 0.0;  // fn(root)
  int iterations = 0;
};

/// Root of a non-increasing fn on [0, inf) with fn(0) > target.
///
/// The upper bracket starts at hi0 and is doubled at most `doublings` times.
/// Returns nullopt when no bracket is found. The result keeps the upper end
/// of the bracket so that fn(root) <= target always holds.
inline std::optional<BisectionResult> bisect_decreasing(const std::function<double(double)>& fn,
                                                        double target, double hi0, double abs_tol,
                                                        int doublings, int max_iters) {
  double lo = 0.0;
  double hi = hi0 > 0.0 ? hi0 : 1.0;
  double f_hi = fn(hi);
  int d = 0;
  while (f_hi > target) {
    if (d++ >= doublings) return std::nullopt;
    lo = hi;
    hi *= 2.0;
    f_hi = fn(hi);
  }
  BisectionResult res{hi, f_hi, 0};
  for (int it = 0; it < max_iters; ++it) {
    if (target - f_hi <= abs_tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = fn(mid);
    if (f_mid > target) {
      lo = mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
    res.iterations = it + 1;
  }
  res.root = hi;
  res.value = f_hi;
  return res;
}

}  // namespace riscoex::detail
