#pragma once

#include <vector>

#include "riscoex/closed_form.hpp"
#include "riscoex/metrics.hpp"
#include "riscoex/pdd_state.hpp"

namespace riscoex {

struct PddOptions {
  double rho0 = 1e-3;  // divided by max_k ||q_k||^2 at the initial point
  double eta0 = 1e-1;
  double c_shrink = 0.6;
  double inner_tol = 1e-6;     // relative AL objective gap
  int inner_max_iters = 100;
  int outer_max_iters = 50;
  double outer_violation_tol = 1e-10;
  double bisection_tol = 1e-10;
  int bisection_max_iters = 200;
  int bracket_doublings = 60;

  void validate() const;
};

// Step 1, per direction: minimize
//   |x - w^H q + rho l1|^2 + |y - w^H f + rho l2|^2
// subject to the linearized radar constraint
//   gamma (||w||^2 + |y|^2) + beta |xa|^2 - 2 beta Re(xa^* x) <= 0,
// where f is the noise-normalized interference channel, beta = |alpha|^2 / sigma^2
// and xa is the linearization anchor.
struct WxyProblem {
  CVec q;
  CVec f;
  double beta = 0.0;
  double gamma = 0.0;
  cd x_anchor;
  cd rho_lambda1;
  cd rho_lambda2;
};

struct WxySolution {
  CVec w;
  cd x;
  cd y;
  double mu = 0.0;
  bool unconstrained = true;
};

/// Value of the linearized radar constraint (<= 0 is feasible).
double wxy_constraint(const WxyProblem& pb, const CVec& w, cd x, cd y);

/// Throws SolverFailure when the multiplier bracket cannot be found.
WxySolution solve_wxy(const WxyProblem& pb, const PddOptions& opts);

// Step 2: minimize |v|^2 sum_k |p^H u_k|^2 + (1/2rho) sum_k |h_k^H u_k - t_k|^2
// subject to sum_k ||u_k||^2 <= P.
struct UProblem {
  CVec p;
  double v_sq = 0.0;
  std::vector<CVec> h;
  std::vector<cd> target;  // x_k + rho lambda1_k
  double rho = 1.0;
  double p_max = 0.0;
};

struct USolution {
  std::vector<CVec> u;
  double lambda_tilde = 0.0;
  bool unconstrained = true;
};

USolution solve_u(const UProblem& pb, const PddOptions& opts);

/// exp(j pi - j angle(z)), the unit-modulus minimizer of Re(z phi); 1 when z = 0.
cd optimal_unit_phase(cd z);

/// v = b / a, the minimizer of |v|^2 a - 2 Re(v^* b).
cd update_v(double a, cd b);

/// Step 1 for direction k at the current iterate.
WxySolution update_w_x_y(int k, const ChannelSet& ch, const BeamformerSet& bf, const PddState& state,
                         const ScenarioConfig& cfg, const PddOptions& opts);

/// Step 2 for all directions at the current iterate.
USolution update_u(const ChannelSet& ch, const BeamformerSet& bf, const PddState& state,
                   const ScenarioConfig& cfg, const PddOptions& opts);

/// Optimal phi1(n) with every other variable fixed.
cd update_phi1_element(int n, const ChannelSet& ch, const BeamformerSet& bf, const PddState& state,
                       const ScenarioConfig& cfg);

/// Optimal phi2(n) with every other variable fixed.
cd update_phi2_element(int n, const ChannelSet& ch, const BeamformerSet& bf, const PddState& state,
                       const ScenarioConfig& cfg);

/// Sequential sweeps over all elements; equivalent to calling the element
/// updates in index order, with cached partial sums.
void sweep_phi1(const ChannelSet& ch, BeamformerSet& bf, const PddState& state, const ScenarioConfig& cfg);
void sweep_phi2(const ChannelSet& ch, BeamformerSet& bf, const PddState& state, const ScenarioConfig& cfg);

struct InnerResult {
  std::vector<double> objective_trace;
  int iterations = 0;
};

/// Block-coordinate CCCP loop on the augmented Lagrangian. The CCCP anchor
/// is refreshed after every full sweep.
InnerResult cccp_inner_loop(const ChannelSet& ch, BeamformerSet& bf, PddState& state,
                            const PddOptions& opts, const ScenarioConfig& cfg);

struct InitialPoint {
  BeamformerSet bf;
  PddState state;
};

/// Feasible starting point from the closed-form designs with zero
/// constraint violation. Throws InfeasibleScenario when neither RIS branch
/// admits a feasible radar design.
InitialPoint initialize_feasible(const ChannelSet& ch, const ScenarioConfig& cfg, const PddOptions& opts);

/// Auxiliaries set to their defining expressions, zero duals, v optimal.
/// The penalty starts at rho0 / max_k ||a a^T u_k||^2.
PddState consistent_state(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg,
                          const PddOptions& opts);

/// Full double-loop solve from a feasible initial point.
SolveReport pdd_solve(const ChannelSet& ch, const ScenarioConfig& cfg, const PddOptions& opts,
                      InitialPoint init);

/// Convenience: initialize_feasible followed by the double loop. Infeasible
/// scenarios produce a report with feasible = false.
SolveReport pdd_solve(const ChannelSet& ch, const ScenarioConfig& cfg, const PddOptions& opts = {});

}  // namespace riscoex
