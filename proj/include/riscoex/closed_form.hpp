#pragma once

#include <random>
#include <utility>
#include <vector>

#include "riscoex/metrics.hpp"

namespace riscoex {

/// Optimal radar beamforming for fixed RIS phases.
///
/// u_k = eta1_k a*(theta_k) + eta2_k e_k with e_k the unit direction of the
/// receiver interference channel orthogonal to a*(theta_k). The radar SINR
/// is met with equality, and the power budget is shared through the single
/// multiplier lambda_hat.
struct RadarClosedForm {
  std::vector<CVec> u;
  std::vector<CVec> w;
  std::vector<double> gamma_hat;
  std::vector<CVec> e;
  double lambda_hat = 0.0;
  std::vector<cd> eta1;
  std::vector<cd> eta2;
  /// Total power the design would use with lambda_hat = 0.
  double unconstrained_power = 0.0;
  /// Smallest total power that meets every radar SINR target.
  double minimum_power = 0.0;
};

struct ClosedFormOptions {
  double bisection_tol = 1e-10;
  int bisection_max_iters = 200;
  int bracket_doublings = 60;
  double min_intf_tol = 1e-6;
  int min_intf_max_iters = 100;
};

/// Throws InfeasibleScenario when the targets cannot be met within p_max.
RadarClosedForm optimal_radar_beamforming(const ChannelSet& ch, const CVec& phi1, const CVec& phi2,
                                          const ScenarioConfig& cfg,
                                          const ClosedFormOptions& opts = {});

/// Phases co-phasing every single-bounce RIS path with the direct link.
std::pair<CVec, CVec> large_power_phases(const ChannelSet& ch);

/// Total power needed for zero radar-to-receiver interference. Infinite when
/// some direction's target is unreachable at any power.
double large_power_threshold(const ChannelSet& ch, const CVec& phi1, const CVec& phi2,
                             const ScenarioConfig& cfg);

bool large_power_condition(const ChannelSet& ch, const CVec& phi1, const CVec& phi2,
                           const ScenarioConfig& cfg);

struct MinInterferenceResult {
  CVec phi1;
  CVec phi2;
  std::vector<double> objective_trace;
  int iterations = 0;
};

/// Element-wise BCD on ||h_sr^H + phi2^T H_sr||^2 + ||h_ts + H_ts phi1||^2,
/// starting from all-ones phases.
MinInterferenceResult min_interference_phases(const ChannelSet& ch, const ClosedFormOptions& opts = {});

/// Closed-form radar design for the given phases, evaluated into a report.
/// An infeasible design yields feasible = false and a NaN comm SINR.
SolveReport radar_design_report(const ChannelSet& ch, const CVec& phi1, const CVec& phi2,
                                const ScenarioConfig& cfg, const ClosedFormOptions& opts = {});

/// Large-power branch alone (co-phased RIS).
SolveReport comm_centric_solve(const ChannelSet& ch, const ScenarioConfig& cfg,
                               const ClosedFormOptions& opts = {});

/// Low-power branch alone (interference-minimizing RIS).
SolveReport intf_cancel_solve(const ChannelSet& ch, const ScenarioConfig& cfg,
                              const ClosedFormOptions& opts = {});

/// Runs both branches and keeps the feasible one with the larger comm SINR.
SolveReport low_complexity_solve(const ChannelSet& ch, const ScenarioConfig& cfg,
                                 const ClosedFormOptions& opts = {});

/// Nearest point of {m pi / 2^(b-1)} for every element.
CVec quantize_phases(const CVec& phi, int bits);

SolveReport baseline_random_phases(const ChannelSet& ch, const ScenarioConfig& cfg,
                                   std::mt19937_64& rng, const ClosedFormOptions& opts = {});

SolveReport baseline_no_ris(const ChannelSet& ch, const ScenarioConfig& cfg,
                            const ClosedFormOptions& opts = {});

/// (p^c / sigma^2) [(|h_tr| + sum|g_tr| + sum|f_tr|)^2 - |h_tr|^2].
double theorem3_gap(const ChannelSet& ch, const ScenarioConfig& cfg);

}  // namespace riscoex
