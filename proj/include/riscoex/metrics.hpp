#pragma once

#include <limits>
#include <string>
#include <vector>

#include "riscoex/pdd_state.hpp"
#include "riscoex/scenario.hpp"

namespace riscoex {

/// Radar transmit/receive beamformers per direction and the two RIS phase vectors.
struct BeamformerSet {
  std::vector<CVec> u;
  std::vector<CVec> w;
  CVec phi1;
  CVec phi2;
};

inline constexpr double kRadarSinrSlack = 1e-6;
inline constexpr double kPowerSlack = 1e-9;

struct SolveReport {
  double comm_sinr = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> radar_sinr;
  bool feasible = false;
  double total_radar_power = 0.0;
  double interference_to_rx = 0.0;
  double interference_to_radar = 0.0;
  std::vector<double> objective_trace;
  std::vector<double> violation_trace;
  std::vector<double> comm_sinr_trace;
  double wall_time = 0.0;
  int iterations = 0;
  BeamformerSet solution;
  std::string diagnostic;
  /// A sub-solver failed to bracket or converge (as opposed to an infeasible scenario).
  bool solver_failure = false;
};

/// h_tr + g_tr^H phi1 + f_tr^H phi2 + phi1^T H_tr phi2.
cd comm_signal(const ChannelSet& ch, const CVec& phi1, const CVec& phi2);

/// sum_k |h_hat_sr^H u_k|^2.
double interference_power(const CVec& h_hat_sr, const std::vector<CVec>& u);

double comm_sinr(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg);

/// Radar SINR for direction k (0-based). Zero when w_k = 0.
double radar_sinr(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg, int k);

double total_power(const std::vector<CVec>& u);

/// sqrt(p^c / sigma^2), the factor that maps h_ts + H_ts phi1 onto the
/// noise-normalized interference channel used by the y_k auxiliaries.
double intf_scale(const ScenarioConfig& cfg);

/// sqrt(p^c / sigma^2) (h_ts + H_ts phi1).
CVec scaled_intf_channel(const ChannelSet& ch, const CVec& phi1, const ScenarioConfig& cfg);

/// a(theta_k) a^T(theta_k) u_k.
CVec echo_direction(const ScenarioConfig& cfg, int k, const CVec& u_k);

/// Augmented-Lagrangian objective of the penalized problem.
double al_objective(const ChannelSet& ch, const BeamformerSet& bf, const PddState& aux,
                    const ScenarioConfig& cfg);

/// max_k max(|x_k - w_k^H a a^T u_k|, |y_k - w_k^H f~|).
double constraint_violation(const ChannelSet& ch, const BeamformerSet& bf, const PddState& aux,
                            const ScenarioConfig& cfg);

/// 20 log10(|a^T(theta) u| / peak) over the grid; -inf everywhere for u = 0.
std::vector<double> beampattern(const CVec& u, const std::vector<double>& grid,
                                double spacing_ratio);

/// Uniform grid of `points` angles over [-pi/2, pi/2].
std::vector<double> angle_grid(int points = 721);

/// Fills every metric of a report from a beamformer set and sets `feasible`.
void fill_report(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg,
                 SolveReport& report);

/// Feasibility rule shared by every solver report.
bool report_feasible(const SolveReport& report, const ScenarioConfig& cfg);

}  // namespace riscoex
