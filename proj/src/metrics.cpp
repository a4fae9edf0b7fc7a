#include "riscoex/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace riscoex {

cd comm_signal(const ChannelSet& ch, const CVec& phi1, const CVec& phi2) {
  if (phi1.size() != ch.n1() || phi2.size() != ch.n2())
    throw DimensionMismatch("phase vector lengths do not match the surface sizes");
  cd s = ch.h_tr;
  if (ch.n1() > 0) s += ch.eff_g_tr.dot(phi1);  // dot() conjugates its left operand
  if (ch.n2() > 0) s += ch.eff_f_tr.dot(phi2);
  if (ch.n1() > 0 && ch.n2() > 0) s += (phi1.transpose() * ch.eff_h_tr * phi2)(0);
  return s;
}

double interference_power(const CVec& h_hat_sr, const std::vector<CVec>& u) {
  double total = 0.0;
  for (const auto& uk : u) total += std::norm(h_hat_sr.dot(uk));
  return total;
}

double total_power(const std::vector<CVec>& u) {
  double p = 0.0;
  for (const auto& uk : u) p += uk.squaredNorm();
  return p;
}

double comm_sinr(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg) {
  const double kl = static_cast<double>(cfg.k_directions()) * cfg.pri_length;
  const auto eff = effective_direct_channels(ch, bf.phi1, bf.phi2);
  const double signal = kl * cfg.p_comm * std::norm(comm_signal(ch, bf.phi1, bf.phi2));
  return signal / (kl * cfg.noise_power + interference_power(eff.h_hat_sr, bf.u));
}

CVec echo_direction(const ScenarioConfig& cfg, int k, const CVec& u_k) {
  const CVec a = steer(cfg.thetas.at(k), cfg.m_antennas, cfg.antenna_spacing_ratio);
  return a * (a.transpose() * u_k)(0);
}

double radar_sinr(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg, int k) {
  if (k < 0 || k >= cfg.k_directions()) throw std::out_of_range("direction index out of range");
  const CVec& w = bf.w.at(k);
  const double wn = w.squaredNorm();
  if (wn == 0.0) return 0.0;
  const CVec f = ch.h_ts + ch.eff_h_ts * bf.phi1;
  const double num = std::norm(cfg.alpha_gain[k]) * std::norm(w.dot(echo_direction(cfg, k, bf.u.at(k))));
  return num / (cfg.noise_power * wn + cfg.p_comm * std::norm(w.dot(f)));
}

double intf_scale(const ScenarioConfig& cfg) { return std::sqrt(cfg.p_comm / cfg.noise_power); }

CVec scaled_intf_channel(const ChannelSet& ch, const CVec& phi1, const ScenarioConfig& cfg) {
  return intf_scale(cfg) * (ch.h_ts + ch.eff_h_ts * phi1);
}

double al_objective(const ChannelSet& ch, const BeamformerSet& bf, const PddState& aux,
                    const ScenarioConfig& cfg) {
  const int K = cfg.k_directions();
  const double kl = static_cast<double>(K) * cfg.pri_length;
  const auto eff = effective_direct_channels(ch, bf.phi1, bf.phi2);
  const double a = kl * cfg.noise_power + interference_power(eff.h_hat_sr, bf.u);
  const cd b = std::sqrt(kl * cfg.p_comm) * comm_signal(ch, bf.phi1, bf.phi2);
  double obj = std::norm(aux.v) * a - 2.0 * std::real(std::conj(aux.v) * b);

  const CVec f = scaled_intf_channel(ch, bf.phi1, cfg);
  double penalty = 0.0;
  for (int k = 0; k < K; ++k) {
    const cd wq = bf.w[k].dot(echo_direction(cfg, k, bf.u[k]));
    const cd wf = bf.w[k].dot(f);
    penalty += std::norm(aux.x[k] - wq + aux.rho * aux.lambda1[k]);
    penalty += std::norm(aux.y[k] - wf + aux.rho * aux.lambda2[k]);
  }
  return obj + penalty / (2.0 * aux.rho);
}

double constraint_violation(const ChannelSet& ch, const BeamformerSet& bf, const PddState& aux,
                            const ScenarioConfig& cfg) {
  const CVec f = scaled_intf_channel(ch, bf.phi1, cfg);
  double worst = 0.0;
  for (int k = 0; k < cfg.k_directions(); ++k) {
    worst = std::max(worst, std::abs(aux.x[k] - bf.w[k].dot(echo_direction(cfg, k, bf.u[k]))));
    worst = std::max(worst, std::abs(aux.y[k] - bf.w[k].dot(f)));
  }
  return worst;
}

std::vector<double> beampattern(const CVec& u, const std::vector<double>& grid, double spacing_ratio) {
  if (grid.empty()) throw std::invalid_argument("beampattern grid must be non-empty");
  std::vector<double> mag(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CVec a = steer(grid[i], static_cast<int>(u.size()), spacing_ratio);
    mag[i] = std::abs((a.transpose() * u)(0));
  }
  const double peak = *std::max_element(mag.begin(), mag.end());
  std::vector<double> out(grid.size(), -std::numeric_limits<double>::infinity());
  if (peak == 0.0) return out;
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = 20.0 * std::log10(mag[i] / peak);
  return out;
}

std::vector<double> angle_grid(int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  if (points == 1) return {0.0};
  for (int i = 0; i < points; ++i) grid[i] = -kPi / 2.0 + kPi * i / (points - 1);
  return grid;
}

bool report_feasible(const SolveReport& report, const ScenarioConfig& cfg) {
  if (report.radar_sinr.empty()) return false;
  const double worst = *std::min_element(report.radar_sinr.begin(), report.radar_sinr.end());
  return worst >= cfg.gamma_r * (1.0 - kRadarSinrSlack) &&
         report.total_radar_power <= cfg.p_max * (1.0 + kPowerSlack);
}

void fill_report(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg,
                 SolveReport& report) {
  report.solution = bf;
  const auto eff = effective_direct_channels(ch, bf.phi1, bf.phi2);
  report.comm_sinr = comm_sinr(ch, bf, cfg);
  report.radar_sinr.assign(static_cast<std::size_t>(cfg.k_directions()), 0.0);
  for (int k = 0; k < cfg.k_directions(); ++k) report.radar_sinr[k] = radar_sinr(ch, bf, cfg, k);
  report.total_radar_power = total_power(bf.u);
  report.interference_to_rx = interference_power(eff.h_hat_sr, bf.u);
  report.interference_to_radar = eff.h_hat_ts.squaredNorm() * cfg.p_comm;
  report.feasible = report_feasible(report, cfg);
}

}  // namespace riscoex
