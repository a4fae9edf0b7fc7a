#include "riscoex/closed_form.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "bisection.hpp"

namespace riscoex {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Per-direction quantities that do not depend on the power multiplier.
struct DirectionTerms {
  CVec a_conj;        // a*(theta_k)
  double gamma_hat;   // required |eta1|^2
  CVec e;             // unit, orthogonal to a*; zero when degenerate
  cd s;               // h_hat_sr^H a*
  double t = 0.0;     // h_hat_sr^H e = ||residual||
};

std::vector<DirectionTerms> direction_terms(const CVec& h_hat_ts, const CVec& h_hat_sr,
                                            const ScenarioConfig& cfg) {
  const int M = cfg.m_antennas;
  const double md = static_cast<double>(M);
  const double sigma2 = cfg.noise_power;
  const double pc = cfg.p_comm;
  const double denom_ts = sigma2 + pc * h_hat_ts.squaredNorm();

  std::vector<DirectionTerms> out;
  out.reserve(cfg.thetas.size());
  for (int k = 0; k < cfg.k_directions(); ++k) {
    DirectionTerms d;
    const CVec a = steer(cfg.thetas[k], M, cfg.antenna_spacing_ratio);
    d.a_conj = a.conjugate();

    // a^H (sigma^2 I + p h h^H)^{-1} a = (M - c) / sigma^2
    const double c = pc * std::norm(a.dot(h_hat_ts)) / denom_ts;
    const double alpha2 = std::norm(cfg.alpha_gain[k]);
    if ((md - c) / md < 1e-12 || alpha2 == 0.0)
      throw InfeasibleScenario("transmitter interference masks detection direction " + std::to_string(k));
    d.gamma_hat = cfg.gamma_r * sigma2 / (alpha2 * md * md * (md - c));

    const cd proj = (a.transpose() * h_hat_sr)(0) / md;
    const CVec residual = h_hat_sr - proj * d.a_conj;
    const double rn = residual.norm();
    if (rn > 1e-13 * h_hat_sr.norm() && rn > 0.0) {
      d.e = residual / rn;
      d.t = std::real(h_hat_sr.dot(d.e));
    } else {
      d.e = CVec::Zero(M);
      d.t = 0.0;
    }
    d.s = h_hat_sr.dot(d.a_conj);
    out.push_back(std::move(d));
  }
  return out;
}

// Unit-modulus minimizer of Re(z phi); 1 when z = 0.
cd opposing_phase(cd z) { return z == cd{0.0, 0.0} ? cd{1.0, 0.0} : unit_phasor(kPi - std::arg(z)); }

cd eta2_of(const DirectionTerms& d, double lambda) {
  if (d.t == 0.0) return {0.0, 0.0};
  return -d.t * d.s * std::sqrt(d.gamma_hat) / (d.t * d.t + lambda);
}

double power_of(const std::vector<DirectionTerms>& terms, double md, double lambda) {
  double p = 0.0;
  for (const auto& d : terms) p += md * d.gamma_hat + std::norm(eta2_of(d, lambda));
  return p;
}

}  // namespace

RadarClosedForm optimal_radar_beamforming(const ChannelSet& ch, const CVec& phi1, const CVec& phi2,
                                          const ScenarioConfig& cfg, const ClosedFormOptions& opts) {
  const auto eff = effective_direct_channels(ch, phi1, phi2);
  const auto terms = direction_terms(eff.h_hat_ts, eff.h_hat_sr, cfg);
  const double md = static_cast<double>(cfg.m_antennas);

  RadarClosedForm out;
  for (const auto& d : terms) out.minimum_power += md * d.gamma_hat;
  out.unconstrained_power = power_of(terms, md, 0.0);
  if (out.minimum_power > cfg.p_max)
    throw InfeasibleScenario("radar SINR targets need " + std::to_string(out.minimum_power) +
                             " W, budget is " + std::to_string(cfg.p_max) + " W");

  double lambda = 0.0;
  bool cancel = true;
  if (out.unconstrained_power > cfg.p_max) {
    double scale = 0.0;
    for (const auto& d : terms) scale = std::max(scale, d.t * d.t);
    const auto root = detail::bisect_decreasing(
        [&](double l) { return power_of(terms, md, l); }, cfg.p_max, scale,
        opts.bisection_tol * cfg.p_max, opts.bracket_doublings, opts.bisection_max_iters);
    if (root) {
      lambda = root->root;
    } else {
      // Budget equals the bare minimum: no power is left for cancellation.
      lambda = std::numeric_limits<double>::infinity();
      cancel = false;
    }
  }
  out.lambda_hat = lambda;

  const CVec h_hat_ts = eff.h_hat_ts;
  const double denom_ts = cfg.noise_power + cfg.p_comm * h_hat_ts.squaredNorm();
  for (const auto& d : terms) {
    const cd eta1 = std::sqrt(d.gamma_hat);
    const cd eta2 = cancel ? eta2_of(d, lambda) : cd{0.0, 0.0};
    CVec u = eta1 * d.a_conj + eta2 * d.e;
    // (sigma^2 I + p h h^H)^{-1} a a^T u by Sherman-Morrison.
    const CVec a = d.a_conj.conjugate();
    const CVec z = a * (a.transpose() * u)(0);
    CVec w = (z - cfg.p_comm * h_hat_ts * (h_hat_ts.dot(z) / denom_ts)) / cfg.noise_power;
    out.u.push_back(std::move(u));
    out.w.push_back(std::move(w));
    out.gamma_hat.push_back(d.gamma_hat);
    out.e.push_back(d.e);
    out.eta1.push_back(eta1);
    out.eta2.push_back(eta2);
  }
  return out;
}

std::pair<CVec, CVec> large_power_phases(const ChannelSet& ch) {
  const double ref = angle_of(ch.h_tr);
  CVec phi1(ch.n1());
  CVec phi2(ch.n2());
  for (int n = 0; n < ch.n1(); ++n) phi1(n) = unit_phasor(ref + angle_of(ch.eff_g_tr(n)));
  for (int n = 0; n < ch.n2(); ++n) phi2(n) = unit_phasor(ref + angle_of(ch.eff_f_tr(n)));
  return {phi1, phi2};
}

double large_power_threshold(const ChannelSet& ch, const CVec& phi1, const CVec& phi2,
                             const ScenarioConfig& cfg) {
  const auto eff = effective_direct_channels(ch, phi1, phi2);
  try {
    const auto terms = direction_terms(eff.h_hat_ts, eff.h_hat_sr, cfg);
    return power_of(terms, static_cast<double>(cfg.m_antennas), 0.0);
  } catch (const InfeasibleScenario&) {
    return std::numeric_limits<double>::infinity();
  }
}

bool large_power_condition(const ChannelSet& ch, const CVec& phi1, const CVec& phi2,
                           const ScenarioConfig& cfg) {
  return large_power_threshold(ch, phi1, phi2, cfg) <= cfg.p_max;
}

MinInterferenceResult min_interference_phases(const ChannelSet& ch, const ClosedFormOptions& opts) {
  MinInterferenceResult res;
  res.phi1 = CVec::Ones(ch.n1());
  res.phi2 = CVec::Ones(ch.n2());

  CVec r_ts = ch.h_ts + ch.eff_h_ts * res.phi1;
  CVec r_sr = ch.h_sr + ch.eff_h_sr.adjoint() * res.phi2.conjugate();
  double prev = r_ts.squaredNorm() + r_sr.squaredNorm();
  res.objective_trace.push_back(prev);

  for (int it = 0; it < opts.min_intf_max_iters; ++it) {
    for (int n = 0; n < ch.n2(); ++n) {
      // r_sr = rest + c z with z = conj(phi2(n)).
      const CVec c = ch.eff_h_sr.row(n).adjoint();
      const cd z_old = std::conj(res.phi2(n));
      const CVec rest = r_sr - c * z_old;
      const cd z = opposing_phase(rest.dot(c));
      res.phi2(n) = std::conj(z);
      r_sr = rest + c * z;
    }
    for (int n = 0; n < ch.n1(); ++n) {
      const auto c = ch.eff_h_ts.col(n);
      const CVec rest = r_ts - c * res.phi1(n);
      res.phi1(n) = opposing_phase(rest.dot(c));
      r_ts = rest + c * res.phi1(n);
    }
    const double cur = r_ts.squaredNorm() + r_sr.squaredNorm();
    res.objective_trace.push_back(cur);
    res.iterations = it + 1;
    const double gap = prev - cur;
    prev = cur;
    if (gap <= opts.min_intf_tol * std::max(cur, std::numeric_limits<double>::min())) break;
  }
  return res;
}

SolveReport radar_design_report(const ChannelSet& ch, const CVec& phi1, const CVec& phi2,
                                const ScenarioConfig& cfg, const ClosedFormOptions& opts) {
  SolveReport report;
  try {
    const auto design = optimal_radar_beamforming(ch, phi1, phi2, cfg, opts);
    BeamformerSet bf{design.u, design.w, phi1, phi2};
    fill_report(ch, bf, cfg, report);
  } catch (const InfeasibleScenario& e) {
    report.solution.phi1 = phi1;
    report.solution.phi2 = phi2;
    report.feasible = false;
    report.diagnostic = e.what();
  }
  return report;
}

SolveReport comm_centric_solve(const ChannelSet& ch, const ScenarioConfig& cfg,
                               const ClosedFormOptions& opts) {
  const auto t0 = Clock::now();
  const auto [phi1, phi2] = large_power_phases(ch);
  auto report = radar_design_report(ch, phi1, phi2, cfg, opts);
  report.wall_time = seconds_since(t0);
  return report;
}

SolveReport intf_cancel_solve(const ChannelSet& ch, const ScenarioConfig& cfg,
                              const ClosedFormOptions& opts) {
  const auto t0 = Clock::now();
  const auto phases = min_interference_phases(ch, opts);
  auto report = radar_design_report(ch, phases.phi1, phases.phi2, cfg, opts);
  report.iterations = phases.iterations;
  report.wall_time = seconds_since(t0);
  return report;
}

SolveReport low_complexity_solve(const ChannelSet& ch, const ScenarioConfig& cfg,
                                 const ClosedFormOptions& opts) {
  const auto t0 = Clock::now();
  auto high = comm_centric_solve(ch, cfg, opts);
  auto low = intf_cancel_solve(ch, cfg, opts);
  SolveReport best;
  if (high.feasible && low.feasible)
    best = high.comm_sinr >= low.comm_sinr ? std::move(high) : std::move(low);
  else if (low.feasible)
    best = std::move(low);
  else
    best = std::move(high);
  best.wall_time = seconds_since(t0);
  return best;
}

CVec quantize_phases(const CVec& phi, int bits) {
  if (bits < 1) throw std::invalid_argument("quantization needs at least one bit");
  const double levels = std::ldexp(1.0, bits);
  const double step = 2.0 * kPi / levels;
  CVec out(phi.size());
  for (Eigen::Index n = 0; n < phi.size(); ++n) {
    double ang = std::fmod(angle_of(phi(n)), 2.0 * kPi);
    if (ang < 0.0) ang += 2.0 * kPi;
    double m = std::fmod(std::nearbyint(ang / step), levels);
    out(n) = unit_phasor(m * step);
  }
  return out;
}

SolveReport baseline_random_phases(const ChannelSet& ch, const ScenarioConfig& cfg,
                                   std::mt19937_64& rng, const ClosedFormOptions& opts) {
  const auto t0 = Clock::now();
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  CVec phi1(ch.n1());
  CVec phi2(ch.n2());
  for (int n = 0; n < ch.n1(); ++n) phi1(n) = unit_phasor(phase(rng));
  for (int n = 0; n < ch.n2(); ++n) phi2(n) = unit_phasor(phase(rng));
  auto report = radar_design_report(ch, phi1, phi2, cfg, opts);
  report.wall_time = seconds_since(t0);
  return report;
}

SolveReport baseline_no_ris(const ChannelSet& ch, const ScenarioConfig& cfg,
                            const ClosedFormOptions& opts) {
  const auto t0 = Clock::now();
  const ChannelSet bare = ch.without_ris();
  auto report = radar_design_report(bare, CVec(0), CVec(0), cfg, opts);
  report.wall_time = seconds_since(t0);
  return report;
}

double theorem3_gap(const ChannelSet& ch, const ScenarioConfig& cfg) {
  const double direct = std::abs(ch.h_tr);
  const double total = direct + ch.eff_g_tr.cwiseAbs().sum() + ch.eff_f_tr.cwiseAbs().sum();
  return cfg.p_comm / cfg.noise_power * (total * total - direct * direct);
}

}  // namespace riscoex
