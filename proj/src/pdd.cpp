#include "riscoex/pdd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "bisection.hpp"

namespace riscoex {

namespace {

double kl_factor(const ScenarioConfig& cfg) {
  return static_cast<double>(cfg.k_directions()) * cfg.pri_length;
}

ClosedFormOptions closed_form_options(const PddOptions& opts) {
  ClosedFormOptions cf;
  cf.bisection_tol = opts.bisection_tol;
  cf.bisection_max_iters = opts.bisection_max_iters;
  cf.bracket_doublings = opts.bracket_doublings;
  return cf;
}

double echo_beta(const ScenarioConfig& cfg, int k) {
  return std::norm(cfg.alpha_gain[k]) / cfg.noise_power;
}

// (gamma I + kappa f f^H)^{-1} z via Sherman-Morrison.
CVec rank_one_solve(double gamma, double kappa, const CVec& f, const CVec& z) {
  const double fn = f.squaredNorm();
  const cd fz = f.dot(z);
  return (z - f * (kappa * fz / (gamma + kappa * fn))) / gamma;
}

}  // namespace

void PddOptions::validate() const {
  if (!(rho0 > 0.0)) throw std::invalid_argument("rho0 must be positive");
  if (!(eta0 > 0.0)) throw std::invalid_argument("eta0 must be positive");
  if (!(c_shrink > 0.0 && c_shrink < 1.0)) throw std::invalid_argument("c_shrink must lie in (0, 1)");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("inner_tol must be positive");
  if (inner_max_iters < 1) throw std::invalid_argument("inner_max_iters must be >= 1");
  if (outer_max_iters < 1) throw std::invalid_argument("outer_max_iters must be >= 1");
  if (!(outer_violation_tol >= 0.0)) throw std::invalid_argument("outer_violation_tol must be >= 0");
  if (!(bisection_tol > 0.0)) throw std::invalid_argument("bisection_tol must be positive");
  if (bisection_max_iters < 1) throw std::invalid_argument("bisection_max_iters must be >= 1");
  if (bracket_doublings < 0) throw std::invalid_argument("bracket_doublings must be >= 0");
}

double wxy_constraint(const WxyProblem& pb, const CVec& w, cd x, cd y) {
  return pb.gamma * (w.squaredNorm() + std::norm(y)) + pb.beta * std::norm(pb.x_anchor) -
         2.0 * pb.beta * std::real(std::conj(pb.x_anchor) * x);
}

WxySolution solve_wxy(const WxyProblem& pb, const PddOptions& opts) {
  if (pb.q.size() != pb.f.size()) throw DimensionMismatch("q and f must have equal length");
  const double g = pb.gamma;
  const double b = pb.beta;

  auto solve_at = [&](double mu) {
    WxySolution s;
    const double kappa = g / (1.0 + mu * g);
    const CVec z = (b * std::conj(pb.x_anchor)) * pb.q + (kappa * std::conj(pb.rho_lambda2)) * pb.f;
    s.w = rank_one_solve(g, kappa, pb.f, z);
    s.x = s.w.dot(pb.q) - pb.rho_lambda1 + mu * b * pb.x_anchor;
    s.y = (s.w.dot(pb.f) - pb.rho_lambda2) / (1.0 + mu * g);
    s.mu = mu;
    s.unconstrained = (mu == 0.0);
    return s;
  };

  WxySolution free = solve_at(0.0);
  if (wxy_constraint(pb, free.w, free.x, free.y) <= 0.0) return free;

  const double scale = std::max(b * std::norm(pb.x_anchor), std::numeric_limits<double>::min());
  auto gfun = [&](double mu) {
    const WxySolution s = solve_at(mu);
    return wxy_constraint(pb, s.w, s.x, s.y);
  };
  const auto root = detail::bisect_decreasing(gfun, 0.0, 1.0, opts.bisection_tol * scale,
                                              opts.bracket_doublings, opts.bisection_max_iters);
  if (!root) throw SolverFailure("radar constraint multiplier could not be bracketed");
  return solve_at(root->root);
}


USolution solve_u(const UProblem& pb, const PddOptions& opts) {
  const std::size_t K = pb.h.size();
  if (pb.target.size() != K) throw DimensionMismatch("one target per direction is required");
  const Eigen::Index M = pb.p.size();
  for (const auto& hk : pb.h)
    if (hk.size() != M) throw DimensionMismatch("h_k length differs from p");
  if (!(pb.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (pb.p_max < 0.0) throw std::invalid_argument("power budget must be non-negative");

  USolution out;
  out.u.assign(K, CVec::Zero(M));
  if (pb.p_max == 0.0) {
    out.lambda_tilde = std::numeric_limits<double>::infinity();
    out.unconstrained = false;
    return out;
  }

  const double half_inv_rho = 0.5 / pb.rho;
  const double pn = pb.p.squaredNorm();
  for (std::size_t k = 0; k < K; ++k) {
    const CVec& h = pb.h[k];
    const double hn = h.squaredNorm();
    const cd t = pb.target[k];
    if (hn == 0.0) continue;
    if (pn == 0.0 || pb.v_sq == 0.0) {
      out.u[k] = h * (t / hn);
      continue;
    }
    const cd ph = pb.p.dot(h);
    const double det = pn * hn - std::norm(ph);
    if (det <= 1e-12 * pn * hn) {
      const double hnorm = std::sqrt(hn);
      const cd pi = h.dot(pb.p) / hnorm;
      const cd z = half_inv_rho * hnorm * t / (pb.v_sq * std::norm(pi) + half_inv_rho * hn);
      out.u[k] = h * (z / hnorm);
    } else {
      out.u[k] = (pn * h - ph * pb.p) * (t / det);
    }
  }
  if (total_power(out.u) <= pb.p_max) return out;

  // lambda > 0: u_k = (A_k + lambda I)^{-1} b_k in the eigenbasis of A_k.
  std::vector<Eigen::VectorXd> d(K);
  std::vector<CMat> V(K);
  std::vector<CVec> c(K);
  double d_max = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const CMat A = pb.v_sq * pb.p * pb.p.adjoint() + half_inv_rho * pb.h[k] * pb.h[k].adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> es(A);
    d[k] = es.eigenvalues().cwiseMax(0.0);
    V[k] = es.eigenvectors();
    c[k] = V[k].adjoint() * (pb.h[k] * (half_inv_rho * pb.target[k]));
    d_max = std::max(d_max, d[k].maxCoeff());
  }
  const double null_tol = 1e-12 * d_max;
  for (std::size_t k = 0; k < K; ++k)
    for (Eigen::Index i = 0; i < M; ++i)
      if (d[k](i) <= null_tol) c[k](i) = 0.0;

  auto power = [&](double lambda) {
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k)
      for (Eigen::Index i = 0; i < M; ++i) s += std::norm(c[k](i)) / ((d[k](i) + lambda) * (d[k](i) + lambda));
    return s;
  };
  const auto root = detail::bisect_decreasing(power, pb.p_max, d_max > 0.0 ? d_max : 1.0,
                                              opts.bisection_tol * pb.p_max, opts.bracket_doublings,
                                              opts.bisection_max_iters);
  if (!root) throw SolverFailure("power multiplier could not be bracketed");
  const double lambda = root->root;
  for (std::size_t k = 0; k < K; ++k) {
    CVec scaled = c[k];
    for (Eigen::Index i = 0; i < M; ++i) scaled(i) /= (d[k](i) + lambda);
    out.u[k] = V[k] * scaled;
  }
  out.lambda_tilde = lambda;
  out.unconstrained = false;
  return out;
}

cd optimal_unit_phase(cd z) {
  if (z == cd{0.0, 0.0}) return {1.0, 0.0};
  return unit_phasor(kPi - std::arg(z));
}

cd update_v(double a, cd b) {
  if (!(a > 0.0)) throw std::invalid_argument("interference-plus-noise term must be positive");
  return b / a;
}

namespace {

double interference_plus_noise(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg) {
  const auto eff = effective_direct_channels(ch, bf.phi1, bf.phi2);
  return kl_factor(cfg) * cfg.noise_power + interference_power(eff.h_hat_sr, bf.u);
}

cd scaled_signal(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg) {
  return std::sqrt(kl_factor(cfg) * cfg.p_comm) * comm_signal(ch, bf.phi1, bf.phi2);
}

cd optimal_v(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg) {
  return update_v(interference_plus_noise(ch, bf, cfg), scaled_signal(ch, bf, cfg));
}

void check_state(const BeamformerSet& bf, const PddState& st, const ScenarioConfig& cfg) {
  const std::size_t K = static_cast<std::size_t>(cfg.k_directions());
  if (bf.u.size() != K || bf.w.size() != K || st.x.size() != K || st.y.size() != K ||
      st.lambda1.size() != K || st.lambda2.size() != K || st.x_anchor.size() != K)
    throw DimensionMismatch("per-direction variables must have one entry per direction");
}

}  // namespace

WxySolution update_w_x_y(int k, const ChannelSet& ch, const BeamformerSet& bf, const PddState& state,
                         const ScenarioConfig& cfg, const PddOptions& opts) {
  check_state(bf, state, cfg);
  WxyProblem pb;
  pb.q = echo_direction(cfg, k, bf.u.at(k));
  pb.f = scaled_intf_channel(ch, bf.phi1, cfg);
  pb.beta = echo_beta(cfg, k);
  pb.gamma = cfg.gamma_r;
  pb.x_anchor = state.x_anchor[k];
  pb.rho_lambda1 = state.rho * state.lambda1[k];
  pb.rho_lambda2 = state.rho * state.lambda2[k];
  return solve_wxy(pb, opts);
}

USolution update_u(const ChannelSet& ch, const BeamformerSet& bf, const PddState& state,
                   const ScenarioConfig& cfg, const PddOptions& opts) {
  check_state(bf, state, cfg);
  const int K = cfg.k_directions();
  UProblem pb;
  pb.p = effective_direct_channels(ch, bf.phi1, bf.phi2).h_hat_sr;
  pb.v_sq = std::norm(state.v);
  pb.rho = state.rho;
  pb.p_max = cfg.p_max;
  for (int k = 0; k < K; ++k) {
    const CVec a = steer(cfg.thetas[k], cfg.m_antennas, cfg.antenna_spacing_ratio);
    pb.h.push_back(a.conjugate() * a.dot(bf.w[k]));
    pb.target.push_back(state.x[k] + state.rho * state.lambda1[k]);
  }
  return solve_u(pb, opts);
}

namespace {

// Per-direction coefficients of phi1 in w_k^H f~ and the current values.
struct Phi1Cache {
  CMat coef;  // K x N1, (w_k^H H~_ts)(n)
  CVec z;     // w_k^H f~
  CVec lin;   // N1, conj(g(n)) + (H_tr phi2)(n)
  cd sv;      // conj(v) sqrt(KL p)
};

Phi1Cache make_phi1_cache(const ChannelSet& ch, const BeamformerSet& bf, const PddState& st,
                          const ScenarioConfig& cfg) {
  const int K = cfg.k_directions();
  const double s = intf_scale(cfg);
  Phi1Cache c;
  CMat W(ch.m(), K);
  for (int k = 0; k < K; ++k) W.col(k) = bf.w[k];
  c.coef = s * (W.adjoint() * ch.eff_h_ts);
  c.z = W.adjoint() * scaled_intf_channel(ch, bf.phi1, cfg);
  c.lin = ch.eff_g_tr.conjugate();
  if (ch.n2() > 0) c.lin += ch.eff_h_tr * bf.phi2;
  c.sv = std::conj(st.v) * std::sqrt(kl_factor(cfg) * cfg.p_comm);
  return c;
}

cd phi1_argument(int n, const Phi1Cache& c, const BeamformerSet& bf, const PddState& st) {
  const cd cur = bf.phi1(n);
  cd sum_b{0.0, 0.0};
  for (Eigen::Index k = 0; k < c.z.size(); ++k) {
    const cd ckn = c.coef(k, n);
    const cd r = st.y[k] + st.rho * st.lambda2[k] - (c.z(k) - ckn * cur);
    sum_b += std::conj(-r) * ckn;
  }
  return sum_b / st.rho - 2.0 * c.sv * c.lin(n);
}

struct Phi2Cache {
  CMat d;   // N2 x K, (H_sr u_k)(n)
  CVec z;   // h_hat_sr^H u_k
  CVec lin; // N2, conj(f(n)) + (phi1^T H_tr)(n)
  cd sv;
  double v_sq;
};

Phi2Cache make_phi2_cache(const ChannelSet& ch, const BeamformerSet& bf, const PddState& st,
                          const ScenarioConfig& cfg) {
  const int K = cfg.k_directions();
  Phi2Cache c;
  CMat U(ch.m(), K);
  for (int k = 0; k < K; ++k) U.col(k) = bf.u[k];
  c.d = ch.eff_h_sr * U;
  const CVec hs = effective_direct_channels(ch, bf.phi1, bf.phi2).h_hat_sr;
  c.z = U.adjoint() * hs;
  c.z = c.z.conjugate().eval();
  c.lin = ch.eff_f_tr.conjugate();
  if (ch.n1() > 0) c.lin += ch.eff_h_tr.transpose() * bf.phi1;
  c.sv = std::conj(st.v) * std::sqrt(kl_factor(cfg) * cfg.p_comm);
  c.v_sq = std::norm(st.v);
  return c;
}

cd phi2_argument(int n, const Phi2Cache& c, const BeamformerSet& bf) {
  const cd cur = bf.phi2(n);
  cd sum_c{0.0, 0.0};
  for (Eigen::Index k = 0; k < c.z.size(); ++k) {
    const cd dnk = c.d(n, k);
    sum_c += std::conj(c.z(k) - dnk * cur) * dnk;
  }
  return c.v_sq * sum_c - c.sv * c.lin(n);
}

}  // namespace

cd update_phi1_element(int n, const ChannelSet& ch, const BeamformerSet& bf, const PddState& state,
                       const ScenarioConfig& cfg) {
  check_state(bf, state, cfg);
  if (n < 0 || n >= ch.n1()) throw std::out_of_range("phi1 element index out of range");
  const Phi1Cache c = make_phi1_cache(ch, bf, state, cfg);
  return optimal_unit_phase(phi1_argument(n, c, bf, state));
}

cd update_phi2_element(int n, const ChannelSet& ch, const BeamformerSet& bf, const PddState& state,
                       const ScenarioConfig& cfg) {
  check_state(bf, state, cfg);
  if (n < 0 || n >= ch.n2()) throw std::out_of_range("phi2 element index out of range");
  const Phi2Cache c = make_phi2_cache(ch, bf, state, cfg);
  return optimal_unit_phase(phi2_argument(n, c, bf));
}

void sweep_phi1(const ChannelSet& ch, BeamformerSet& bf, const PddState& state, const ScenarioConfig& cfg) {
  check_state(bf, state, cfg);
  if (ch.n1() == 0) return;
  Phi1Cache c = make_phi1_cache(ch, bf, state, cfg);
  for (int n = 0; n < ch.n1(); ++n) {
    const cd next = optimal_unit_phase(phi1_argument(n, c, bf, state));
    c.z += c.coef.col(n) * (next - bf.phi1(n));
    bf.phi1(n) = next;
  }
}

void sweep_phi2(const ChannelSet& ch, BeamformerSet& bf, const PddState& state, const ScenarioConfig& cfg) {
  check_state(bf, state, cfg);
  if (ch.n2() == 0) return;
  Phi2Cache c = make_phi2_cache(ch, bf, state, cfg);
  for (int n = 0; n < ch.n2(); ++n) {
    const cd next = optimal_unit_phase(phi2_argument(n, c, bf));
    c.z += c.d.row(n).transpose() * (next - bf.phi2(n));
    bf.phi2(n) = next;
  }
}

InnerResult cccp_inner_loop(const ChannelSet& ch, BeamformerSet& bf, PddState& state,
                            const PddOptions& opts, const ScenarioConfig& cfg) {
  check_state(bf, state, cfg);
  const int K = cfg.k_directions();
  InnerResult res;
  double prev = al_objective(ch, bf, state, cfg);
  for (int it = 0; it < opts.inner_max_iters; ++it) {
    state.v = optimal_v(ch, bf, cfg);
    for (int k = 0; k < K; ++k) {
      const WxySolution s = update_w_x_y(k, ch, bf, state, cfg, opts);
      bf.w[k] = s.w;
      state.x[k] = s.x;
      state.y[k] = s.y;
    }
    bf.u = update_u(ch, bf, state, cfg, opts).u;
    sweep_phi1(ch, bf, state, cfg);
    sweep_phi2(ch, bf, state, cfg);
    state.x_anchor = state.x;

    const double obj = al_objective(ch, bf, state, cfg);
    res.objective_trace.push_back(obj);
    res.iterations = it + 1;
    if (std::abs(obj - prev) < opts.inner_tol * std::max(1.0, std::abs(obj))) break;
    prev = obj;
  }
  return res;
}

PddState consistent_state(const ChannelSet& ch, const BeamformerSet& bf, const ScenarioConfig& cfg,
                          const PddOptions& opts) {
  const int K = cfg.k_directions();
  PddState st;
  st.rho = opts.rho0;
  st.eta = opts.eta0;
  st.c_shrink = opts.c_shrink;
  const CVec f = scaled_intf_channel(ch, bf.phi1, cfg);
  double q_sq = 0.0;
  for (int k = 0; k < K; ++k) {
    const CVec q = echo_direction(cfg, k, bf.u.at(k));
    q_sq = std::max(q_sq, q.squaredNorm());
    st.x.push_back(bf.w.at(k).dot(q));
    st.y.push_back(bf.w[k].dot(f));
  }
  // A weak initial penalty lets u_k, w_k and x_k shrink together towards the
  // trivial point w_k = 0, which meets the reformulated radar constraint.
  if (q_sq > 0.0) st.rho /= q_sq;
  st.lambda1.assign(K, cd{0.0, 0.0});
  st.lambda2.assign(K, cd{0.0, 0.0});
  st.x_anchor = st.x;
  st.v = optimal_v(ch, bf, cfg);
  return st;
}

InitialPoint initialize_feasible(const ChannelSet& ch, const ScenarioConfig& cfg, const PddOptions& opts) {
  const ClosedFormOptions cf = closed_form_options(opts);
  std::vector<std::pair<CVec, CVec>> branches;
  branches.push_back(large_power_phases(ch));
  const auto low = min_interference_phases(ch, cf);
  branches.emplace_back(low.phi1, low.phi2);

  bool found = false;
  double best = -std::numeric_limits<double>::infinity();
  BeamformerSet best_bf;
  for (const auto& [phi1, phi2] : branches) {
    RadarClosedForm design;
    try {
      design = optimal_radar_beamforming(ch, phi1, phi2, cfg, cf);
    } catch (const InfeasibleScenario&) {
      continue;
    }
    BeamformerSet bf{design.u, design.w, phi1, phi2};
    for (auto& w : bf.w) {
      const double n = w.norm();
      if (n > 0.0) w /= n;
    }
    const double sinr = comm_sinr(ch, bf, cfg);
    if (!found || sinr > best) {
      best = sinr;
      best_bf = std::move(bf);
      found = true;
    }
  }
  if (!found) throw InfeasibleScenario("no feasible radar design for either surface configuration");
  InitialPoint init;
  init.state = consistent_state(ch, best_bf, cfg, opts);
  init.bf = std::move(best_bf);
  return init;
}

namespace {

// Receive beamformer maximizing each radar SINR for the final transmit design.
void polish_receivers(const ChannelSet& ch, BeamformerSet& bf, const ScenarioConfig& cfg) {
  const CVec f = ch.h_ts + ch.eff_h_ts * bf.phi1;
  const double s = cfg.p_comm / cfg.noise_power;
  for (int k = 0; k < cfg.k_directions(); ++k) {
    const CVec q = echo_direction(cfg, k, bf.u[k]);
    if (q.squaredNorm() == 0.0) continue;
    CVec w = rank_one_solve(1.0, s, f, q);
    bf.w[k] = w / w.norm();
  }
}

}  // namespace

SolveReport pdd_solve(const ChannelSet& ch, const ScenarioConfig& cfg, const PddOptions& opts,
                      InitialPoint init) {
  opts.validate();
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  BeamformerSet bf = std::move(init.bf);
  PddState st = std::move(init.state);
  check_state(bf, st, cfg);
  try {
    for (int it = 0; it < opts.outer_max_iters; ++it) {
      const InnerResult inner = cccp_inner_loop(ch, bf, st, opts, cfg);
      const double h = constraint_violation(ch, bf, st, cfg);
      if (h <= st.eta) {
        const CVec f = scaled_intf_channel(ch, bf.phi1, cfg);
        for (int k = 0; k < cfg.k_directions(); ++k) {
          st.lambda1[k] += (st.x[k] - bf.w[k].dot(echo_direction(cfg, k, bf.u[k]))) / st.rho;
          st.lambda2[k] += (st.y[k] - bf.w[k].dot(f)) / st.rho;
        }
      } else {
        st.rho *= st.c_shrink;
      }
      st.eta = 0.7 * h;
      report.objective_trace.push_back(inner.objective_trace.empty() ? al_objective(ch, bf, st, cfg)
                                                                     : inner.objective_trace.back());
      report.violation_trace.push_back(h);
      report.comm_sinr_trace.push_back(comm_sinr(ch, bf, cfg));
      report.iterations = it + 1;
      if (h <= opts.outer_violation_tol) break;
    }
  } catch (const SolverFailure& e) {
    report.diagnostic = e.what();
    report.solver_failure = true;
  }
  polish_receivers(ch, bf, cfg);
  fill_report(ch, bf, cfg, report);
  if (!report.diagnostic.empty()) report.feasible = false;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

SolveReport pdd_solve(const ChannelSet& ch, const ScenarioConfig& cfg, const PddOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  InitialPoint init;
  try {
    init = initialize_feasible(ch, cfg, opts);
  } catch (const InfeasibleScenario& e) {
    SolveReport report;
    report.diagnostic = e.what();
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
  }
  SolveReport report = pdd_solve(ch, cfg, opts, std::move(init));
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace riscoex
