#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "riscoex/closed_form.hpp"
#include "riscoex/pdd.hpp"
#include "test_support.hpp"

// Independent reference solvers shared by the unit and acceptance suites.
namespace testing_support {

using namespace riscoex;

inline double wxy_objective(const WxyProblem& pb, const CVec& w, cd x, cd y) {
  return std::norm(x - w.dot(pb.q) + pb.rho_lambda1) + std::norm(y - w.dot(pb.f) + pb.rho_lambda2);
}

inline WxyProblem random_wxy(std::mt19937_64& rng, int m) {
  WxyProblem pb;
  pb.q = random_vec(rng, m);
  pb.f = random_vec(rng, m);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  pb.beta = u(rng);
  pb.gamma = u(rng);
  pb.x_anchor = cn(rng, 2.0);
  pb.rho_lambda1 = cn(rng, 0.3);
  pb.rho_lambda2 = cn(rng, 0.3);
  return pb;
}

// Dual function of the step-1 problem over z = (conj(w), x, y), solved densely.
inline double wxy_dual(const WxyProblem& pb, double mu) {
  const int m = static_cast<int>(pb.q.size());
  CMat A = CMat::Zero(2, m + 2);
  A.block(0, 0, 1, m) = -pb.q.transpose();
  A.block(1, 0, 1, m) = -pb.f.transpose();
  A(0, m) = 1.0;
  A(1, m + 1) = 1.0;
  CVec c(2);
  c << -pb.rho_lambda1, -pb.rho_lambda2;
  CMat H = A.adjoint() * A;
  for (int i = 0; i < m; ++i) H(i, i) += mu * pb.gamma;
  H(m + 1, m + 1) += mu * pb.gamma;
  CVec b = A.adjoint() * c;
  b(m) += mu * pb.beta * pb.x_anchor;
  const CVec z = H.completeOrthogonalDecomposition().solve(b);
  return c.squaredNorm() - std::real(b.dot(z)) + mu * pb.beta * std::norm(pb.x_anchor);
}

inline double wxy_dual_max(const WxyProblem& pb) {
  double hi = 1.0;
  while (wxy_dual(pb, hi * 1.5) > wxy_dual(pb, hi) && hi < 1e12) hi *= 2.0;
  double lo = 0.0;
  hi *= 1.5;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 300; ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (wxy_dual(pb, m1) < wxy_dual(pb, m2))
      lo = m1;
    else
      hi = m2;
  }
  return std::max(wxy_dual(pb, 0.5 * (lo + hi)), wxy_dual(pb, 0.0));
}

inline double u_objective(const UProblem& pb, const std::vector<CVec>& u) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    s += pb.v_sq * std::norm(pb.p.dot(u[k]));
    s += std::norm(pb.h[k].dot(u[k]) - pb.target[k]) / (2.0 * pb.rho);
  }
  return s;
}

// FISTA with projection onto the power ball.
inline double u_oracle(const UProblem& pb, int iters) {
  const std::size_t K = pb.h.size();
  const int m = static_cast<int>(pb.p.size());
  double lip = 0.0;
  for (const auto& h : pb.h) {
    const CMat A = pb.v_sq * pb.p * pb.p.adjoint() + h * h.adjoint() / (2.0 * pb.rho);
    lip = std::max(lip, 2.0 * Eigen::SelfAdjointEigenSolver<CMat>(A).eigenvalues().maxCoeff());
  }
  auto project = [&](std::vector<CVec>& u) {
    double p = 0.0;
    for (const auto& x : u) p += x.squaredNorm();
    if (p > pb.p_max)
      for (auto& x : u) x *= std::sqrt(pb.p_max / p);
  };
  std::vector<CVec> x(K, CVec::Zero(m)), y = x, prev = x;
  double t = 1.0;
  for (int it = 0; it < iters; ++it) {
    for (std::size_t k = 0; k < K; ++k) {
      const CVec grad = 2.0 * (pb.v_sq * pb.p * pb.p.dot(y[k]) +
                               pb.h[k] * (pb.h[k].dot(y[k]) - pb.target[k]) / (2.0 * pb.rho));
      x[k] = y[k] - grad / lip;
    }
    project(x);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t k = 0; k < K; ++k) y[k] = x[k] + ((t - 1.0) / tn) * (x[k] - prev[k]);
    prev = x;
    t = tn;
  }
  return u_objective(pb, x);
}

inline UProblem random_u(std::mt19937_64& rng, int m, int k) {
  UProblem pb;
  pb.p = random_vec(rng, m);
  pb.v_sq = 0.8;
  pb.rho = 0.4;
  for (int i = 0; i < k; ++i) {
    pb.h.push_back(random_vec(rng, m));
    pb.target.push_back(cn(rng));
  }
  pb.p_max = 1e6;
  return pb;
}

struct SmallInstance {
  ScenarioConfig cfg;
  ChannelSet ch;
  BeamformerSet bf;
  PddState st;
};

inline SmallInstance small_instance(std::uint64_t seed, int n1 = 5, int n2 = 4) {
  std::mt19937_64 rng(seed);
  SmallInstance in;
  in.cfg = small_config(3, 2, n1, n2);
  in.ch = random_channels(rng, 3, n1, n2);
  for (int k = 0; k < 2; ++k) {
    in.bf.u.push_back(random_vec(rng, 3));
    in.bf.w.push_back(random_vec(rng, 3));
    in.st.x.push_back(cn(rng));
    in.st.y.push_back(cn(rng));
    in.st.lambda1.push_back(cn(rng));
    in.st.lambda2.push_back(cn(rng));
  }
  in.st.x_anchor = in.st.x;
  in.bf.phi1 = random_phases(rng, n1);
  in.bf.phi2 = random_phases(rng, n2);
  in.st.v = cn(rng);
  in.st.rho = 0.7;
  return in;
}
// Minimum interference design by Lagrangian duality on the power budget.
// With the MVDR receiver the radar target reads |a^T u_k|^2 >= c_k, and at the
// optimum it is tight, so each direction is an equality-constrained quadratic.
struct InterferenceOracle {
  CVec p;                       // h_hat_sr
  std::vector<CVec> b;          // conj(a_k)
  std::vector<double> c;        // required |a^T u_k|^2
  double p_max = 0.0;

  double dual(double lambda) const {
    const int m = static_cast<int>(p.size());
    const CMat Q = p * p.adjoint() + lambda * CMat::Identity(m, m);
    double s = -lambda * p_max;
    for (std::size_t k = 0; k < b.size(); ++k) {
      const CVec z = Q.completeOrthogonalDecomposition().solve(b[k]);
      s += c[k] / std::real(b[k].dot(z));
    }
    return s;
  }

  double solve() const {
    double lo = 0.0, hi = 1.0;
    while (dual(2.0 * hi) > dual(hi) && hi < 1e12) hi *= 2.0;
    hi *= 2.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 300; ++it) {
      const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
      if (dual(m1) < dual(m2))
        lo = m1;
      else
        hi = m2;
    }
    return dual(0.5 * (lo + hi));
  }
};

inline InterferenceOracle make_oracle(const ChannelSet& ch, const CVec& phi1, const CVec& phi2, const ScenarioConfig& cfg) {
  const auto eff = effective_direct_channels(ch, phi1, phi2);
  const int m = cfg.m_antennas;
  const CMat R = cfg.noise_power * CMat::Identity(m, m) + cfg.p_comm * eff.h_hat_ts * eff.h_hat_ts.adjoint();
  InterferenceOracle o;
  o.p = eff.h_hat_sr;
  o.p_max = cfg.p_max;
  for (int k = 0; k < cfg.k_directions(); ++k) {
    const CVec a = steer(cfg.thetas[k], m, cfg.antenna_spacing_ratio);
    const double gain = std::real(a.dot(R.ldlt().solve(a)));
    o.b.push_back(a.conjugate());
    o.c.push_back(cfg.gamma_r / (std::norm(cfg.alpha_gain[k]) * gain));
  }
  return o;
}

// Minimizer of a|v|^2 - 2 Re(v^* b) by a zooming grid search.
inline cd v_grid_oracle(double a, cd b) {
  auto q = [&](cd v) { return std::norm(v) * a - 2.0 * std::real(std::conj(v) * b); };
  cd center{0.0, 0.0};
  double half = 2.0 * std::abs(b) / a + 1.0;
  for (int zoom = 0; zoom < 12; ++zoom) {
    cd best = center;
    for (int i = -50; i <= 50; ++i)
      for (int j = -50; j <= 50; ++j) {
        const cd v = center + cd{half * i / 50.0, half * j / 50.0};
        if (q(v) < q(best)) best = v;
      }
    center = best;
    half /= 10.0;
  }
  return center;
}

struct GridMin {
  double value = std::numeric_limits<double>::infinity();
  double angle = 0.0;
};

// AL objective minimized over one phase element on a uniform grid.
inline GridMin phase_grid_oracle(const SmallInstance& in, int surface, int n, int grid) {
  BeamformerSet probe = in.bf;
  CVec& phi = surface == 1 ? probe.phi1 : probe.phi2;
  GridMin best;
  for (int g = 0; g < grid; ++g) {
    const double ang = 2.0 * kPi * g / grid;
    phi(n) = std::polar(1.0, ang);
    const double v = al_objective(in.ch, probe, in.st, in.cfg);
    if (v < best.value) best = {v, ang};
  }
  return best;
}

inline double al_with_phase(const SmallInstance& in, int surface, int n, cd value) {
  BeamformerSet probe = in.bf;
  (surface == 1 ? probe.phi1 : probe.phi2)(n) = value;
  return al_objective(in.ch, probe, in.st, in.cfg);
}

}  // namespace testing_support
