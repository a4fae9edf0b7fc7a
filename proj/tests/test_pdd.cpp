#include <cmath>
#include <limits>

#include "doctest.h"
#include "riscoex/pdd.hpp"
#include "oracles.hpp"

using namespace riscoex;
using namespace testing_support;

namespace {

ScenarioConfig default_at(double p_max, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.p_max = p_max;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("update_v") {
  CHECK(update_v(1.0, {0.0, 0.0}) == cd{0.0, 0.0});
  CHECK(std::abs(update_v(2.0, {1.0, 1.0}) - cd{0.5, 0.5}) < 1e-15);
  CHECK_THROWS_AS(update_v(0.0, {1.0, 0.0}), std::invalid_argument);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.1, 5.0);
  for (int t = 0; t < 20; ++t) {
    const double a = ua(rng);
    const cd b = cn(rng, 4.0);
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
    CHECK(std::abs(update_v(a, b) - center) < 1e-6 * std::max(1.0, std::abs(center)));
  }
}

TEST_CASE("optimal_unit_phase") {
  CHECK(std::abs(optimal_unit_phase(5.0) - cd{-1.0, 0.0}) < 1e-15);
  CHECK(std::abs(optimal_unit_phase(-5.0) - cd{1.0, 0.0}) < 1e-15);
  CHECK(optimal_unit_phase(0.0) == cd{1.0, 0.0});
  CHECK(std::abs(optimal_unit_phase({0.0, 2.0}) - cd{0.0, 1.0}) < 1e-15);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const cd z = cn(rng);
    const cd phi = optimal_unit_phase(z);
    CHECK(std::abs(std::abs(phi) - 1.0) < 1e-15);
    CHECK(std::real(z * phi) == doctest::Approx(-std::abs(z)).epsilon(1e-12));
  }
}

TEST_CASE("solve_wxy") {
  PddOptions opts;

  SUBCASE("zero channels") {
    WxyProblem pb;
    pb.q = CVec::Zero(3);
    pb.f = CVec::Zero(3);
    pb.beta = 2.0;
    pb.gamma = 3.0;
    pb.x_anchor = {1.0, 1.0};
    const WxySolution s = solve_wxy(pb, opts);
    CHECK(s.w.norm() == 0.0);
    CHECK_FALSE(s.unconstrained);
    CHECK(s.mu == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(std::abs(s.x - cd{0.5, 0.5}) < 1e-8);

    pb.x_anchor = 0.0;
    const WxySolution free = solve_wxy(pb, opts);
    CHECK(free.unconstrained);
    CHECK(std::abs(free.x) == 0.0);

    pb.rho_lambda2 = {0.5, 0.0};
    CHECK_THROWS_AS(solve_wxy(pb, opts), SolverFailure);
  }

  SUBCASE("dimension mismatch") {
    WxyProblem pb;
    pb.q = CVec::Zero(3);
    pb.f = CVec::Zero(2);
    CHECK_THROWS_AS(solve_wxy(pb, opts), DimensionMismatch);
  }

  SUBCASE("random instances against the dual oracle and KKT") {
    std::mt19937_64 rng(17);
    int constrained = 0, free = 0;
    for (int t = 0; t < 60; ++t) {
      WxyProblem pb = random_wxy(rng, 3);
      if (t % 3 == 0) {
        pb.rho_lambda1 = 0.0;
        pb.rho_lambda2 = 0.0;
        pb.x_anchor *= 20.0;
      }
      const WxySolution s = solve_wxy(pb, opts);
      const double g = wxy_constraint(pb, s.w, s.x, s.y);
      const double scale = std::max(1.0, pb.beta * std::norm(pb.x_anchor));
      CHECK(g <= 1e-8 * scale);

      const cd r1 = s.x - s.w.dot(pb.q) + pb.rho_lambda1;
      const cd r2 = s.y - s.w.dot(pb.f) + pb.rho_lambda2;
      CHECK(std::abs(r1 - s.mu * pb.beta * pb.x_anchor) < 1e-8 * scale);
      CHECK(std::abs(r2 + s.mu * pb.gamma * s.y) < 1e-8 * scale);
      const CVec grad_w = -pb.q * std::conj(r1) - pb.f * std::conj(r2) + s.mu * pb.gamma * s.w;
      CHECK(grad_w.norm() < 1e-8 * scale);
      CHECK(std::abs(s.mu * g) < 1e-8 * scale);
      CHECK(s.mu >= 0.0);

      const double obj = wxy_objective(pb, s.w, s.x, s.y);
      const double dual = wxy_dual_max(pb);
      CHECK(std::abs(obj - dual) <= 1e-6 * std::max(1.0, std::abs(dual)));

      if (s.unconstrained) {
        ++free;
        if (pb.rho_lambda1 == 0.0 && pb.rho_lambda2 == 0.0) {
          CHECK(std::abs(s.x - s.w.dot(pb.q)) < 1e-12 * scale);
          CHECK(std::abs(s.y - s.w.dot(pb.f)) < 1e-12 * scale);
        }
      } else {
        ++constrained;
      }
    }
    CHECK(constrained > 5);
    CHECK(free > 5);
  }
}

TEST_CASE("solve_u") {
  PddOptions opts;

  SUBCASE("zero interference direction") {
    std::mt19937_64 rng(2);
    UProblem pb = random_u(rng, 4, 3);
    pb.p.setZero();
    const USolution s = solve_u(pb, opts);
    CHECK(s.unconstrained);
    for (int k = 0; k < 3; ++k) {
      const CVec expect = pb.h[k] * (pb.target[k] / pb.h[k].squaredNorm());
      CHECK((s.u[k] - expect).norm() < 1e-14);
      CHECK(std::abs(pb.h[k].dot(s.u[k]) - pb.target[k]) < 1e-13);
    }
  }

  SUBCASE("zero targets") {
    std::mt19937_64 rng(3);
    UProblem pb = random_u(rng, 4, 3);
    for (auto& t : pb.target) t = 0.0;
    const USolution s = solve_u(pb, opts);
    CHECK(s.unconstrained);
    CHECK(total_power(s.u) == 0.0);
  }

  SUBCASE("unconstrained case nulls the interference direction") {
    std::mt19937_64 rng(4);
    const UProblem pb = random_u(rng, 4, 2);
    const USolution s = solve_u(pb, opts);
    REQUIRE(s.unconstrained);
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(pb.p.dot(s.u[k])) < 1e-12);
      CHECK(std::abs(pb.h[k].dot(s.u[k]) - pb.target[k]) < 1e-12);
    }
    CHECK(u_objective(pb, s.u) < 1e-20);
  }

  SUBCASE("tight budget against projected gradient") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
      UProblem pb = random_u(rng, 3, 2);
      pb.p_max = 0.3 * total_power(solve_u(pb, opts).u);
      const USolution s = solve_u(pb, opts);
      CHECK_FALSE(s.unconstrained);
      CHECK(std::abs(total_power(s.u) - pb.p_max) <= 1e-8);
      const double obj = u_objective(pb, s.u);
      CHECK(std::abs(obj - u_oracle(pb, 200000)) <= 1e-6 * obj);

      for (std::size_t k = 0; k < 2; ++k) {
        const CVec kkt = pb.v_sq * pb.p * pb.p.dot(s.u[k]) +
                         pb.h[k] * (pb.h[k].dot(s.u[k]) - pb.target[k]) / (2.0 * pb.rho) + s.lambda_tilde * s.u[k];
        CHECK(kkt.norm() < 1e-8);
      }
      CHECK(std::abs(s.lambda_tilde * (total_power(s.u) - pb.p_max)) < 1e-8);
    }
  }

  SUBCASE("parallel interference and echo directions") {
    std::mt19937_64 rng(6);
    UProblem pb = random_u(rng, 3, 1);
    pb.p = pb.h[0] * cd{0.5, -1.0};
    const USolution s = solve_u(pb, opts);
    CHECK(u_objective(pb, s.u) == doctest::Approx(u_oracle(pb, 200000)).epsilon(1e-6));
  }

  SUBCASE("zero budget and bad input") {
    std::mt19937_64 rng(7);
    UProblem pb = random_u(rng, 3, 2);
    pb.p_max = 0.0;
    CHECK(total_power(solve_u(pb, opts).u) == 0.0);
    pb.p_max = -1.0;
    CHECK_THROWS_AS(solve_u(pb, opts), std::invalid_argument);
    pb.p_max = 1.0;
    pb.target.pop_back();
    CHECK_THROWS_AS(solve_u(pb, opts), DimensionMismatch);
  }
}

TEST_CASE("phase element updates minimize the AL objective") {
  const int grid = 4096;
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    SmallInstance in = small_instance(seed);
    for (int n = 0; n < in.ch.n1(); ++n) {
      const cd phi = update_phi1_element(n, in.ch, in.bf, in.st, in.cfg);
      CHECK(std::abs(std::abs(phi) - 1.0) < 1e-12);
      BeamformerSet probe = in.bf;
      double best = std::numeric_limits<double>::infinity();
      double best_angle = 0.0;
      for (int g = 0; g < grid; ++g) {
        probe.phi1(n) = std::polar(1.0, 2.0 * kPi * g / grid);
        const double v = al_objective(in.ch, probe, in.st, in.cfg);
        if (v < best) {
          best = v;
          best_angle = 2.0 * kPi * g / grid;
        }
      }
      probe.phi1(n) = phi;
      const double at = al_objective(in.ch, probe, in.st, in.cfg);
      CHECK(at <= best + 1e-12 * std::max(1.0, std::abs(best)));
      CHECK(std::abs(std::arg(phi * std::polar(1.0, -best_angle))) <= 2.0 * kPi / grid);
    }
    for (int n = 0; n < in.ch.n2(); ++n) {
      const cd phi = update_phi2_element(n, in.ch, in.bf, in.st, in.cfg);
      CHECK(std::abs(std::abs(phi) - 1.0) < 1e-12);
      BeamformerSet probe = in.bf;
      double best = std::numeric_limits<double>::infinity();
      double best_angle = 0.0;
      for (int g = 0; g < grid; ++g) {
        probe.phi2(n) = std::polar(1.0, 2.0 * kPi * g / grid);
        const double v = al_objective(in.ch, probe, in.st, in.cfg);
        if (v < best) {
          best = v;
          best_angle = 2.0 * kPi * g / grid;
        }
      }
      probe.phi2(n) = phi;
      const double at = al_objective(in.ch, probe, in.st, in.cfg);
      CHECK(at <= best + 1e-12 * std::max(1.0, std::abs(best)));
      CHECK(std::abs(std::arg(phi * std::polar(1.0, -best_angle))) <= 2.0 * kPi / grid);
    }
  }
}

TEST_CASE("phase element update edge cases") {
  SmallInstance in = small_instance(40);
  in.st.v = 0.0;
  for (int n = 0; n < in.ch.n2(); ++n) CHECK(update_phi2_element(n, in.ch, in.bf, in.st, in.cfg) == cd{1.0, 0.0});
  CHECK_THROWS_AS(update_phi1_element(in.ch.n1(), in.ch, in.bf, in.st, in.cfg), std::out_of_range);
  CHECK_THROWS_AS(update_phi2_element(-1, in.ch, in.bf, in.st, in.cfg), std::out_of_range);
  in.st.x.pop_back();
  CHECK_THROWS_AS(update_phi1_element(0, in.ch, in.bf, in.st, in.cfg), DimensionMismatch);
}

TEST_CASE("sweeps equal sequential element updates") {
  for (std::uint64_t seed = 50; seed < 55; ++seed) {
    SmallInstance in = small_instance(seed, 7, 6);
    BeamformerSet seq = in.bf;
    for (int n = 0; n < in.ch.n1(); ++n) seq.phi1(n) = update_phi1_element(n, in.ch, seq, in.st, in.cfg);
    BeamformerSet swept = in.bf;
    sweep_phi1(in.ch, swept, in.st, in.cfg);
    CHECK((seq.phi1 - swept.phi1).norm() < 1e-12);

    for (int n = 0; n < in.ch.n2(); ++n) seq.phi2(n) = update_phi2_element(n, in.ch, seq, in.st, in.cfg);
    sweep_phi2(in.ch, swept, in.st, in.cfg);
    CHECK((seq.phi2 - swept.phi2).norm() < 1e-12);

    const double before = al_objective(in.ch, in.bf, in.st, in.cfg);
    CHECK(al_objective(in.ch, swept, in.st, in.cfg) <= before + 1e-12 * std::max(1.0, std::abs(before)));
  }
}

TEST_CASE("initialize_feasible") {
  PddOptions opts;

  SUBCASE("zero initial violation") {
  int tested = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const ScenarioConfig cfg = default_at(16.0, seed);
    const ChannelSet ch = generate_channels(cfg);
    InitialPoint init;
    try {
      init = initialize_feasible(ch, cfg, opts);
    } catch (const InfeasibleScenario&) {
      continue;
    }
    ++tested;
    CHECK(constraint_violation(ch, init.bf, init.state, cfg) == 0.0);
    SolveReport r;
    fill_report(ch, init.bf, cfg, r);
    CHECK(r.feasible);
    for (int k = 0; k < cfg.k_directions(); ++k) {
      CHECK(init.state.lambda1[k] == cd{0.0, 0.0});
      CHECK(init.state.x_anchor[k] == init.state.x[k]);
    }
  }
  CHECK(tested >= 3);
  }

  SUBCASE("large budget attains the interference-free SINR") {
    const ScenarioConfig cfg = default_at(1e4, 2);
    const ChannelSet ch = generate_channels(cfg);
    const InitialPoint init = initialize_feasible(ch, cfg, opts);
    const SolveReport cc = comm_centric_solve(ch, cfg);
    REQUIRE(cc.feasible);
    const auto [phi1, phi2] = large_power_phases(ch);
    const double free_sinr = cfg.p_comm * std::norm(comm_signal(ch, phi1, phi2)) / cfg.noise_power;
    CHECK(cc.comm_sinr == doctest::Approx(free_sinr).epsilon(1e-9));
    CHECK(comm_sinr(ch, init.bf, cfg) >= cc.comm_sinr * (1.0 - 1e-9));
  }

  SUBCASE("tiny budget") {
    const ScenarioConfig cfg = default_at(1e-3, 2);
    CHECK_THROWS_AS(initialize_feasible(generate_channels(cfg), cfg, opts), InfeasibleScenario);
  }
}

TEST_CASE("cccp inner loop") {
  PddOptions opts;

  SUBCASE("objective is non-increasing on the default scenario") {
    int audited = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const ScenarioConfig cfg = default_at(16.0, seed);
      const ChannelSet ch = generate_channels(cfg);
      InitialPoint init;
      try {
        init = initialize_feasible(ch, cfg, opts);
      } catch (const InfeasibleScenario&) {
        continue;
      }
      ++audited;
      double prev = al_objective(ch, init.bf, init.state, cfg);
      const InnerResult res = cccp_inner_loop(ch, init.bf, init.state, opts, cfg);
      REQUIRE(!res.objective_trace.empty());
      for (double v : res.objective_trace) {
        CHECK(v <= prev + 1e-9);
        prev = v;
      }
      for (Eigen::Index n = 0; n < init.bf.phi1.size(); ++n) CHECK(std::abs(std::abs(init.bf.phi1(n)) - 1.0) < 1e-12);
    }
    CHECK(audited >= 10);
  }

  SUBCASE("a converged state exits after one iteration") {
    const ScenarioConfig cfg = default_at(16.0, 1);
    const ChannelSet ch = generate_channels(cfg);
    InitialPoint init = initialize_feasible(ch, cfg, opts);
    PddOptions loose = opts;
    loose.inner_max_iters = 1000;
    loose.inner_tol = 1e-12;
    cccp_inner_loop(ch, init.bf, init.state, loose, cfg);
    const InnerResult again = cccp_inner_loop(ch, init.bf, init.state, opts, cfg);
    CHECK(again.iterations == 1);
  }

  SUBCASE("no surfaces") {
    ScenarioConfig cfg = default_at(16.0, 3);
    cfg.n1 = 0;
    cfg.n2 = 0;
    const ChannelSet ch = generate_channels(cfg);
    InitialPoint init = initialize_feasible(ch, cfg, opts);
    double prev = al_objective(ch, init.bf, init.state, cfg);
    const InnerResult res = cccp_inner_loop(ch, init.bf, init.state, opts, cfg);
    CHECK(res.iterations < opts.inner_max_iters);
    for (double v : res.objective_trace) {
      CHECK(v <= prev + 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("pdd_solve") {
  PddOptions opts;

  SUBCASE("zero budget is reported infeasible") {
    const ScenarioConfig cfg = default_at(0.0, 1);
    const SolveReport r = pdd_solve(generate_channels(cfg), cfg, opts);
    CHECK_FALSE(r.feasible);
    CHECK_FALSE(r.diagnostic.empty());
    CHECK_FALSE(r.solver_failure);
  }

  SUBCASE("final design meets every constraint") {
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const ScenarioConfig cfg = default_at(16.0, seed);
      const ChannelSet ch = generate_channels(cfg);
      const SolveReport r = pdd_solve(ch, cfg, opts);
      if (!r.diagnostic.empty()) continue;
      ++solved;
      CHECK(r.feasible);
      for (Eigen::Index n = 0; n < r.solution.phi1.size(); ++n) CHECK(std::abs(std::abs(r.solution.phi1(n)) - 1.0) < 1e-12);
      for (Eigen::Index n = 0; n < r.solution.phi2.size(); ++n) CHECK(std::abs(std::abs(r.solution.phi2(n)) - 1.0) < 1e-12);
      CHECK(r.total_radar_power <= cfg.p_max * (1.0 + 1e-9));
      for (double s : r.radar_sinr) CHECK(s >= cfg.gamma_r * (1.0 - 1e-6));
      CHECK(r.iterations >= 1);
      CHECK(r.violation_trace.size() == static_cast<std::size_t>(r.iterations));
      CHECK(r.comm_sinr_trace.size() == r.violation_trace.size());
      CHECK(r.comm_sinr >= low_complexity_solve(ch, cfg).comm_sinr * (1.0 - 1e-3));
    }
    CHECK(solved >= 2);
  }

  SUBCASE("deterministic reruns") {
    const ScenarioConfig cfg = default_at(16.0, 2);
    const ChannelSet ch = generate_channels(cfg);
    const SolveReport a = pdd_solve(ch, cfg, opts);
    const SolveReport b = pdd_solve(ch, cfg, opts);
    CHECK(a.comm_sinr == b.comm_sinr);
    CHECK(a.radar_sinr == b.radar_sinr);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(a.violation_trace == b.violation_trace);
    CHECK(a.iterations == b.iterations);
    CHECK(a.solution.phi1 == b.solution.phi1);
    CHECK(a.solution.phi2 == b.solution.phi2);
    for (int k = 0; k < cfg.k_directions(); ++k) {
      CHECK(a.solution.u[k] == b.solution.u[k]);
      CHECK(a.solution.w[k] == b.solution.w[k]);
    }
  }

  SUBCASE("options validation") {
    PddOptions bad = opts;
    bad.c_shrink = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = opts;
    bad.inner_max_iters = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = opts;
    bad.rho0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}
