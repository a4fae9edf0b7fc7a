#include "riscoex/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace riscoex {

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<double> ScenarioConfig::default_thetas() {
  std::vector<double> out;
  for (int i = -4; i <= 3; ++i) out.push_back(i * kPi / 12.0);
  return out;
}

std::vector<cd> ScenarioConfig::default_alpha(int k, double noise_power, double ratio_db) {
  const double mag = std::sqrt(noise_power * from_db(ratio_db));
  return std::vector<cd>(static_cast<std::size_t>(k), cd{mag, 0.0});
}

namespace {

bool finite_point(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid scenario config: " + what);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(m_antennas >= 1, "m_antennas must be >= 1");
  require(!thetas.empty(), "thetas must be non-empty");
  require(thetas.size() == alpha_gain.size(), "|thetas| must equal |alpha_gain|");
  for (double t : thetas) require(std::abs(t) < kPi / 2.0, "every theta must lie in (-pi/2, pi/2)");
  require(pri_length >= 1, "pri_length must be >= 1");
  require(n1 >= 0 && n2 >= 0, "RIS element counts must be non-negative");
  require(antenna_spacing_ratio > 0.0, "antenna_spacing_ratio must be positive");
  require(p_comm > 0.0, "p_comm must be positive");
  require(noise_power > 0.0, "noise_power must be positive");
  require(p_max >= 0.0, "p_max must be non-negative");
  require(gamma_r > 0.0, "gamma_r must be positive");
  for (const Point2* p : {&transmitter, &receiver, &ris1, &ris2, &radar})
    require(finite_point(*p), "positions must be finite");
}

SteeringVector steering_vector(double theta, int m, double spacing_ratio) {
  return {steer(theta, m, spacing_ratio), theta};
}

CVec steer(double theta, int m, double spacing_ratio) {
  CVec a(m);
  const double step = 2.0 * kPi * spacing_ratio * std::sin(theta);
  for (int i = 0; i < m; ++i) a(i) = unit_phasor(step * i);
  return a;
}

double path_loss_db(double d) {
  if (!(d > 0.0)) {
    std::ostringstream msg;
    msg << "path loss needs a positive distance, got " << d;
    throw InvalidGeometry(msg.str());
  }
  return 32.6 + 36.7 * std::log10(d);
}

double path_gain_amplitude(double d) { return std::pow(10.0, -path_loss_db(d) / 20.0); }

double los_angle(const Point2& from, const Point2& to) {
  const double d = distance(from, to);
  if (!(d > 0.0)) throw InvalidGeometry("coincident endpoints have no line-of-sight angle");
  return std::asin(std::clamp((to.x - from.x) / d, -1.0, 1.0));
}

CMat rician_channel(int m_rx, int m_tx, double eps_db, double theta_rx, double theta_tx,
                    double spacing_ratio, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CMat nlos(m_rx, m_tx);
  // Column-major fill keeps the draw order independent of Eigen internals.
  for (int c = 0; c < m_tx; ++c)
    for (int r = 0; r < m_rx; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      nlos(r, c) = cd{re, im};
    }

  const double eps = from_db(eps_db);
  double los_w = 0.0;
  double nlos_w = 1.0;
  if (std::isinf(eps)) {
    los_w = 1.0;
    nlos_w = 0.0;
  } else {
    los_w = std::sqrt(eps / (1.0 + eps));
    nlos_w = std::sqrt(1.0 / (1.0 + eps));
  }
  if (los_w == 0.0) return nlos;

  const CVec a_rx = m_rx == 1 ? CVec::Ones(1) : steer(theta_rx, m_rx, spacing_ratio);
  const CVec a_tx = m_tx == 1 ? CVec::Ones(1) : steer(theta_tx, m_tx, spacing_ratio);
  return los_w * (a_rx * a_tx.transpose()) + nlos_w * nlos;
}

namespace {

// Physical channel from endpoint `from` (n_from antennas) to endpoint `to`.
CMat link(const Point2& from, int n_from, const Point2& to, int n_to, double eps_db,
          double spacing, std::mt19937_64& rng) {
  const double d = distance(from, to);
  if (!(d > 0.0)) throw InvalidGeometry("coincident endpoint positions");
  const double theta_rx = los_angle(to, from);
  const double theta_tx = los_angle(from, to);
  return path_gain_amplitude(d) * rician_channel(n_to, n_from, eps_db, theta_rx, theta_tx, spacing, rng);
}

}  // namespace

ChannelSet generate_channels(const ScenarioConfig& config, std::mt19937_64& rng) {
  config.validate();
  const int m = config.m_antennas;
  const int n1 = config.n1;
  const int n2 = config.n2;
  const double eps_c = config.rician_comm_db;
  const double eps_i = config.rician_intf_db;
  const double s = config.antenna_spacing_ratio;

  ChannelSet ch;
  ch.h_tr = link(config.transmitter, 1, config.receiver, 1, eps_c, s, rng)(0, 0);
  ch.h_t1 = CVec(0);
  ch.h_t2 = CVec(0);
  ch.h_1r = CVec(0);
  ch.h_2r = CVec(0);
  ch.big_h_1s = CMat(m, 0);
  ch.big_h_12 = CMat(n2, n1);
  ch.big_h_s2 = CMat(n2, m);

  if (n1 > 0) ch.h_t1 = link(config.transmitter, 1, config.ris1, n1, eps_c, s, rng).col(0);
  if (n2 > 0) ch.h_t2 = link(config.transmitter, 1, config.ris2, n2, eps_c, s, rng).col(0);
  ch.h_ts = link(config.transmitter, 1, config.radar, m, eps_i, s, rng).col(0);
  if (n1 > 0) ch.h_1r = link(config.ris1, n1, config.receiver, 1, eps_c, s, rng).row(0).adjoint();
  if (n2 > 0) ch.h_2r = link(config.ris2, n2, config.receiver, 1, eps_c, s, rng).row(0).adjoint();
  ch.h_sr = link(config.radar, m, config.receiver, 1, eps_i, s, rng).row(0).adjoint();
  if (n1 > 0) ch.big_h_1s = link(config.ris1, n1, config.radar, m, eps_i, s, rng);
  if (n1 > 0 && n2 > 0) ch.big_h_12 = link(config.ris1, n1, config.ris2, n2, eps_c, s, rng);
  if (n2 > 0) ch.big_h_s2 = link(config.radar, m, config.ris2, n2, eps_i, s, rng);

  ch.refresh_derived();
  return ch;
}

ChannelSet generate_channels(const ScenarioConfig& config) {
  std::mt19937_64 rng(config.seed);
  return generate_channels(config, rng);
}

void ChannelSet::refresh_derived() {
  eff_h_ts = big_h_1s * h_t1.asDiagonal();
  eff_g_tr = h_t1.conjugate().cwiseProduct(h_1r);
  eff_f_tr = h_t2.conjugate().cwiseProduct(h_2r);
  eff_h_tr = (h_2r.conjugate().asDiagonal() * big_h_12 * h_t1.asDiagonal()).transpose();
  eff_h_sr = h_2r.conjugate().asDiagonal() * big_h_s2;
}

ChannelSet ChannelSet::without_ris() const {
  ChannelSet out;
  out.h_tr = h_tr;
  out.h_ts = h_ts;
  out.h_sr = h_sr;
  const int m = this->m();
  out.h_t1 = CVec(0);
  out.h_t2 = CVec(0);
  out.h_1r = CVec(0);
  out.h_2r = CVec(0);
  out.big_h_1s = CMat(m, 0);
  out.big_h_12 = CMat(0, 0);
  out.big_h_s2 = CMat(0, m);
  out.refresh_derived();
  return out;
}

EffectiveDirect effective_direct_channels(const ChannelSet& ch, const CVec& phi1, const CVec& phi2) {
  if (phi1.size() != ch.n1() || phi2.size() != ch.n2())
    throw DimensionMismatch("phase vector lengths do not match the surface sizes");
  return {ch.h_ts + ch.eff_h_ts * phi1, ch.h_sr + ch.eff_h_sr.adjoint() * phi2.conjugate()};
}

}  // namespace riscoex
