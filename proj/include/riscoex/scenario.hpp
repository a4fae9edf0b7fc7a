#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "riscoex/types.hpp"

namespace riscoex {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

/// Physical and system parameters of one coexistence scenario.
///
/// Defaults reproduce the reference layout: transmitter (0,0), receiver
/// (90,0), RIS 1 (0,3), RIS 2 (90,3), radar (45,20); M = 12 antennas,
/// N1 = N2 = 100 elements, 8 detection directions from -pi/3 to pi/4.
/// Rician factors of -inf dB select Rayleigh fading.
struct ScenarioConfig {
  int m_antennas = 12;
  std::vector<double> thetas = default_thetas();
  int pri_length = 10;
  int n1 = 100;
  int n2 = 100;
  double antenna_spacing_ratio = 0.5;
  double p_comm = 0.1;
  double noise_power = 1e-13;
  double p_max = 10.0;
  double gamma_r = 10.0;
  std::vector<cd> alpha_gain = default_alpha(8, 1e-13, -12.0);
  double rician_comm_db = 9.0;
  double rician_intf_db = 3.0;
  Point2 transmitter{0.0, 0.0};
  Point2 receiver{90.0, 0.0};
  Point2 ris1{0.0, 3.0};
  Point2 ris2{90.0, 3.0};
  Point2 radar{45.0, 20.0};
  std::uint64_t seed = 1;

  int k_directions() const { return static_cast<int>(thetas.size()); }

  /// Throws std::invalid_argument on the first broken invariant.
  void validate() const;

  /// -4pi/12, -3pi/12, ..., 3pi/12.
  static std::vector<double> default_thetas();
  /// K zero-phase echo gains with |alpha|^2 = noise * 10^(ratio_db/10).
  static std::vector<cd> default_alpha(int k, double noise_power, double ratio_db);
};

/// The ten raw links plus the effective channels derived from them.
///
/// Raw vectors that enter the model conjugate-transposed (h_1r, h_2r, h_sr)
/// store the conjugate of the physical row channel.
struct ChannelSet {
  cd h_tr{0.0, 0.0};
  CVec h_t1;
  CVec h_t2;
  CVec h_ts;
  CVec h_1r;
  CVec h_2r;
  CVec h_sr;
  CMat big_h_1s;  // M x N1
  CMat big_h_12;  // N2 x N1
  CMat big_h_s2;  // N2 x M

  CMat eff_h_ts;  // H_1s Diag(h_t1)
  CVec eff_g_tr;  // Diag(h_t1^*) h_1r
  CVec eff_f_tr;  // Diag(h_t2^*) h_2r
  CMat eff_h_tr;  // (Diag(h_2r^*) H_12 Diag(h_t1))^T, N1 x N2
  CMat eff_h_sr;  // Diag(h_2r^*) H_s2

  int m() const { return static_cast<int>(h_ts.size()); }
  int n1() const { return static_cast<int>(h_t1.size()); }
  int n2() const { return static_cast<int>(h_t2.size()); }

  /// Recomputes every eff_* field from the raw links.
  void refresh_derived();

  /// Copy with both surfaces removed (N1 = N2 = 0).
  ChannelSet without_ris() const;
};

struct SteeringVector {
  CVec entries;
  double angle = 0.0;
};

/// Uniform linear array response: entry m is exp(j 2 pi (spacing) m sin(theta)).
SteeringVector steering_vector(double theta, int m, double spacing_ratio);

/// Convenience returning only the entries.
CVec steer(double theta, int m, double spacing_ratio);

/// Large-scale loss 32.6 + 36.7 log10(d) in dB.
double path_loss_db(double d);

/// Amplitude factor 10^(-L(d)/20).
double path_gain_amplitude(double d);

/// Angle from an endpoint's array toward another endpoint. All arrays lie
/// along the x-axis, so sin(theta) is the normalized x-offset.
double los_angle(const Point2& from, const Point2& to);

/// One Rician draw of an m_rx x m_tx channel with unit mean-square entries.
CMat rician_channel(int m_rx, int m_tx, double eps_db, double theta_rx,
                    double theta_tx, double spacing_ratio, std::mt19937_64& rng);

ChannelSet generate_channels(const ScenarioConfig& config, std::mt19937_64& rng);

/// Convenience overload seeding a fresh generator from config.seed.
ChannelSet generate_channels(const ScenarioConfig& config);

struct EffectiveDirect {
  CVec h_hat_ts;  // h_ts + H_ts phi1
  CVec h_hat_sr;  // h_sr + H_sr^H conj(phi2)
};

EffectiveDirect effective_direct_channels(const ChannelSet& ch, const CVec& phi1,
                                          const CVec& phi2);

}  // namespace riscoex
