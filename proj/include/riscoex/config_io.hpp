#pragma once

#include <string>

#include "riscoex/pdd.hpp"
#include "riscoex/scenario.hpp"

namespace riscoex {

/// Scenario plus solver options, as read from a JSON config file and
/// `key=value` overrides.
///
/// Keys mirror the ScenarioConfig and PddOptions field names; solver keys
/// live under "pdd" (or use the "pdd." prefix in overrides). Positions are
/// [x, y] arrays, alpha_gain entries are magnitudes or [re, im] pairs, and
/// Rician factors accept "-inf" (Rayleigh) and "inf" (pure LOS). When
/// alpha_gain is absent it is rebuilt for the current direction count from
/// noise_power and echo_to_noise_db.
struct RunConfig {
  ScenarioConfig scenario;
  PddOptions pdd;
  double echo_to_noise_db = -12.0;
  bool alpha_explicit = false;

  /// Rebuilds derived fields and validates everything.
  void finalize();
};

/// Applies every key of a JSON object text. Throws std::invalid_argument on
/// unknown keys or ill-typed values.
void apply_config_text(RunConfig& rc, const std::string& json_text);

/// Reads a JSON config file. Throws std::runtime_error when unreadable.
void apply_config_file(RunConfig& rc, const std::string& path);

/// Applies one `key=value` override. The value is parsed as JSON when
/// possible and as a plain string otherwise.
void apply_override(RunConfig& rc, const std::string& assignment);

/// The full effective configuration as JSON text.
std::string dump_config(const RunConfig& rc);

}  // namespace riscoex
