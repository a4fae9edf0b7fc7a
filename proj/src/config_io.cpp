#include "riscoex/config_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace riscoex {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config key '" + key + "': " + what);
}

double as_real(const std::string& key, const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
      std::size_t used = 0;
      const double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  bad(key, "expected a number");
}

int as_int(const std::string& key, const json& v) {
  const double d = as_real(key, v);
  if (d != static_cast<double>(static_cast<int>(d))) bad(key, "expected an integer");
  return static_cast<int>(d);
}

Point2 as_point(const std::string& key, const json& v) {
  if (!v.is_array() || v.size() != 2) bad(key, "expected [x, y]");
  return {as_real(key, v[0]), as_real(key, v[1])};
}

cd as_complex(const std::string& key, const json& v) {
  if (v.is_array()) {
    if (v.size() != 2) bad(key, "complex entries are [re, im]");
    return {as_real(key, v[0]), as_real(key, v[1])};
  }
  return {as_real(key, v), 0.0};
}

void apply_pdd_key(PddOptions& o, const std::string& key, const json& v) {
  const std::string full = "pdd." + key;
  if (key == "rho0") o.rho0 = as_real(full, v);
  else if (key == "eta0") o.eta0 = as_real(full, v);
  else if (key == "c_shrink") o.c_shrink = as_real(full, v);
  else if (key == "inner_tol") o.inner_tol = as_real(full, v);
  else if (key == "inner_max_iters") o.inner_max_iters = as_int(full, v);
  else if (key == "outer_max_iters") o.outer_max_iters = as_int(full, v);
  else if (key == "outer_violation_tol") o.outer_violation_tol = as_real(full, v);
  else if (key == "bisection_tol") o.bisection_tol = as_real(full, v);
  else if (key == "bisection_max_iters") o.bisection_max_iters = as_int(full, v);
  else if (key == "bracket_doublings") o.bracket_doublings = as_int(full, v);
  else bad(full, "unknown key");
}

void apply_key(RunConfig& rc, const std::string& key, const json& v) {
  ScenarioConfig& s = rc.scenario;
  if (key.rfind("pdd.", 0) == 0) {
    apply_pdd_key(rc.pdd, key.substr(4), v);
  } else if (key == "pdd") {
    if (!v.is_object()) bad(key, "expected an object");
    for (auto it = v.begin(); it != v.end(); ++it) apply_pdd_key(rc.pdd, it.key(), it.value());
  } else if (key == "m_antennas") s.m_antennas = as_int(key, v);
  else if (key == "thetas") {
    if (!v.is_array()) bad(key, "expected an array of radians");
    s.thetas.clear();
    for (const auto& t : v) s.thetas.push_back(as_real(key, t));
  } else if (key == "thetas_deg") {
    if (!v.is_array()) bad(key, "expected an array of degrees");
    s.thetas.clear();
    for (const auto& t : v) s.thetas.push_back(as_real(key, t) * kPi / 180.0);
  } else if (key == "pri_length") s.pri_length = as_int(key, v);
  else if (key == "n1") s.n1 = as_int(key, v);
  else if (key == "n2") s.n2 = as_int(key, v);
  else if (key == "antenna_spacing_ratio") s.antenna_spacing_ratio = as_real(key, v);
  else if (key == "p_comm") s.p_comm = as_real(key, v);
  else if (key == "noise_power") s.noise_power = as_real(key, v);
  else if (key == "p_max") s.p_max = as_real(key, v);
  else if (key == "gamma_r") s.gamma_r = as_real(key, v);
  else if (key == "gamma_r_db") s.gamma_r = from_db(as_real(key, v));
  else if (key == "alpha_gain") {
    if (!v.is_array()) bad(key, "expected an array");
    s.alpha_gain.clear();
    for (const auto& a : v) s.alpha_gain.push_back(as_complex(key, a));
    rc.alpha_explicit = true;
  } else if (key == "echo_to_noise_db") {
    rc.echo_to_noise_db = as_real(key, v);
    rc.alpha_explicit = false;
  } else if (key == "rician_comm_db") s.rician_comm_db = as_real(key, v);
  else if (key == "rician_intf_db") s.rician_intf_db = as_real(key, v);
  else if (key == "rician_db") s.rician_comm_db = s.rician_intf_db = as_real(key, v);
  else if (key == "transmitter") s.transmitter = as_point(key, v);
  else if (key == "receiver") s.receiver = as_point(key, v);
  else if (key == "ris1") s.ris1 = as_point(key, v);
  else if (key == "ris2") s.ris2 = as_point(key, v);
  else if (key == "radar") s.radar = as_point(key, v);
  else if (key == "radar_y") s.radar.y = as_real(key, v);
  else if (key == "seed") {
    const double d = as_real(key, v);
    if (d < 0.0 || d != static_cast<double>(static_cast<std::uint64_t>(d))) bad(key, "expected a non-negative integer");
    s.seed = static_cast<std::uint64_t>(d);
  } else bad(key, "unknown key");
}

json real_json(double d) {
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  return d;
}

}  // namespace

void RunConfig::finalize() {
  if (!alpha_explicit)
    scenario.alpha_gain = ScenarioConfig::default_alpha(scenario.k_directions(), scenario.noise_power,
                                                        echo_to_noise_db);
  scenario.validate();
  pdd.validate();
}

void apply_config_text(RunConfig& rc, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) apply_key(rc, it.key(), it.value());
}

void apply_config_file(RunConfig& rc, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(rc, buf.str());
}

void apply_override(RunConfig& rc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) v = text;
  apply_key(rc, key, v);
}

std::string dump_config(const RunConfig& rc) {
  const ScenarioConfig& s = rc.scenario;
  auto point = [](const Point2& p) { return json::array({p.x, p.y}); };
  json alpha = json::array();
  for (const cd& a : s.alpha_gain) alpha.push_back(json::array({a.real(), a.imag()}));
  json doc = {
      {"m_antennas", s.m_antennas},
      {"thetas", s.thetas},
      {"pri_length", s.pri_length},
      {"n1", s.n1},
      {"n2", s.n2},
      {"antenna_spacing_ratio", s.antenna_spacing_ratio},
      {"p_comm", s.p_comm},
      {"noise_power", s.noise_power},
      {"p_max", s.p_max},
      {"gamma_r", s.gamma_r},
      {"alpha_gain", alpha},
      {"rician_comm_db", real_json(s.rician_comm_db)},
      {"rician_intf_db", real_json(s.rician_intf_db)},
      {"transmitter", point(s.transmitter)},
      {"receiver", point(s.receiver)},
      {"ris1", point(s.ris1)},
      {"ris2", point(s.ris2)},
      {"radar", point(s.radar)},
      {"seed", s.seed},
      {"pdd",
       {{"rho0", rc.pdd.rho0},
        {"eta0", rc.pdd.eta0},
        {"c_shrink", rc.pdd.c_shrink},
        {"inner_tol", rc.pdd.inner_tol},
        {"inner_max_iters", rc.pdd.inner_max_iters},
        {"outer_max_iters", rc.pdd.outer_max_iters},
        {"outer_violation_tol", rc.pdd.outer_violation_tol},
        {"bisection_tol", rc.pdd.bisection_tol},
        {"bisection_max_iters", rc.pdd.bisection_max_iters},
        {"bracket_doublings", rc.pdd.bracket_doublings}}},
  };
  return doc.dump(2);
}

}  // namespace riscoex
