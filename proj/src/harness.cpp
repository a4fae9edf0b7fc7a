#include "riscoex/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace riscoex {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::pair<Algorithm, std::string>>& algorithm_table() {
  static const std::vector<std::pair<Algorithm, std::string>> table = {
      {Algorithm::pdd, "pdd"},
      {Algorithm::low_complexity, "low_complexity"},
      {Algorithm::comm_centric, "comm_centric"},
      {Algorithm::intf_cancel, "intf_cancel"},
      {Algorithm::random_phase, "random_phase"},
      {Algorithm::no_ris, "no_ris"},
  };
  return table;
}

ClosedFormOptions closed_form_options(const PddOptions& o) {
  ClosedFormOptions cf;
  cf.bisection_tol = o.bisection_tol;
  cf.bisection_max_iters = o.bisection_max_iters;
  cf.bracket_doublings = o.bracket_doublings;
  return cf;
}

int algorithm_index(const std::string& name) {
  const auto& t = algorithm_table();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i].second == name) return static_cast<int>(i);
  return static_cast<int>(t.size());
}

double rad_to_deg(double r) { return r * 180.0 / kPi; }

// Index of the detection direction closest to `deg`; throws when none is within 1e-6 deg.
int direction_index(const ScenarioConfig& cfg, double deg) {
  int best = -1;
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.k_directions(); ++k) {
    const double g = std::abs(rad_to_deg(cfg.thetas[k]) - deg);
    if (g < gap) {
      gap = g;
      best = k;
    }
  }
  if (best < 0 || gap > 1e-6)
    throw std::invalid_argument("beampattern direction " + format_real(deg) + " deg is not a detection direction");
  return best;
}

struct Variant {
  std::string name;
  RunConfig rc;
};

// Scenario variants for one grid point.
std::vector<Variant> variants_for(const std::string& id, double v, const RunConfig& base) {
  RunConfig rc = base;
  ScenarioConfig& s = rc.scenario;
  if (id == "convergence" || id == "pmax_sweep" || id == "feasibility_sweep") {
    s.p_max = v;
  } else if (id == "gamma_sweep") {
    s.gamma_r = from_db(v);
  } else if (id == "distance_sweep_rayleigh") {
    s.radar.y = v;
    s.rician_comm_db = s.rician_intf_db = -std::numeric_limits<double>::infinity();
  } else if (id == "distance_sweep_rician") {
    s.radar.y = v;
  } else if (id == "timing_table") {
    s.n1 = s.n2 = static_cast<int>(v);
  } else if (id == "elements_sweep") {
    const int n = static_cast<int>(v);
    std::vector<Variant> out;
    for (const auto& [name, n1, n2] : {std::tuple<std::string, int, int>{"double", n, n},
                                      {"ris2_only", 0, n},
                                      {"ris1_only", n, 0}}) {
      RunConfig r = rc;
      r.scenario.n1 = n1;
      r.scenario.n2 = n2;
      r.finalize();
      out.push_back({name, r});
    }
    return out;
  }
  rc.finalize();
  return {{"default", rc}};
}

std::mt19937_64 phase_rng(std::uint64_t seed, std::size_t grid_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(grid_index), 0x72616e64u};
  return std::mt19937_64(seq);
}

struct Keyed {
  std::size_t grid;
  int variant;
  int algo;
  int trial;
  ResultRow row;
};

struct ItemOutput {
  std::vector<Keyed> rows;
  std::vector<TraceRow> traces;
  std::vector<PatternRow> patterns;
  std::vector<std::string> failures;
};

void note_failure(ItemOutput& out, const ResultRow& row, const SolveReport& rep) {
  if (!rep.solver_failure) return;
  out.failures.push_back(row.experiment + " at " + format_real(row.sweep_value) + " (" + row.variant + ", " +
                         row.algorithm + ", seed " + std::to_string(row.seed) + "): " + rep.diagnostic);
}

void run_standard_item(const ExperimentSpec& spec, const RunConfig& base, std::size_t g, int t,
                       ItemOutput& out) {
  const double v = spec.grid[g];
  const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(t);
  const auto variants = variants_for(spec.id, v, base);
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    RunConfig rc = variants[vi].rc;
    rc.scenario.seed = seed;
    const ChannelSet ch = generate_channels(rc.scenario);
    for (Algorithm algo : spec.algorithms) {
      std::mt19937_64 rng = phase_rng(seed, g);
      const SolveReport rep = run_algorithm(algo, ch, rc, rng);
      ResultRow row = make_row(spec.id, v, variants[vi].name, algo, seed, rep, spec.record_wall_time);
      note_failure(out, row, rep);
      out.rows.push_back({g, static_cast<int>(vi), algorithm_index(row.algorithm), t, row});

      if (spec.id == "convergence" && algo == Algorithm::pdd) {
        for (std::size_t i = 0; i < rep.violation_trace.size(); ++i)
          out.traces.push_back({seed, static_cast<int>(i + 1), rep.objective_trace[i], rep.violation_trace[i],
                                to_db(rep.comm_sinr_trace[i])});
      }
      if (spec.id == "beampattern" && !rep.solution.u.empty()) {
        const int k = direction_index(rc.scenario, v);
        const auto grid = angle_grid(721);
        const auto gain = beampattern(rep.solution.u[k], grid, rc.scenario.antenna_spacing_ratio);
        for (std::size_t i = 0; i < grid.size(); ++i)
          out.patterns.push_back({row.algorithm, seed, v, rad_to_deg(grid[i]), gain[i]});
      }
    }
    if (spec.id == "beampattern") {
      const int k = direction_index(rc.scenario, v);
      const CVec mf = steer(rc.scenario.thetas[k], rc.scenario.m_antennas, rc.scenario.antenna_spacing_ratio)
                          .conjugate();
      const auto grid = angle_grid(721);
      const auto gain = beampattern(mf, grid, rc.scenario.antenna_spacing_ratio);
      for (std::size_t i = 0; i < grid.size(); ++i)
        out.patterns.push_back({"matched_filter", seed, v, rad_to_deg(grid[i]), gain[i]});
    }
  }
}

// One channel draw per trial; every bit count re-quantizes the same continuous solution.
void run_quantization_item(const ExperimentSpec& spec, const RunConfig& base, int t, ItemOutput& out) {
  const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(t);
  RunConfig rc = base;
  rc.finalize();
  rc.scenario.seed = seed;
  const ChannelSet ch = generate_channels(rc.scenario);
  const ClosedFormOptions cf = closed_form_options(rc.pdd);
  for (Algorithm algo : spec.algorithms) {
    std::mt19937_64 rng = phase_rng(seed, 0);
    const SolveReport cont = run_algorithm(algo, ch, rc, rng);
    const int ai = algorithm_index(algorithm_name(algo));
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
      const double b = spec.grid[g];
      ResultRow crow = make_row(spec.id, b, "continuous", algo, seed, cont, spec.record_wall_time);
      if (g == 0) note_failure(out, crow, cont);
      out.rows.push_back({g, 0, ai, t, crow});

      SolveReport q;
      if (cont.solution.phi1.size() == ch.n1() && cont.solution.phi2.size() == ch.n2() &&
          !cont.solution.u.empty()) {
        const int bits = static_cast<int>(b);
        q = radar_design_report(ch, quantize_phases(cont.solution.phi1, bits),
                                quantize_phases(cont.solution.phi2, bits), rc.scenario, cf);
      } else {
        q.diagnostic = "continuous solution unavailable";
      }
      out.rows.push_back({g, 1, ai, t, make_row(spec.id, b, "quantized", algo, seed, q, spec.record_wall_time)});
    }
  }
}

void check_name(const std::string& s) {
  if (s.find_first_of(",\"\n\r") != std::string::npos)
    throw std::invalid_argument("CSV text field contains a separator: '" + s + "'");
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.imbue(std::locale::classic());
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

template <typename Int>
Int parse_integer(const std::string& s) {
  Int v{};
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

double mean_or_nan(double sum, int n) { return n > 0 ? sum / n : kNaN; }

}  // namespace

std::string algorithm_name(Algorithm a) {
  for (const auto& [algo, name] : algorithm_table())
    if (algo == a) return name;
  throw std::invalid_argument("unknown algorithm enumerator");
}

Algorithm parse_algorithm(const std::string& name) {
  for (const auto& [algo, n] : algorithm_table())
    if (n == name) return algo;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = [] {
    std::vector<Algorithm> v;
    for (const auto& [algo, name] : algorithm_table()) v.push_back(algo);
    return v;
  }();
  return all;
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "convergence",           "beampattern",          "pmax_sweep",         "feasibility_sweep",
      "elements_sweep",        "gamma_sweep",          "distance_sweep_rayleigh", "distance_sweep_rician",
      "quantization_sweep",    "timing_table"};
  return ids;
}

void ExperimentSpec::validate() const {
  const auto& ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end())
    throw std::invalid_argument("unknown experiment id '" + id + "'");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (grid.empty()) throw std::invalid_argument("sweep grid must be non-empty");
  if (algorithms.empty()) throw std::invalid_argument("at least one algorithm is required");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  for (double v : grid)
    if (!std::isfinite(v)) throw std::invalid_argument("sweep values must be finite");
  if (id == "quantization_sweep" || id == "elements_sweep" || id == "timing_table") {
    const int lo = id == "quantization_sweep" ? 1 : 0;
    for (double v : grid)
      if (v != std::floor(v) || v < lo)
        throw std::invalid_argument(id + " grid values must be integers >= " + std::to_string(lo));
  }
}

ExperimentSpec default_spec(const std::string& id) {
  using A = Algorithm;
  ExperimentSpec s;
  s.id = id;
  if (id == "convergence") {
    s.grid = {10.0};
    s.trials = 5;
    s.algorithms = {A::pdd};
  } else if (id == "beampattern") {
    s.grid = {0.0};
    s.trials = 1;
    s.algorithms = {A::pdd, A::low_complexity};
  } else if (id == "pmax_sweep") {
    s.grid = {6, 8, 10, 12, 14, 16};
    s.algorithms = {A::pdd, A::low_complexity, A::comm_centric, A::intf_cancel, A::random_phase, A::no_ris};
  } else if (id == "feasibility_sweep") {
    s.grid = {8, 9, 10, 11, 12, 13, 14};
    s.algorithms = {A::pdd, A::low_complexity, A::random_phase, A::no_ris};
  } else if (id == "elements_sweep") {
    s.grid = {20, 40, 60, 80, 100};
    s.algorithms = {A::pdd, A::low_complexity, A::no_ris};
  } else if (id == "gamma_sweep") {
    s.grid = {0, 2, 4, 6, 8, 10};
    s.algorithms = {A::pdd, A::low_complexity, A::random_phase, A::no_ris};
  } else if (id == "distance_sweep_rayleigh" || id == "distance_sweep_rician") {
    s.grid = {10, 15, 20, 25, 30, 35, 40, 45, 50};
    s.algorithms = {A::pdd, A::low_complexity, A::random_phase, A::no_ris};
  } else if (id == "quantization_sweep") {
    s.grid = {1, 2, 3, 4, 5};
    s.algorithms = {A::pdd, A::low_complexity};
  } else if (id == "timing_table") {
    s.grid = {40};
    s.trials = 20;
    s.algorithms = {A::pdd, A::low_complexity, A::comm_centric, A::intf_cancel, A::random_phase};
    s.record_wall_time = true;
  } else {
    throw std::invalid_argument("unknown experiment id '" + id + "'");
  }
  return s;
}

SolveReport run_algorithm(Algorithm algo, const ChannelSet& ch, const RunConfig& rc, std::mt19937_64& rng) {
  const ClosedFormOptions cf = closed_form_options(rc.pdd);
  switch (algo) {
    case Algorithm::pdd: return pdd_solve(ch, rc.scenario, rc.pdd);
    case Algorithm::low_complexity: return low_complexity_solve(ch, rc.scenario, cf);
    case Algorithm::comm_centric: return comm_centric_solve(ch, rc.scenario, cf);
    case Algorithm::intf_cancel: return intf_cancel_solve(ch, rc.scenario, cf);
    case Algorithm::random_phase: return baseline_random_phases(ch, rc.scenario, rng, cf);
    case Algorithm::no_ris: return baseline_no_ris(ch, rc.scenario, cf);
  }
  throw std::invalid_argument("unknown algorithm enumerator");
}

ResultRow make_row(const std::string& experiment, double sweep_value, const std::string& variant,
                   Algorithm algo, std::uint64_t seed, const SolveReport& report, bool record_wall_time) {
  ResultRow row;
  row.experiment = experiment;
  row.sweep_value = sweep_value;
  row.variant = variant;
  row.algorithm = algorithm_name(algo);
  row.seed = seed;
  row.comm_sinr_db = std::isnan(report.comm_sinr) ? kNaN : to_db(report.comm_sinr);
  row.min_radar_sinr_db = report.radar_sinr.empty()
                              ? kNaN
                              : to_db(*std::min_element(report.radar_sinr.begin(), report.radar_sinr.end()));
  row.feasible = report.feasible;
  row.total_power = report.total_radar_power;
  row.iterations = report.iterations;
  row.wall_time = record_wall_time ? report.wall_time : 0.0;
  return row;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunConfig& base) {
  spec.validate();
  {
    RunConfig probe = base;
    probe.finalize();
    if (spec.id == "beampattern")
      for (double v : spec.grid) direction_index(probe.scenario, v);
  }

  const bool quant = spec.id == "quantization_sweep";
  const std::size_t points = quant ? 1 : spec.grid.size();
  const std::size_t items = points * static_cast<std::size_t>(spec.trials);
  std::vector<ItemOutput> outputs(items);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items) return;
      try {
        const std::size_t g = i / static_cast<std::size_t>(spec.trials);
        const int t = static_cast<int>(i % static_cast<std::size_t>(spec.trials));
        if (quant)
          run_quantization_item(spec, base, t, outputs[i]);
        else
          run_standard_item(spec, base, g, t, outputs[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(items);
      }
    }
  };
  const int n_threads = std::min<int>(spec.threads, static_cast<int>(std::max<std::size_t>(items, 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<Keyed> keyed;
  ExperimentResult result;
  for (auto& o : outputs) {
    for (auto& k : o.rows) keyed.push_back(std::move(k));
    for (auto& tr : o.traces) result.traces.push_back(tr);
    for (auto& p : o.patterns) result.patterns.push_back(std::move(p));
    for (auto& f : o.failures) result.failures.push_back(std::move(f));
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.grid, a.variant, a.algo, a.trial) < std::tie(b.grid, b.variant, b.algo, b.trial);
  });
  for (auto& k : keyed) result.rows.push_back(std::move(k.row));
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  using Group = std::tuple<std::string, double, std::string>;
  std::vector<SummaryRow> out;
  std::map<std::tuple<std::string, double, std::string, std::string>, std::size_t> index;
  std::map<Group, std::map<std::uint64_t, int>> infeasible_count;  // seed -> algorithms infeasible
  std::map<Group, std::set<std::string>> group_algos;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.experiment, r.sweep_value, r.variant, r.algorithm);
    auto it = index.find(key);
    if (it == index.end()) {
      SummaryRow s;
      s.experiment = r.experiment;
      s.sweep_value = r.sweep_value;
      s.variant = r.variant;
      s.algorithm = r.algorithm;
      it = index.emplace(key, out.size()).first;
      out.push_back(s);
    }
    SummaryRow& s = out[it->second];
    s.trials += 1;
    if (r.feasible) {
      s.feasible += 1;
      s.mean_comm_sinr_db += r.comm_sinr_db;
    }
    const Group grp{r.experiment, r.sweep_value, r.variant};
    group_algos[grp].insert(r.algorithm);
    infeasible_count[grp][r.seed] += r.feasible ? 0 : 1;
  }
  for (auto& s : out) {
    s.feasibility = static_cast<double>(s.feasible) / s.trials;
    s.mean_comm_sinr_db = mean_or_nan(s.mean_comm_sinr_db, s.feasible);
  }
  // Common support: seeds where no algorithm of the group failed.
  std::map<std::tuple<std::string, double, std::string, std::string>, std::pair<double, int>> common;
  for (const auto& r : rows) {
    const Group grp{r.experiment, r.sweep_value, r.variant};
    if (infeasible_count[grp][r.seed] != 0) continue;
    auto& acc = common[std::make_tuple(r.experiment, r.sweep_value, r.variant, r.algorithm)];
    acc.first += r.comm_sinr_db;
    acc.second += 1;
  }
  for (auto& s : out) {
    const auto it = common.find(std::make_tuple(s.experiment, s.sweep_value, s.variant, s.algorithm));
    s.common_trials = it == common.end() ? 0 : it->second.second;
    s.common_mean_comm_sinr_db = it == common.end() ? kNaN : mean_or_nan(it->second.first, it->second.second);
  }
  return out;
}

std::map<std::tuple<double, std::string, std::string>, double> estimate_feasibility_probability(
    const std::vector<ResultRow>& rows) {
  std::map<std::tuple<double, std::string, std::string>, std::pair<int, int>> counts;
  for (const auto& r : rows) {
    if (r.experiment != rows.front().experiment)
      throw std::invalid_argument("feasibility estimate needs rows from a single experiment");
    auto& c = counts[std::make_tuple(r.sweep_value, r.variant, r.algorithm)];
    c.first += r.feasible ? 1 : 0;
    c.second += 1;
  }
  std::map<std::tuple<double, std::string, std::string>, double> out;
  for (const auto& [key, c] : counts) out[key] = static_cast<double>(c.first) / c.second;
  return out;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

const std::string& result_csv_header() {
  static const std::string header =
      "experiment,sweep_value,variant,algorithm,seed,comm_sinr_db,min_radar_sinr_db,feasible,total_power,"
      "iterations,wall_time";
  return header;
}

std::string format_row(const ResultRow& r) {
  check_name(r.experiment);
  check_name(r.variant);
  check_name(r.algorithm);
  std::string s;
  s += r.experiment + ',' + format_real(r.sweep_value) + ',' + r.variant + ',' + r.algorithm + ',' +
       std::to_string(r.seed) + ',' + format_real(r.comm_sinr_db) + ',' + format_real(r.min_radar_sinr_db) + ',' +
       (r.feasible ? "1" : "0") + ',' + format_real(r.total_power) + ',' + std::to_string(r.iterations) + ',' +
       format_real(r.wall_time);
  return s;
}

ResultRow parse_row(const std::string& line) {
  const auto f = split_commas(line);
  if (f.size() != 11) throw std::invalid_argument("expected 11 CSV fields, got " + std::to_string(f.size()));
  ResultRow r;
  r.experiment = f[0];
  r.sweep_value = parse_real(f[1]);
  r.variant = f[2];
  r.algorithm = f[3];
  r.seed = parse_integer<std::uint64_t>(f[4]);
  r.comm_sinr_db = parse_real(f[5]);
  r.min_radar_sinr_db = parse_real(f[6]);
  if (f[7] != "0" && f[7] != "1") throw std::invalid_argument("feasible flag must be 0 or 1");
  r.feasible = f[7] == "1";
  r.total_power = parse_real(f[8]);
  r.iterations = parse_integer<int>(f[9]);
  r.wall_time = parse_real(f[10]);
  return r;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("no rows to write to '" + path + "'");
  std::ofstream out = open_for_write(path);
  out << result_csv_header() << '\n';
  for (const auto& r : rows) out << format_row(r) << '\n';
  finish_write(out, path);
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != result_csv_header()) throw std::invalid_argument("'" + path + "' has an unexpected header");
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      rows.push_back(parse_row(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "experiment,sweep_value,variant,algorithm,trials,feasible,feasibility,mean_comm_sinr_db,"
         "common_trials,common_mean_comm_sinr_db\n";
  for (const auto& s : rows)
    out << s.experiment << ',' << format_real(s.sweep_value) << ',' << s.variant << ',' << s.algorithm << ','
        << s.trials << ',' << s.feasible << ',' << format_real(s.feasibility) << ','
        << format_real(s.mean_comm_sinr_db) << ',' << s.common_trials << ','
        << format_real(s.common_mean_comm_sinr_db) << '\n';
  finish_write(out, path);
}

void emit_trace_csv(const std::vector<TraceRow>& rows, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "seed,iteration,objective,violation,comm_sinr_db\n";
  for (const auto& t : rows)
    out << t.seed << ',' << t.iteration << ',' << format_real(t.objective) << ',' << format_real(t.violation)
        << ',' << format_real(t.comm_sinr_db) << '\n';
  finish_write(out, path);
}

void emit_pattern_csv(const std::vector<PatternRow>& rows, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "algorithm,seed,direction_deg,angle_deg,gain_db\n";
  for (const auto& p : rows)
    out << p.algorithm << ',' << p.seed << ',' << format_real(p.direction_deg) << ',' << format_real(p.angle_deg)
        << ',' << format_real(p.gain_db) << '\n';
  finish_write(out, path);
}

std::vector<std::string> write_outputs(const ExperimentSpec& spec, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + spec.output_dir + "': " + ec.message());
  const fs::path dir(spec.output_dir);
  std::vector<std::string> written;
  const std::string rows_path = (dir / (spec.id + ".csv")).string();
  emit_csv(result.rows, rows_path);
  written.push_back(rows_path);
  const std::string summary_path = (dir / (spec.id + "_summary.csv")).string();
  emit_summary_csv(summarize(result.rows), summary_path);
  written.push_back(summary_path);
  if (!result.traces.empty()) {
    const std::string p = (dir / (spec.id + "_trace.csv")).string();
    emit_trace_csv(result.traces, p);
    written.push_back(p);
  }
  if (!result.patterns.empty()) {
    const std::string p = (dir / (spec.id + "_pattern.csv")).string();
    emit_pattern_csv(result.patterns, p);
    written.push_back(p);
  }
  return written;
}

}  // namespace riscoex
