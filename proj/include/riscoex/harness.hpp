#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "riscoex/closed_form.hpp"
#include "riscoex/config_io.hpp"
#include "riscoex/pdd.hpp"

namespace riscoex {

enum class Algorithm { pdd, low_complexity, comm_centric, intf_cancel, random_phase, no_ris };

std::string algorithm_name(Algorithm a);
/// Throws std::invalid_argument for unknown names.
Algorithm parse_algorithm(const std::string& name);
const std::vector<Algorithm>& all_algorithms();

/// The ten experiment ids, in a fixed order.
const std::vector<std::string>& experiment_ids();

/// What one experiment sweeps, how often, and where results go.
///
/// Sweep units per id: convergence and pmax_sweep/feasibility_sweep use
/// P_max in W; beampattern the detection direction in degrees;
/// elements_sweep N; gamma_sweep the radar target in dB;
/// distance_sweep_* the radar y coordinate D in m; quantization_sweep the
/// bit count b; timing_table N1 = N2.
struct ExperimentSpec {
  std::string id;
  std::vector<double> grid;
  int trials = 50;
  std::uint64_t base_seed = 1;
  std::vector<Algorithm> algorithms;
  std::string output_dir = ".";
  int threads = 1;
  /// Wall time is machine-dependent; it is written as 0 unless requested so
  /// that repeated runs produce identical bytes.
  bool record_wall_time = false;

  /// Throws std::invalid_argument on an unknown id or broken invariant.
  void validate() const;
};

/// Default grid, trial count and algorithm subset for an id.
ExperimentSpec default_spec(const std::string& id);

struct ResultRow {
  std::string experiment;
  double sweep_value = 0.0;
  std::string variant;  // surface layout or phase resolution; "default" otherwise
  std::string algorithm;
  std::uint64_t seed = 0;
  double comm_sinr_db = 0.0;
  double min_radar_sinr_db = 0.0;
  bool feasible = false;
  double total_power = 0.0;
  int iterations = 0;
  double wall_time = 0.0;

  bool operator==(const ResultRow&) const = default;
};

/// One outer iteration of a PDD solve.
struct TraceRow {
  std::uint64_t seed = 0;
  int iteration = 0;
  double objective = 0.0;
  double violation = 0.0;
  double comm_sinr_db = 0.0;
};

/// One sample of a normalized transmit beampattern.
struct PatternRow {
  std::string algorithm;
  std::uint64_t seed = 0;
  double direction_deg = 0.0;
  double angle_deg = 0.0;
  double gain_db = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<TraceRow> traces;
  std::vector<PatternRow> patterns;
  /// Solver hard failures, one message each.
  std::vector<std::string> failures;
};

/// Runs every (grid point, trial) work item. Trial t uses channel seed
/// base_seed + t at every grid point. Rows come back sorted by (grid
/// position, variant, algorithm order, seed).
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunConfig& base);

/// Runs one algorithm on one channel draw. `rng` feeds random phases only.
SolveReport run_algorithm(Algorithm algo, const ChannelSet& ch, const RunConfig& rc, std::mt19937_64& rng);

/// Reduces a report to a CSV row (dB conversion happens here).
ResultRow make_row(const std::string& experiment, double sweep_value, const std::string& variant,
                   Algorithm algo, std::uint64_t seed, const SolveReport& report, bool record_wall_time);

struct SummaryRow {
  std::string experiment;
  double sweep_value = 0.0;
  std::string variant;
  std::string algorithm;
  int trials = 0;
  int feasible = 0;
  double feasibility = 0.0;
  /// Mean over feasible trials; NaN when none.
  double mean_comm_sinr_db = 0.0;
  /// Mean over the seeds where every algorithm of the same point and variant is feasible.
  int common_trials = 0;
  double common_mean_comm_sinr_db = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// Fraction of feasible rows per (sweep value, variant, algorithm).
/// Throws std::invalid_argument when rows mix experiment ids.
std::map<std::tuple<double, std::string, std::string>, double> estimate_feasibility_probability(
    const std::vector<ResultRow>& rows);

/// Header of the per-trial CSV.
const std::string& result_csv_header();

/// Writes header plus rows. Throws std::invalid_argument on empty input and
/// std::runtime_error (naming the path) on I/O failure.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(const std::string& path);

/// Row serialization shared by the writers; 12 significant digits, "." decimal point.
std::string format_row(const ResultRow& row);
ResultRow parse_row(const std::string& line);
std::string format_real(double v);

void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);
void emit_trace_csv(const std::vector<TraceRow>& rows, const std::string& path);
void emit_pattern_csv(const std::vector<PatternRow>& rows, const std::string& path);

/// Writes <id>.csv, <id>_summary.csv and, when present, <id>_trace.csv and
/// <id>_pattern.csv under spec.output_dir. Returns the paths written.
std::vector<std::string> write_outputs(const ExperimentSpec& spec, const ExperimentResult& result);

}  // namespace riscoex
