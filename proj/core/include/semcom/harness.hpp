// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "semcom/altopt.hpp"
#include "semcom/channel.hpp"

namespace semcom {

enum class SweepAxis { Users, IrsUnits };

std::string_view to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(std::string_view s);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Users;
  std::vector<int> values;

  /// Non-empty, strictly ascending, all >= 1.
  void validate() const;
};

/// Everything needed to run a scenario family. See README for the file format.
struct ScenarioConfig {
  std::string name = "scenario";

  int antennas = 5;
  int users = 2;
  int irs_elements = 20;
  double bandwidth_hz = 1e6;
  double noise_w = 1e-11;
  bool allow_users_exceed_antennas = false;

  Point bs{0.0, 0.0};
  Point irs{50.0, 10.0};
  Point user_center{70.0, 0.0};
  double user_radius = 10.0;

  PathlossModel pathloss;
  ObjectiveWeights weights;
  SemanticParams semantic;
  /// Overrides for users 0..n-1; remaining users use `semantic`.
  std::vector<SemanticParams> semantic_per_user;

  std::vector<Algorithm> algorithms{Algorithm::OptSdp, Algorithm::OptRandIrs, Algorithm::OptMmse};
  SolverSettings solver;
  std::vector<std::uint64_t> seeds;

  /// Optional default sweep; values empty means none was given.
  SweepSpec sweep;

  /// Warnings produced while parsing (e.g. K > M explicitly allowed).
  std::vector<std::string> warnings;

  SystemConfig system(int users, int irs_elements) const;
  std::vector<SemanticParams> semantic_for(int users) const;
};

/// Parses and validates a JSON config. Unknown keys are rejected; every
/// violation is collected into one ConfigError.
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(const std::string& text);

/// Resolved configuration (defaults filled in) as pretty-printed JSON.
std::string config_to_json(const ScenarioConfig& c);

struct ResultRow {
  std::string scenario_id;
  std::string algo;
  std::uint64_t seed = 0;
  int users = 0;
  int irs_elements = 0;
  double avg_latency_s = 0.0;
  double avg_semantic_bits = 0.0;
  /// 10 log10 of the arithmetic mean of the users' linear SINRs.
  double avg_sinr_db = 0.0;
  double total_power_w = 0.0;
  double objective = 0.0;
  int iterations = 0;
  std::string status;
};

struct SweepOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Builds the scenario for one (K, N, seed) trial: user positions, channel
/// draw and semantic parameters. Channels do not depend on the algorithm.
Scenario make_scenario(const ScenarioConfig& c, int users, int irs_elements, std::uint64_t seed,
                       Algorithm algorithm);

/// Stream handed to `run` for a trial; shared by all algorithms.
RngStream algorithm_stream(std::uint64_t seed);

ResultRow summarize(const Scenario& s, const Outcome& o, const std::string& scenario_id,
                    std::uint64_t seed);

/// One row per sweep value x seed x algorithm, sorted by (K, N, algo, seed).
/// A failing trial produces a row with its status instead of aborting.
std::vector<ResultRow> run_sweep(const ScenarioConfig& c, const SweepSpec& sweep,
                                 const SweepOptions& options = {});

inline constexpr const char* kCsvHeader =
    "scenario_id,algo,seed,K,N,avg_latency_s,avg_semantic_bits,avg_sinr_db,total_power_w,"
    "objective,iterations,status";

void sort_rows(std::vector<ResultRow>& rows);
std::string to_csv(std::vector<ResultRow> rows);
void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> parse_csv(const std::string& text);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

enum class Metric { Latency, SemanticBits, SinrDb, Power, Objective };

std::string_view metric_name(Metric m);
double metric_value(const ResultRow& r, Metric m);

struct SeriesPoint {
  double x = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  int count = 0;
};

/// Seed averages of one metric per algorithm along an axis, using rows whose
/// status is converged or max-iter.
std::map<std::string, std::vector<SeriesPoint>> aggregate(const std::vector<ResultRow>& rows,
                                                          SweepAxis axis, Metric metric);

struct PlotReport {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
};

/// SVG line charts (one line per algorithm, standard-error bars) for every
/// axis along which the rows vary: latency, semantic bits and SINR against K;
/// latency and SINR against N.
PlotReport emit_plots(const std::vector<ResultRow>& rows, const std::filesystem::path& out_dir);

/// Chart as an SVG document; points carry data-x / data-mean / data-stderr attributes.
std::string render_svg(const std::map<std::string, std::vector<SeriesPoint>>& series,
                       const std::string& title, const std::string& x_label,
                       const std::string& y_label);

/// Resolved config, sweep and seed list.
void write_manifest(const ScenarioConfig& c, const SweepSpec& sweep,
                    const std::filesystem::path& path);

}  // namespace semcom
