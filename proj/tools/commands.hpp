// SPDX-License-Identifier: Apache-2.0
//
// uwbisi - multipath interference statistics for IR-UWB links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// The four CLI commands as library calls. Each writes its files into `out`
// (skipped when `out` is empty) and returns what it computed.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uwbisi/interference.hpp"
#include "uwbisi/oracle.hpp"
#include "uwbisi/report.hpp"

namespace uwbisi::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_validation = 2,  // bad flags, parameter file load or validation errors
  exit_numerical = 3,
  exit_bound_violation = 4,
  exit_unattainable = 5,  // sweep target not reached in range
};

/// Path of the parameter file shipped with the sources.
std::filesystem::path default_params_path();

/// Shortest decimal that parses back to the same double.
std::string format_number(double v);

struct CommonConfig {
  std::filesystem::path params = default_params_path();
  std::string cm = "cm1";
  std::filesystem::path out;
};

struct AnalyzeConfig : CommonConfig {
  double tc = 50.0;
  std::optional<GridSpec> grid;
  PowerScale scale = PowerScale::unit_energy;
};

struct AnalyzeResult {
  ChannelParams params;
  MixedDistribution distribution;
};

AnalyzeResult cmd_analyze(const AnalyzeConfig &config);

struct SimulateConfig : CommonConfig {
  double tc = 50.0;
  long runs = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  OracleMode oracle = OracleMode::simplified;
};

struct SimulateResult {
  ChannelParams params;
  McEstimate estimate;
  Histogram histogram;
};

SimulateResult cmd_simulate(const SimulateConfig &config);

struct CompareConfig : SimulateConfig {
  std::optional<GridSpec> grid;
  PowerScale scale = PowerScale::unit_energy;
  long path_clusters = 5;  // L of the path-count sub-report, 0 disables it
  long path_runs = 20000;
};

struct CompareResult {
  ComparisonReport report;
  MixedDistribution distribution;
  Histogram histogram;
};

CompareResult cmd_compare(const CompareConfig &config);

struct SweepConfig : CommonConfig {
  double tc_min = 10.0;
  double tc_max = 100.0;
  double tc_step = 5.0;
  double target = 0.05;
  PowerScale scale = PowerScale::unit_energy;

  /// "min:max:step"
  void set_range(const std::string &text);
};

struct SweepRow {
  double tc = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double mass_at_zero = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<double> selected_tc;  // smallest tc with mean <= target
};

SweepResult cmd_sweep(const SweepConfig &config);

/// Parses argv and runs the command; returns the process exit code.
int run(int argc, char **argv);

}  // namespace uwbisi::cli
