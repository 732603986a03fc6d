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

// Analytic-vs-Monte-Carlo comparison: histograms, total variation, moment table.

#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uwbisi/interference.hpp"
#include "uwbisi/oracle.hpp"

namespace uwbisi {

struct Histogram {
  std::vector<double> edges;  // bins are [edges[i], edges[i+1]), the last one closed
  std::vector<long> counts;
  std::string rule;

  std::size_t bins() const { return counts.size(); }
};

/// Freedman-Diaconis bins over [min, max] of the sample. When the interquartile
/// range is zero (e.g. more than half the samples are exactly 0) the range of the
/// non-zero samples is used, then Sturges. At most `max_bins` bins.
Histogram freedman_diaconis(std::span<const double> samples, std::size_t max_bins = 10000);

/// P(a <= X < b) of the mixed law for each bin (last bin closed), point masses included.
std::vector<double> bin_probabilities(const MixedDistribution &d, const std::vector<double> &edges);

/// Half the L1 distance between the analytic bin probabilities and the
/// empirical bin frequencies, plus half of the analytic mass outside the bins.
double histogram_total_variation(const MixedDistribution &d, const Histogram &h);

struct MomentRow {
  std::string statistic;
  double analytic = 0.0;
  double empirical = 0.0;
  double standard_error = 0.0;
  bool analytic_bounds = false;  // analytic >= empirical
};

struct PathCountReport {
  long clusters = 0;
  long runs = 0;
  double tv_distance = 0.0;
  double acceptance_rate = 0.0;
  double analytic_tail_mass = 0.0;
};

struct ComparisonReport {
  // config echo
  std::string cm;
  std::string env_class;
  double tc_ns = 0.0;
  long runs = 0;
  std::uint64_t seed = 0;
  std::string oracle_mode;
  std::string power_scale;
  double analytic_m = 2.0;
  double mean_nakagami_m = 0.0;
  double ray_rate_fitted = 0.0;

  std::vector<MomentRow> moment_table;
  double mean_ratio = 0.0;  // analytic / empirical, NaN when the empirical mean is 0
  double mass_at_zero_analytic = 0.0;
  double mass_at_zero_empirical = 0.0;
  double full_power_mass_analytic = 0.0;
  double full_power_mass_empirical = 0.0;

  std::size_t histogram_bins = 0;
  std::string histogram_rule;
  double tv_distance = 0.0;
  std::optional<PathCountReport> path_count;

  // truncation diagnostics
  double cluster_tail_mass = 0.0;
  double path_tail_mass = 0.0;
  long cluster_terms = 0;
  double cluster_conditioning_mass = 0.0;
  double max_quadrature_error = 0.0;

  /// True when every moment row has analytic >= empirical.
  bool bounds_hold() const;
};

ComparisonReport compare_moments(const MixedDistribution &d, const McEstimate &mc, const Histogram &h);

nlohmann::ordered_json to_json(const ComparisonReport &r);
ComparisonReport report_from_json(const nlohmann::ordered_json &j);

}  // namespace uwbisi
