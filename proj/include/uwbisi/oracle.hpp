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

// Clustered multipath channel generator and Monte-Carlo estimators.
//
// Simplified mode: single fitted ray rate, single-exponential PDP, rays of a
// cluster stop at the next cluster start (the last cluster ends at T_L, one
// more Exp(cluster_rate) gap after its start).
// Full mode: two-rate ray mixture, per-cluster energy and decay with
// shadowing, rays continue until the cluster PDP falls below 1e-5 of its peak.
//
// Every realization draws from its own std::mt19937_64 keyed by
// (seed, realization index), so results do not depend on the thread count.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uwbisi/cluster_stats.hpp"
#include "uwbisi/params.hpp"
#include "uwbisi/pmf.hpp"

namespace uwbisi {

enum class OracleMode { simplified, full };

std::string to_string(OracleMode mode);
OracleMode oracle_mode_from_string(const std::string &text);

using Rng = std::mt19937_64;

/// Independent stream for realization `index` of a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

struct ChannelRealization {
  std::vector<double> cluster_times;             // absolute cluster starts, increasing
  double horizon = 0.0;                          // end of the last cluster (simplified mode)
  std::vector<std::vector<double>> ray_delays;   // relative to the cluster start, first is 0
  std::vector<std::vector<double>> mean_power;   // PDP value of each ray before fading
  std::vector<std::vector<double>> tap_gains;    // amplitudes, unit total energy
  std::vector<std::vector<double>> phases;       // radians in [0, 2 pi)

  long cluster_count() const { return static_cast<long>(cluster_times.size()); }
  long ray_count() const;
  double total_energy() const;
};

/// L ~ Poisson(mean_clusters) conditioned on L >= 1.
long draw_cluster_count(const ChannelParams &params, Rng &rng);

ChannelRealization generate_realization(const ChannelParams &params, OracleMode mode, Rng &rng);
ChannelRealization generate_realization_with_clusters(const ChannelParams &params, OracleMode mode, long L, Rng &rng);
ChannelRealization generate_realization(const ChannelParams &params, OracleMode mode, std::uint64_t seed,
                                        std::uint64_t index);

/// Arrivals of a rate-`rate` Poisson process strictly inside (0, gap).
long rays_in_gap(double gap, double rate, Rng &rng);

/// Energy of every ray at absolute delay >= tc.
double interference_power(const ChannelRealization &real, ChipTime tc);
long interfering_path_count(const ChannelRealization &real, ChipTime tc);

/// Mean PDP value over the rays at delay >= tc; empty when there are none.
std::optional<double> excess_pdp_mean(const ChannelRealization &real, ChipTime tc);

struct McOptions {
  OracleMode mode = OracleMode::simplified;
  int threads = 1;
};

struct McEstimate {
  std::vector<double> samples;
  std::uint64_t seed = 0;
  long runs = 0;
  double mean = 0.0;
  double variance = 0.0;           // unbiased
  double standard_error = 0.0;     // of the mean
  double variance_standard_error = 0.0;

  static McEstimate from_samples(std::vector<double> samples, std::uint64_t seed);
};

/// Interference power of `runs` independent realizations.
McEstimate mc_interference(const ChannelParams &params, ChipTime tc, long runs, std::uint64_t seed,
                           const McOptions &options = {});

enum class ConditionKind {
  cluster_count,   // exactly `value` clusters
  chip_in_cluster  // chip end inside cluster `value` (1-based), T_{value-1} <= tc < T_value
};

struct Condition {
  ConditionKind kind = ConditionKind::cluster_count;
  long value = 1;
  bool require_interfering_path = false;  // also demand at least one ray beyond the chip
};

struct ConditionalEstimate {
  McEstimate excess_pdp;          // samples where at least one ray interferes
  McEstimate power;               // interference power of accepted realizations
  std::vector<long> path_counts;  // interfering rays of accepted realizations
  DiscretePmf path_pmf;
  long attempts = 0;
  double acceptance_rate = 0.0;
};

/// Rejection sampling on the unconditioned generator. Throws Error(budget) when
/// the acceptance rate is (or would be) below 1e-4.
ConditionalEstimate mc_conditional(const ChannelParams &params, ChipTime tc, const Condition &condition, long runs,
                                   std::uint64_t seed, const McOptions &options = {});

/// Same statistics for realizations generated with exactly L clusters. Equal in
/// law to conditioning the unconditioned generator on L, at no rejection cost.
/// With `require_interfering_path`, realizations without a ray beyond the chip
/// are skipped.
ConditionalEstimate mc_given_clusters(const ChannelParams &params, ChipTime tc, long L, long runs, std::uint64_t seed,
                                      bool require_interfering_path = false, const McOptions &options = {});

}  // namespace uwbisi
