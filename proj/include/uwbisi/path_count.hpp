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

// Laws of the number of interfering multipath components. Rays follow a
// single Poisson process of rate ray_rate_fitted; clusters are separated by
// Exp(cluster_rate) gaps.

#pragma once

#include "uwbisi/cluster_stats.hpp"
#include "uwbisi/params.hpp"
#include "uwbisi/pmf.hpp"

namespace uwbisi {

/// Rays arriving in a gap of fixed length z: Poisson(ray_rate * z).
double prob_paths_given_gap(long n, double gap_ns, double ray_rate);

/// Rays inside one exponential cluster gap: geometric, lambda^n Lambda / (lambda + Lambda)^(n+1).
double prob_paths_in_cluster(long n, double ray_rate, double cluster_rate);
double prob_paths_in_cluster(long n, const ChannelParams &params);

/// Rays inside r + 1 independent cluster gaps: negative binomial with r + 1 successes.
double prob_paths_over_clusters(long r, long n, double ray_rate, double cluster_rate);
double prob_paths_over_clusters(long r, long n, const ChannelParams &params);

/// Paths beyond the chip when the chip ends in cluster k of L and each of the
/// L - k later clusters holds at least one path. Zero for n < L - k.
double prob_paths_given_k_L(long n, long k, long L, const ChannelParams &params);

/// Mean of prob_paths_given_k_L over n: (L - k)(lambda + Lambda) / Lambda.
double mean_paths_given_k_L(long k, long L, const ChannelParams &params);

/// Sum over k < L of prob_paths_given_k_L * prob_chip_cluster_index. Defined for n >= 1.
double prob_paths_given_L(long n, long L, ChipTime tc, EnvClass env, const ChannelParams &params);

/// Probability that no path lies beyond the chip given L clusters: mass of
/// prob_chip_cluster_index on k >= L.
double prob_zero_paths(long L, ChipTime tc, EnvClass env, const ChannelParams &params);

/// Mass of the NLOS leg where the chip ends before the first cluster
/// (1 - sum_k prob_chip_cluster_index); zero for LOS.
double full_power_leg_mass(ChipTime tc, EnvClass env, const ChannelParams &params);

/// Full pmf of the interfering path count given L clusters, starting at n = 0
/// (prob_zero_paths). For NLOS the leg contributes its mass times
/// prob_paths_given_k_L(n, 0, L): every path of every cluster interferes.
/// Enumeration stops at cumulative mass >= 1 - 1e-8 or n = 5000.
DiscretePmf paths_given_L_pmf(long L, ChipTime tc, EnvClass env, const ChannelParams &params);

}  // namespace uwbisi
