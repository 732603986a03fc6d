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

// Cluster-arrival statistics. Cluster starts are T_0 ~ Exp(lambda0) followed
// by Exp(cluster_rate) gaps; cluster C_l covers [T_{l-1}, T_l).

#pragma once

#include "uwbisi/params.hpp"
#include "uwbisi/pmf.hpp"

namespace uwbisi {

/// Chip duration in ns.
class ChipTime {
public:
  /// Accepts 0 (no guard interval); negative or non-finite values throw.
  explicit ChipTime(double ns);
  double ns() const noexcept { return ns_; }

private:
  double ns_;
};

/// Signed value stored as (log|v|, sign) so it survives over/underflow.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 0;
  double value() const;
};

/// e^u minus its degree-`ell` Taylor polynomial.
double taylor_remainder(int ell, double u);

/// R_ell(u) / u^(ell+1): the remainder with its leading power factored out.
/// Smooth through u = 0 where it equals 1/(ell+1)!.
SignedLog taylor_remainder_ratio(int ell, double u);

/// True when the two rates coincide to within 1e-9 relative; formulas then
/// switch to the exact Erlang / Poisson limit.
bool rates_degenerate(double first_rate, double cluster_rate);

/// Density of T_ell = T_0 + sum of ell cluster gaps; ell = 0 is the first-cluster delay.
double cluster_arrival_pdf(int ell, double x, double first_rate, double cluster_rate);
double cluster_arrival_pdf(int ell, double x, const ChannelParams &params);

/// P(T_{ell-1} <= tc < T_ell), ell >= 1.
double prob_chip_in_cluster(int ell, ChipTime tc, double first_rate, double cluster_rate);
double prob_chip_in_cluster(int ell, ChipTime tc, const ChannelParams &params);

/// P(tc < T_0) = exp(-lambda0 * tc): the whole received pulse interferes.
double prob_chip_before_first_cluster(ChipTime tc, const ChannelParams &params);

/// Law of the index k of the cluster holding the chip boundary, as used by the
/// interference assembly. LOS (T_0 = 0): Poisson(cluster_rate * tc) at k.
/// NLOS: the same Poisson at k + 1, which sums to 1 - exp(-cluster_rate * tc).
double prob_chip_cluster_index(int k, ChipTime tc, EnvClass env, const ChannelParams &params);

/// Mass of prob_chip_cluster_index over k >= 0.
double chip_cluster_index_mass(ChipTime tc, EnvClass env, const ChannelParams &params);

/// Integral of x^m exp(-rate x) over [tc, inf).
double j_integral(int m, double rate, ChipTime tc);
double log_j_integral(int m, double rate, ChipTime tc);
/// Integral of x^m exp(-rate x) over [0, tc].
double j_bar_integral(int m, double rate, ChipTime tc);

/// Index 0 holds P(tc < T_0), index ell >= 1 holds P(tc in C_ell). Enumeration stops
/// once the running total exceeds 1 - 1e-9 or at ell = 500.
DiscretePmf chip_cluster_pmf(ChipTime tc, const ChannelParams &params);

}  // namespace uwbisi
