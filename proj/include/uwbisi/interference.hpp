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

// Power-delay-profile approximations and the interference-power law: a
// Gamma mixture over the cluster count L and the interfering path count n,
// plus point masses at zero and at full power.

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "uwbisi/cluster_stats.hpp"
#include "uwbisi/params.hpp"

namespace uwbisi {

/// Mean of n equally spaced samples of exp(-t / intra_decay) on [tc, t_last).
double pdp_sampled(ChipTime tc, double t_last, long n_samples, const ChannelParams &params);

/// Interval mean of exp(-t / intra_decay) over [tc, t_last]; the n -> inf limit of pdp_sampled.
double pdp_approx(ChipTime tc, double t_last, const ChannelParams &params);

/// Density of the last cluster delay T_L ~ Gamma(L, cluster_rate) restricted to [tc, inf).
double last_cluster_delay_pdf(long L, double t, ChipTime tc, const ChannelParams &params);

struct MeanPdpResult {
  double value = 0.0;
  double abs_error = 0.0;   // quadrature estimate, in the normalized units of `value`
  double upper_limit = 0.0; // truncation point of the semi-infinite integral
  double tail_bound = 0.0;  // bound on the discarded part, same units
  long evaluations = 0;
};

/// pdp_approx averaged over last_cluster_delay_pdf. Throws Error(numerical) when
/// the quadrature misses its 1e-8 relative tolerance.
MeanPdpResult mean_pdp_detailed(long L, ChipTime tc, const ChannelParams &params);
double mean_pdp(long L, ChipTime tc, const ChannelParams &params);

/// Gamma(m, omega / m) density: the power of one Nakagami-m path with mean omega.
double path_power_pdf(double x, double omega, double m);

template <typename Derived>
Eigen::ArrayXd path_power_pdf(const Eigen::ArrayBase<Derived> &x, double omega, double m) {
  return x.derived().unaryExpr([=](double v) { return path_power_pdf(v, omega, m); });
}

/// Sum of n independent path powers of mean omega0: Gamma(n m, omega0 / m).
/// Evaluated in the log domain.
double interference_pdf_given_n_L(double x, long n, double omega0, double m = 2.0);

/// Regularized lower incomplete gamma P(a, x).
double gamma_cdf(double x, double shape, double scale);

enum class PowerScale {
  unit_energy,  // per-L scale making the analytic expected total energy one
  absolute      // cluster power constant fixed at 1
};

std::string to_string(PowerScale scale);
PowerScale power_scale_from_string(const std::string &text);

/// "min:max:points" abscissae.
struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  long points = 1001;

  static GridSpec parse(const std::string &text);
  Eigen::ArrayXd abscissae() const;
  std::string to_string() const;
};

struct AnalysisOptions {
  PowerScale scale = PowerScale::unit_energy;
  double cluster_tail = 1e-8;  // stop the L sum once the remaining Poisson mass is below this
  double path_tail = 1e-8;     // per-L stop criterion for the n sum
  long max_paths = 5000;
  bool evaluate_density = true;  // false leaves grid and density_values empty (moments only)
};

/// One L term of the mixture.
struct ClusterTerm {
  long L = 0;
  double weight = 0.0;        // P(L | L >= 1)
  double mean_pdp = 0.0;      // unscaled
  double scale = 1.0;         // power scale applied to mean_pdp
  double omega = 0.0;         // per-path mean power, mean_pdp * scale
  double zero_mass = 0.0;     // P(no interfering path | L)
  Eigen::ArrayXd path_probs;  // P(n | L) for n = 1, 2, ...
  double path_tail = 0.0;     // mass not enumerated
  double quadrature_error = 0.0;
  double m = 2.0;
  Eigen::ArrayXd log_gamma_shapes;  // lgamma(n m), cached for density evaluation
  Eigen::ArrayXd gamma_steps;       // Gamma(n m) / Gamma(n m + m)

  double continuous_mass() const { return path_probs.sum(); }
  /// Sum over n of P(n | L) * Gamma(n m, omega / m) density at x.
  double density(double x) const;
  double cdf(double x) const;
  double mean() const;
  double second_moment() const;
};

struct MixedDistribution {
  EnvClass env = EnvClass::los;
  double tc_ns = 0.0;
  double m = 2.0;
  PowerScale scale = PowerScale::unit_energy;

  double mass_at_zero = 0.0;
  double full_power_mass = 0.0;
  double full_power_level = 1.0;  // location of the full-power point mass
  std::vector<ClusterTerm> terms;

  Eigen::ArrayXd grid;
  Eigen::ArrayXd density_values;  // continuous part on `grid`

  double mean = 0.0;
  double variance = 0.0;

  // diagnostics
  double cluster_conditioning_mass = 0.0;  // 1 - exp(-mean_clusters)
  double cluster_tail_mass = 0.0;
  double path_tail_mass = 0.0;  // weighted over L
  double max_quadrature_error = 0.0;

  double continuous_mass() const;
  double total_mass() const { return mass_at_zero + full_power_mass + continuous_mass(); }
  /// Continuous density at x > 0, without the point masses.
  double density(double x) const;
  /// Distribution function including both point masses.
  double cdf(double x) const;
  /// Trapezoid integral of density_values over the grid.
  double grid_integral() const;
  /// Cumulative trapezoid integral on the grid plus point masses at or below each abscissa.
  Eigen::ArrayXd grid_cumulative() const;
};

/// Mixture of one L term given the chip boundary statistics. Includes the
/// chosen power scale.
ClusterTerm cluster_term(long L, ChipTime tc, EnvClass env, const ChannelParams &params,
                         const AnalysisOptions &options = {});

/// Density of the interference power given L clusters (continuous part only).
double interference_pdf_given_L(double x, long L, ChipTime tc, EnvClass env, const ChannelParams &params,
                                const AnalysisOptions &options = {});

/// Full interference-power law over L ~ Poisson(mean_clusters) given L >= 1,
/// evaluated on auto_grid unless a grid is given.
MixedDistribution interference_distribution(ChipTime tc, EnvClass env, const ChannelParams &params,
                                            const AnalysisOptions &options = {});
MixedDistribution interference_distribution(ChipTime tc, EnvClass env, const ChannelParams &params,
                                            const GridSpec &grid, const AnalysisOptions &options = {});

/// [0, upper] with upper >= 1 chosen so the continuous mass above it is below 1e-8;
/// at least `points` abscissae, more (up to 100001) when narrow components need them.
GridSpec auto_grid(const MixedDistribution &d, long points = 10001);

/// Fills grid and density_values.
void evaluate_on_grid(MixedDistribution &d, const GridSpec &grid);

}  // namespace uwbisi
