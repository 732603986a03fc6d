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

#include "uwbisi/path_count.hpp"

#include <cmath>
#include <vector>

#include "uwbisi/error.hpp"
#include "uwbisi/numerics.hpp"

namespace uwbisi {

namespace {

void require_rates(double ray_rate, double cluster_rate) {
  if (!(ray_rate > 0.0) || !(cluster_rate > 0.0))
    fail(ErrorKind::domain, "path-count laws need positive ray and cluster rates");
}

}  // namespace

double prob_paths_given_gap(long n, double gap_ns, double ray_rate) {
  if (gap_ns < 0.0) fail(ErrorKind::domain, "gap length must be non-negative");
  return poisson_pmf(n, ray_rate * gap_ns);
}

double prob_paths_in_cluster(long n, double ray_rate, double cluster_rate) {
  return prob_paths_over_clusters(0, n, ray_rate, cluster_rate);
}

double prob_paths_in_cluster(long n, const ChannelParams &params) {
  return prob_paths_in_cluster(n, params.ray_rate_fitted, params.cluster_rate);
}

double prob_paths_over_clusters(long r, long n, double ray_rate, double cluster_rate) {
  require_rates(ray_rate, cluster_rate);
  if (r < 0) fail(ErrorKind::domain, "cluster count offset r must be non-negative");
  if (n < 0) return 0.0;
  const double log_total = std::log(ray_rate + cluster_rate);
  const double log_p = std::log(ray_rate) - log_total;      // one more ray before the boundary
  const double log_q = std::log(cluster_rate) - log_total;  // boundary first
  return std::exp(n * log_p + (r + 1) * log_q + log_binomial(n + r, r));
}

double prob_paths_over_clusters(long r, long n, const ChannelParams &params) {
  return prob_paths_over_clusters(r, n, params.ray_rate_fitted, params.cluster_rate);
}

double prob_paths_given_k_L(long n, long k, long L, const ChannelParams &params) {
  if (L < 1) fail(ErrorKind::domain, "cluster count L must be at least 1");
  if (k < 0 || k > L - 1) fail(ErrorKind::domain, "cluster index k must lie in [0, L-1]");
  const long clusters = L - k;
  if (n < clusters) return 0.0;
  // each interfering cluster: 1 + Geometric(q) paths
  const double lam = params.ray_rate_fitted, big = params.cluster_rate;
  require_rates(lam, big);
  const double log_total = std::log(lam + big);
  return std::exp((n - clusters) * (std::log(lam) - log_total) + clusters * (std::log(big) - log_total) +
                  log_binomial(n - 1, clusters - 1));
}

double mean_paths_given_k_L(long k, long L, const ChannelParams &params) {
  return static_cast<double>(L - k) * (params.ray_rate_fitted + params.cluster_rate) / params.cluster_rate;
}

double prob_paths_given_L(long n, long L, ChipTime tc, EnvClass env, const ChannelParams &params) {
  if (L < 1) fail(ErrorKind::domain, "cluster count L must be at least 1");
  if (n < 1) return 0.0;
  CompensatedSum s;
  for (long k = 0; k < L; ++k) {
    const double pk = prob_chip_cluster_index(static_cast<int>(k), tc, env, params);
    if (pk > 0.0) s += prob_paths_given_k_L(n, k, L, params) * pk;
  }
  return s.value();
}

double prob_zero_paths(long L, ChipTime tc, EnvClass env, const ChannelParams &params) {
  if (L < 1) fail(ErrorKind::domain, "cluster count L must be at least 1");
  const double mu = params.cluster_rate * tc.ns();
  return poisson_upper_tail(env == EnvClass::los ? L : L + 1, mu);
}

double full_power_leg_mass(ChipTime tc, EnvClass env, const ChannelParams &params) {
  return env == EnvClass::los ? 0.0 : std::exp(-params.cluster_rate * tc.ns());
}

DiscretePmf paths_given_L_pmf(long L, ChipTime tc, EnvClass env, const ChannelParams &params) {
  const double leg = full_power_leg_mass(tc, env, params);
  std::vector<double> probs;
  CompensatedSum total;
  probs.push_back(prob_zero_paths(L, tc, env, params));
  total += probs.back();
  for (long n = 1; n <= 5000 && total.value() < 1.0 - 1e-8; ++n) {
    double p = prob_paths_given_L(n, L, tc, env, params);
    if (leg > 0.0) p += leg * prob_paths_given_k_L(n, 0, L, params);
    probs.push_back(p);
    total += p;
  }
  DiscretePmf out;
  out.n_min = 0;
  out.probs = Eigen::Map<Eigen::ArrayXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  out.tail_mass = std::max(0.0, 1.0 - total.value());
  return out;
}

}  // namespace uwbisi
