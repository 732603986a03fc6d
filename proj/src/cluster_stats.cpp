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

#include "uwbisi/cluster_stats.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "uwbisi/error.hpp"
#include "uwbisi/numerics.hpp"

namespace uwbisi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Tail series sum_{i > ell} u^(i-ell-1) / i!, scaled by (ell+1)!.
double scaled_tail_series(int ell, double u) {
  CompensatedSum s;
  double term = 1.0;
  for (int j = 0;; ++j) {
    s += term;
    term *= u / static_cast<double>(ell + 2 + j);
    if (term == 0.0 || std::abs(term) <= 1e-30 * std::abs(s.value())) break;
  }
  return s.value();
}

}  // namespace

ChipTime::ChipTime(double ns) : ns_(ns) {
  if (!(ns >= 0.0) || !std::isfinite(ns))
    fail(ErrorKind::validation, "chip time must be a finite non-negative number of ns");
}

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

SignedLog taylor_remainder_ratio(int ell, double u) {
  if (ell < 0) fail(ErrorKind::domain, "taylor remainder order must be non-negative");
  if (std::abs(u) <= ell + 1.0) {
    // Terms decrease from the first one on, no cancellation against e^u.
    const double s = scaled_tail_series(ell, u);
    return {std::log(std::abs(s)) - log_factorial(ell + 1), s > 0 ? 1 : (s < 0 ? -1 : 0)};
  }
  // e^u - sum_{i<=ell} u^i/i!, every piece scaled by the largest magnitude.
  const double log_u = std::log(std::abs(u));
  std::vector<double> log_terms(ell + 1);
  double peak = u;
  for (int i = 0; i <= ell; ++i) {
    log_terms[i] = i * log_u - log_factorial(i);
    peak = std::max(peak, log_terms[i]);
  }
  CompensatedSum s;
  s += std::exp(u - peak);
  for (int i = 0; i <= ell; ++i) {
    const double sign = (u < 0 && (i % 2 == 1)) ? -1.0 : 1.0;
    s += -sign * std::exp(log_terms[i] - peak);
  }
  const double r = s.value();
  if (r == 0.0) return {kNegInf, 0};
  int sign = r > 0 ? 1 : -1;
  if (u < 0 && ((ell + 1) % 2 == 1)) sign = -sign;  // divide by u^(ell+1)
  return {peak + std::log(std::abs(r)) - (ell + 1) * log_u, sign};
}

double taylor_remainder(int ell, double u) {
  if (u == 0.0) return 0.0;
  const auto ratio = taylor_remainder_ratio(ell, u);
  int sign = ratio.sign;
  if (u < 0 && ((ell + 1) % 2 == 1)) sign = -sign;
  if (sign == 0) return 0.0;
  return sign * std::exp(ratio.log_abs + (ell + 1) * std::log(std::abs(u)));
}

bool rates_degenerate(double first_rate, double cluster_rate) {
  return std::abs(cluster_rate - first_rate) / cluster_rate < 1e-9;
}

double cluster_arrival_pdf(int ell, double x, double first_rate, double cluster_rate) {
  if (ell < 0) fail(ErrorKind::domain, "cluster index must be non-negative");
  if (x < 0.0) return 0.0;
  if (ell == 0) return first_rate * std::exp(-first_rate * x);
  if (x == 0.0) return 0.0;
  const double log_head = std::log(first_rate) + ell * std::log(cluster_rate) + ell * std::log(x) - cluster_rate * x;
  if (rates_degenerate(first_rate, cluster_rate)) {
    // T_ell ~ Erlang(ell + 1, rate)
    return std::exp(log_head - log_factorial(ell));
  }
  // lambda0 Lambda^ell / (Lambda - lambda0)^ell e^{-Lambda x} R_{ell-1}((Lambda - lambda0) x),
  // with (Lambda - lambda0)^ell x^ell absorbed into the remainder ratio.
  const auto r = taylor_remainder_ratio(ell - 1, (cluster_rate - first_rate) * x);
  if (r.sign <= 0) return 0.0;
  return std::exp(log_head + r.log_abs);
}

double cluster_arrival_pdf(int ell, double x, const ChannelParams &params) {
  return cluster_arrival_pdf(ell, x, params.lambda0, params.cluster_rate);
}

double prob_chip_in_cluster(int ell, ChipTime tc, double first_rate, double cluster_rate) {
  if (ell < 1) fail(ErrorKind::domain, "cluster index for prob_chip_in_cluster starts at 1");
  // A Poisson gap of rate Lambda straddles tc with density Lambda, hence f_ell(tc) / Lambda.
  return cluster_arrival_pdf(ell, tc.ns(), first_rate, cluster_rate) / cluster_rate;
}

double prob_chip_in_cluster(int ell, ChipTime tc, const ChannelParams &params) {
  return prob_chip_in_cluster(ell, tc, params.lambda0, params.cluster_rate);
}

double prob_chip_before_first_cluster(ChipTime tc, const ChannelParams &params) {
  return std::exp(-params.lambda0 * tc.ns());
}

double prob_chip_cluster_index(int k, ChipTime tc, EnvClass env, const ChannelParams &params) {
  if (k < 0) return 0.0;
  const double mu = params.cluster_rate * tc.ns();
  return poisson_pmf(env == EnvClass::los ? k : k + 1, mu);
}

double chip_cluster_index_mass(ChipTime tc, EnvClass env, const ChannelParams &params) {
  return env == EnvClass::los ? 1.0 : -std::expm1(-params.cluster_rate * tc.ns());
}

double log_j_integral(int m, double rate, ChipTime tc) {
  if (m < 0) fail(ErrorKind::domain, "j_integral order must be non-negative");
  if (!(rate > 0.0)) fail(ErrorKind::domain, "j_integral rate must be positive");
  // m!/rate^(m+1) * P(Poisson(rate tc) <= m)
  const double mu = rate * tc.ns();
  CompensatedSum head;
  for (int p = 0; p <= m; ++p) head += poisson_pmf(p, mu);
  double log_cdf = std::log(head.value());
  if (!std::isfinite(log_cdf)) {
    // every head term underflowed; the last one dominates when mu >> m
    log_cdf = poisson_log_pmf(m, mu) + std::log1p(m / mu);
  }
  return log_factorial(m) - (m + 1) * std::log(rate) + log_cdf;
}

double j_integral(int m, double rate, ChipTime tc) { return std::exp(log_j_integral(m, rate, tc)); }

double j_bar_integral(int m, double rate, ChipTime tc) {
  if (m < 0) fail(ErrorKind::domain, "j_bar_integral order must be non-negative");
  if (!(rate > 0.0)) fail(ErrorKind::domain, "j_bar_integral rate must be positive");
  return std::exp(log_factorial(m) - (m + 1) * std::log(rate)) * poisson_upper_tail(m + 1, rate * tc.ns());
}

DiscretePmf chip_cluster_pmf(ChipTime tc, const ChannelParams &params) {
  std::vector<double> probs;
  CompensatedSum total;
  probs.push_back(prob_chip_before_first_cluster(tc, params));
  total += probs.back();
  for (int ell = 1; ell <= 500 && total.value() <= 1.0 - 1e-9; ++ell) {
    probs.push_back(prob_chip_in_cluster(ell, tc, params));
    total += probs.back();
  }
  DiscretePmf out;
  out.n_min = 0;
  out.probs = Eigen::Map<Eigen::ArrayXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  out.tail_mass = std::max(0.0, 1.0 - total.value());
  return out;
}

}  // namespace uwbisi
