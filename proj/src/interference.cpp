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

#include "uwbisi/interference.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <unsupported/Eigen/SpecialFunctions>

#include "uwbisi/error.hpp"
#include "uwbisi/numerics.hpp"
#include "uwbisi/path_count.hpp"

namespace uwbisi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log of the Gamma(shape, scale) density, with the x = 0 edge resolved.
double gamma_log_pdf(double x, double shape, double scale, double log_gamma_shape) {
  if (x < 0.0) return kNegInf;
  if (x == 0.0) {
    if (shape < 1.0) return std::numeric_limits<double>::infinity();
    if (shape > 1.0) return kNegInf;
    return -std::log(scale);
  }
  return (shape - 1.0) * std::log(x) - x / scale - shape * std::log(scale) - log_gamma_shape;
}

// (1 - exp(-d / gamma)) * gamma / d, continuous through d = 0.
double interval_mean_factor(double d, double gamma) {
  if (std::abs(d) < 1e-6 * gamma) return 1.0 - 0.5 * d / gamma;
  return -std::expm1(-d / gamma) * gamma / d;
}

double parse_number(const std::string &text, const std::string &what) {
  double v = 0.0;
  const char *first = text.data();
  const char *last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail(ErrorKind::validation, "grid " + what + " is not a number: \"" + text + "\"");
  return v;
}

}  // namespace

double pdp_sampled(ChipTime tc, double t_last, long n_samples, const ChannelParams &params) {
  if (t_last < tc.ns()) fail(ErrorKind::domain, "last cluster delay lies before the chip end");
  if (n_samples < 1) fail(ErrorKind::domain, "pdp_sampled needs at least one sample");
  const double gamma = params.intra_decay;
  const double g0 = std::exp(-tc.ns() / gamma);
  const double span = t_last - tc.ns();
  if (span == 0.0) return g0;
  // (1/n) (g0 - gL) / (1 - (gL/g0)^(1/n)), both differences through expm1
  return g0 * -std::expm1(-span / gamma) / (n_samples * -std::expm1(-span / (gamma * n_samples)));
}

double pdp_approx(ChipTime tc, double t_last, const ChannelParams &params) {
  if (t_last < tc.ns()) fail(ErrorKind::domain, "last cluster delay lies before the chip end");
  const double g0 = std::exp(-tc.ns() / params.intra_decay);
  return g0 * interval_mean_factor(t_last - tc.ns(), params.intra_decay);
}

double last_cluster_delay_pdf(long L, double t, ChipTime tc, const ChannelParams &params) {
  if (L < 1) fail(ErrorKind::domain, "cluster count L must be at least 1");
  if (t < tc.ns()) return 0.0;
  const double rate = params.cluster_rate;
  const double log_power = L == 1 ? 0.0 : (L - 1) * std::log(t);
  return std::exp(log_power - rate * t - log_j_integral(static_cast<int>(L - 1), rate, tc));
}

MeanPdpResult mean_pdp_detailed(long L, ChipTime tc, const ChannelParams &params) {
  if (L < 1) fail(ErrorKind::domain, "cluster count L must be at least 1");
  const double rate = params.cluster_rate;
  const double gamma = params.intra_decay;
  const int order = static_cast<int>(L - 1);
  const double log_norm = log_j_integral(order, rate, tc);

  // exp(-tc/gamma) is factored out so the integrand stays O(1) for any chip length.
  auto integrand = [&](double x) {
    const double log_power = order == 0 ? 0.0 : order * std::log(x);
    return interval_mean_factor(x - tc.ns(), gamma) * std::exp(log_power - rate * x - log_norm);
  };
  auto tail_bound = [&](double upper) { return std::exp(log_j_integral(order, rate, ChipTime(upper)) - log_norm); };

  MeanPdpResult out;
  double lower = tc.ns();
  double upper = tc.ns() + 40.0 / rate;
  double head = 0.0, err = 0.0;
  for (int piece = 0;; ++piece) {
    const auto q = integrate_adaptive(integrand, lower, upper, 1e-8, 1e-300);
    out.evaluations += q.evaluations;
    if (!q.converged) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "mean PDP quadrature for L=" << L << ", tc=" << tc.ns() << " ns did not reach 1e-8 relative: estimate "
          << head + q.value << ", error bound " << err + q.abs_error;
      fail(ErrorKind::numerical, msg.str());
    }
    head += q.value;
    err += q.abs_error;
    const double tail = tail_bound(upper);
    if (tail <= 1e-10 * head || piece == 1000) {
      out.tail_bound = tail;
      break;
    }
    lower = upper;
    upper += 40.0 / rate;
  }
  const double g0 = std::exp(-tc.ns() / gamma);
  out.value = g0 * head;
  out.abs_error = g0 * err;
  out.tail_bound *= g0;
  out.upper_limit = upper;
  return out;
}

double mean_pdp(long L, ChipTime tc, const ChannelParams &params) { return mean_pdp_detailed(L, tc, params).value; }

double path_power_pdf(double x, double omega, double m) {
  if (!(omega > 0.0)) fail(ErrorKind::domain, "path power mean must be positive");
  if (!(m >= 0.5)) fail(ErrorKind::domain, "Nakagami m-factor must be at least 0.5");
  return std::exp(gamma_log_pdf(x, m, omega / m, std::lgamma(m)));
}

double interference_pdf_given_n_L(double x, long n, double omega0, double m) {
  if (n < 1) fail(ErrorKind::domain, "path count must be at least 1");
  if (!(omega0 > 0.0)) fail(ErrorKind::domain, "path power mean must be positive");
  const double shape = static_cast<double>(n) * m;
  return std::exp(gamma_log_pdf(x, shape, omega0 / m, std::lgamma(shape)));
}

double gamma_cdf(double x, double shape, double scale) {
  if (x <= 0.0) return 0.0;
  return Eigen::numext::igamma(shape, x / scale);
}

std::string to_string(PowerScale scale) { return scale == PowerScale::unit_energy ? "unit_energy" : "absolute"; }

PowerScale power_scale_from_string(const std::string &text) {
  if (text == "unit_energy") return PowerScale::unit_energy;
  if (text == "absolute") return PowerScale::absolute;
  fail(ErrorKind::validation, "unknown power scale \"" + text + "\" (expected unit_energy or absolute)");
}

GridSpec GridSpec::parse(const std::string &text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos || text.find(':', b + 1) != std::string::npos)
    fail(ErrorKind::validation, "grid must look like min:max:points, got \"" + text + "\"");
  GridSpec g;
  g.min = parse_number(text.substr(0, a), "min");
  g.max = parse_number(text.substr(a + 1, b - a - 1), "max");
  const double pts = parse_number(text.substr(b + 1), "points");
  if (pts != std::floor(pts) || pts < 2 || pts > 1e7) fail(ErrorKind::validation, "grid points must be an integer >= 2");
  g.points = static_cast<long>(pts);
  if (!(g.min >= 0.0) || !(g.max > g.min) || !std::isfinite(g.max))
    fail(ErrorKind::validation, "grid needs 0 <= min < max");
  return g;
}

Eigen::ArrayXd GridSpec::abscissae() const { return Eigen::ArrayXd::LinSpaced(points, min, max); }

std::string GridSpec::to_string() const {
  std::ostringstream s;
  s.precision(17);
  s << min << ':' << max << ':' << points;
  return s.str();
}

double ClusterTerm::density(double x) const {
  const Eigen::Index count = path_probs.size();
  if (x <= 0.0 || count == 0) return 0.0;
  const double theta = omega / m;
  const double log_ratio = std::log(x / theta);
  const double p_max = path_probs.maxCoeff();
  // As a function of the shape the Gamma density at x peaks near shape = x/theta + 1/2
  // and decays faster than geometrically on both sides; walk outwards from there.
  const double peak_shape = x / theta + 0.5;
  const auto start = static_cast<Eigen::Index>(
      std::clamp(std::floor(peak_shape / m) - 1.0, 0.0, static_cast<double>(count - 1)));
  const double g_start =
      std::exp((start + 1) * m * log_ratio - x / theta - std::log(x) - log_gamma_shapes[start]);
  // g_{i+1} = g_i * (x/theta)^m * Gamma(i m + m) / Gamma(i m + 2m)
  const double step = std::exp(m * log_ratio);
  CompensatedSum s;
  double g = g_start;
  for (Eigen::Index i = start; i < count; ++i) {
    if (i > start) g *= step * gamma_steps[i - 1];
    s += path_probs[i] * g;
    if ((i + 1) * m > peak_shape && g * p_max <= 1e-18 * s.value()) break;
  }
  g = g_start;
  for (Eigen::Index i = start - 1; i >= 0; --i) {
    g /= step * gamma_steps[i];
    s += path_probs[i] * g;
    if (g * p_max <= 1e-18 * s.value()) break;
  }
  return s.value();
}

double ClusterTerm::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  const double theta = omega / m;
  const double center = x / theta;
  const double margin = 15.0 * std::sqrt(center) + 40.0;
  CompensatedSum s;
  for (Eigen::Index i = 0; i < path_probs.size(); ++i) {
    const double shape = static_cast<double>(i + 1) * m;
    if (shape > center + margin) break;  // remaining CDF values below 1e-40
    if (path_probs[i] <= 0.0) continue;
    s += shape < center - margin ? path_probs[i] : path_probs[i] * gamma_cdf(x, shape, theta);
  }
  return s.value();
}

double ClusterTerm::mean() const {
  const Eigen::ArrayXd n = Eigen::ArrayXd::LinSpaced(path_probs.size(), 1.0, static_cast<double>(path_probs.size()));
  return omega * (n * path_probs).sum();
}

double ClusterTerm::second_moment() const {
  // Gamma(n m, omega/m): E[x^2] = n^2 omega^2 + n omega^2 / m
  const Eigen::ArrayXd n = Eigen::ArrayXd::LinSpaced(path_probs.size(), 1.0, static_cast<double>(path_probs.size()));
  return omega * omega * ((n.square() + n / m) * path_probs).sum();
}

ClusterTerm cluster_term(long L, ChipTime tc, EnvClass env, const ChannelParams &params,
                         const AnalysisOptions &options) {
  ClusterTerm t;
  t.L = L;
  t.m = params.analytic_m;
  const auto pdp = mean_pdp_detailed(L, tc, params);
  t.mean_pdp = pdp.value;
  t.quadrature_error = pdp.abs_error;
  if (options.scale == PowerScale::unit_energy) {
    // expected analytic energy of an L-cluster realization seen from t = 0
    t.scale = 1.0 / (mean_paths_given_k_L(0, L, params) * mean_pdp(L, ChipTime(0.0), params));
  }
  t.omega = t.mean_pdp * t.scale;

  t.zero_mass = prob_zero_paths(L, tc, env, params);
  const double leg = full_power_leg_mass(tc, env, params);
  std::vector<double> probs;
  CompensatedSum total;
  total += t.zero_mass;
  total += leg;
  for (long n = 1; n <= options.max_paths && total.value() < 1.0 - options.path_tail; ++n) {
    probs.push_back(prob_paths_given_L(n, L, tc, env, params));
    total += probs.back();
  }
  t.path_probs = Eigen::Map<Eigen::ArrayXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  t.path_tail = std::max(0.0, 1.0 - total.value());
  t.log_gamma_shapes.resize(t.path_probs.size());
  for (Eigen::Index i = 0; i < t.path_probs.size(); ++i) t.log_gamma_shapes[i] = std::lgamma((i + 1) * t.m);
  const Eigen::Index steps = std::max<Eigen::Index>(t.path_probs.size() - 1, 0);
  t.gamma_steps = (t.log_gamma_shapes.head(steps) - t.log_gamma_shapes.segment(1, steps)).exp();
  return t;
}

double interference_pdf_given_L(double x, long L, ChipTime tc, EnvClass env, const ChannelParams &params,
                                const AnalysisOptions &options) {
  return cluster_term(L, tc, env, params, options).density(x);
}

double MixedDistribution::continuous_mass() const {
  CompensatedSum s;
  for (const auto &t : terms) s += t.weight * t.continuous_mass();
  return s.value();
}

double MixedDistribution::density(double x) const {
  CompensatedSum s;
  for (const auto &t : terms) s += t.weight * t.density(x);
  return s.value();
}

double MixedDistribution::cdf(double x) const {
  if (x < 0.0) return 0.0;
  CompensatedSum s;
  s += mass_at_zero;
  for (const auto &t : terms) s += t.weight * t.cdf(x);
  if (x >= full_power_level) s += full_power_mass;
  return s.value();
}

double MixedDistribution::grid_integral() const {
  if (grid.size() < 2) return 0.0;
  const Eigen::Index n = grid.size();
  const Eigen::ArrayXd dx = grid.tail(n - 1) - grid.head(n - 1);
  return (0.5 * dx * (density_values.tail(n - 1) + density_values.head(n - 1))).sum();
}

Eigen::ArrayXd MixedDistribution::grid_cumulative() const {
  Eigen::ArrayXd out(grid.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (i > 0) acc += 0.5 * (grid[i] - grid[i - 1]) * (density_values[i] + density_values[i - 1]);
    double v = acc;
    if (grid[i] >= 0.0) v += mass_at_zero;
    if (grid[i] >= full_power_level) v += full_power_mass;
    out[i] = v;
  }
  return out;
}

MixedDistribution interference_distribution(ChipTime tc, EnvClass env, const ChannelParams &params,
                                            const AnalysisOptions &options) {
  params.validate();
  MixedDistribution d;
  d.env = env;
  d.tc_ns = tc.ns();
  d.m = params.analytic_m;
  d.scale = options.scale;

  const double lbar = params.mean_clusters;
  d.cluster_conditioning_mass = -std::expm1(-lbar);
  d.full_power_mass = full_power_leg_mass(tc, env, params);

  CompensatedSum enumerated, zero, first, second, path_tail;
  double full_power_level = 0.0;
  for (long L = 1; L <= 100000; ++L) {
    const double weight = poisson_pmf(L, lbar) / d.cluster_conditioning_mass;
    ClusterTerm t = cluster_term(L, tc, env, params, options);
    t.weight = weight;
    enumerated += weight;
    zero += weight * t.zero_mass;
    first += weight * t.mean();
    second += weight * t.second_moment();
    path_tail += weight * t.path_tail;
    d.max_quadrature_error = std::max(d.max_quadrature_error, t.quadrature_error * t.scale);
    if (options.scale == PowerScale::absolute)
      full_power_level += weight * mean_paths_given_k_L(0, L, params) * mean_pdp(L, ChipTime(0.0), params);
    d.terms.push_back(std::move(t));
    // remaining conditioned Poisson mass; stop once below the tolerance and past the mode
    if (static_cast<double>(L) > lbar && 1.0 - enumerated.value() < options.cluster_tail) break;
  }
  d.cluster_tail_mass = std::max(0.0, 1.0 - enumerated.value());
  d.mass_at_zero = zero.value();
  d.path_tail_mass = path_tail.value();
  d.full_power_level = options.scale == PowerScale::unit_energy ? 1.0 : full_power_level / enumerated.value();

  d.mean = first.value() + d.full_power_mass * d.full_power_level;
  const double m2 = second.value() + d.full_power_mass * d.full_power_level * d.full_power_level;
  d.variance = m2 - d.mean * d.mean;

  if (options.evaluate_density) evaluate_on_grid(d, auto_grid(d));
  return d;
}

MixedDistribution interference_distribution(ChipTime tc, EnvClass env, const ChannelParams &params,
                                            const GridSpec &grid, const AnalysisOptions &options) {
  AnalysisOptions moments_only = options;
  moments_only.evaluate_density = false;
  MixedDistribution d = interference_distribution(tc, env, params, moments_only);
  evaluate_on_grid(d, grid);
  return d;
}

GridSpec auto_grid(const MixedDistribution &d, long points) {
  // past full power, extend until the continuous tail is negligible
  const double target = 1e-8;
  const double mass = d.continuous_mass();
  double upper = std::max(1.0, d.full_power_level);
  auto tail = [&](double x) {
    CompensatedSum s;
    for (const auto &t : d.terms) s += t.weight * t.cdf(x);
    return mass - s.value();
  };
  while (tail(upper) > target && upper < 1e6) upper *= 1.25;
  // resolve the narrowest Gamma component (standard deviation sqrt(n m) omega / m)
  // among those carrying noticeable mass
  double narrow = upper;
  for (const auto &t : d.terms)
    for (Eigen::Index i = 0; i < t.path_probs.size(); ++i)
      if (t.weight * t.path_probs[i] > 1e-7) {
        narrow = std::min(narrow, std::sqrt((i + 1) * t.m) * t.omega / t.m);
        break;
      }
  const double needed = std::ceil(upper / (0.25 * narrow)) + 1.0;
  return GridSpec{0.0, upper, std::max(points, static_cast<long>(std::min(needed, 100001.0)))};
}

void evaluate_on_grid(MixedDistribution &d, const GridSpec &grid) {
  d.grid = grid.abscissae();
  d.density_values = d.grid.unaryExpr([&](double x) { return d.density(x); });
}

}  // namespace uwbisi
