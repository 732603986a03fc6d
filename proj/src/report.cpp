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

#include "uwbisi/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uwbisi/error.hpp"
#include "uwbisi/numerics.hpp"

namespace uwbisi {

namespace {

// Linear-interpolated quantile of sorted data (type 7).
double quantile(const std::vector<double> &sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (pos - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

double continuous_cdf(const MixedDistribution &d, double x) {
  CompensatedSum s;
  for (const auto &t : d.terms) s += t.weight * t.cdf(x);
  return s.value();
}

}  // namespace

Histogram freedman_diaconis(std::span<const double> samples, std::size_t max_bins) {
  if (samples.empty()) fail(ErrorKind::domain, "cannot bin an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  const double n = static_cast<double>(sorted.size());

  Histogram h;
  std::size_t bins = 1;
  if (hi > lo) {
    double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    h.rule = "freedman-diaconis";
    if (iqr <= 0.0) {
      const auto first_positive = std::upper_bound(sorted.begin(), sorted.end(), lo);
      std::vector<double> rest(first_positive, sorted.end());
      if (rest.size() >= 4) iqr = quantile(rest, 0.75) - quantile(rest, 0.25);
      h.rule = "freedman-diaconis (spread of samples above the minimum)";
    }
    if (iqr > 0.0) {
      const double width = 2.0 * iqr / std::cbrt(n);
      bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    } else {
      bins = static_cast<std::size_t>(std::ceil(std::log2(n))) + 1;
      h.rule = "sturges";
    }
    bins = std::clamp<std::size_t>(bins, 1, max_bins);
  } else {
    h.rule = "single bin (constant sample)";
  }

  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] = hi > lo ? lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins) : lo;
  if (hi == lo) h.edges[1] = lo + 1.0;  // degenerate sample: one unit-wide bin starting at the value
  if (hi > lo) h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : sorted) {
    auto it = std::upper_bound(h.edges.begin(), h.edges.end(), v);
    auto idx = static_cast<std::size_t>(std::distance(h.edges.begin(), it));
    idx = idx == 0 ? 0 : std::min(idx - 1, bins - 1);
    ++h.counts[idx];
  }
  return h;
}

std::vector<double> bin_probabilities(const MixedDistribution &d, const std::vector<double> &edges) {
  const std::size_t bins = edges.size() < 2 ? 0 : edges.size() - 1;
  std::vector<double> cont(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) cont[i] = continuous_cdf(d, edges[i]);
  // P(X < x) and P(X <= x) differ only by the atoms sitting exactly at x
  auto below = [&](std::size_t i) {
    const double x = edges[i];
    return cont[i] + (x > 0.0 ? d.mass_at_zero : 0.0) + (x > d.full_power_level ? d.full_power_mass : 0.0);
  };
  auto at_or_below = [&](std::size_t i) {
    const double x = edges[i];
    return cont[i] + (x >= 0.0 ? d.mass_at_zero : 0.0) + (x >= d.full_power_level ? d.full_power_mass : 0.0);
  };
  std::vector<double> out(bins);
  for (std::size_t i = 0; i < bins; ++i)
    out[i] = (i + 1 == bins ? at_or_below(i + 1) : below(i + 1)) - below(i);
  return out;
}

double histogram_total_variation(const MixedDistribution &d, const Histogram &h) {
  const auto p = bin_probabilities(d, h.edges);
  long total = 0;
  for (long c : h.counts) total += c;
  CompensatedSum l1, inside;
  for (std::size_t i = 0; i < p.size(); ++i) {
    l1 += std::abs(p[i] - static_cast<double>(h.counts[i]) / static_cast<double>(total));
    inside += p[i];
  }
  return 0.5 * (l1.value() + std::max(0.0, 1.0 - inside.value()));
}

bool ComparisonReport::bounds_hold() const {
  return std::all_of(moment_table.begin(), moment_table.end(), [](const MomentRow &r) { return r.analytic_bounds; });
}

ComparisonReport compare_moments(const MixedDistribution &d, const McEstimate &mc, const Histogram &h) {
  ComparisonReport r;
  r.tc_ns = d.tc_ns;
  r.env_class = to_string(d.env);
  r.runs = mc.runs;
  r.seed = mc.seed;
  r.power_scale = to_string(d.scale);
  r.analytic_m = d.m;
  r.moment_table.push_back({"mean", d.mean, mc.mean, mc.standard_error, d.mean >= mc.mean});
  r.moment_table.push_back({"variance", d.variance, mc.variance, mc.variance_standard_error, d.variance >= mc.variance});
  r.mean_ratio = mc.mean > 0.0 ? d.mean / mc.mean : std::numeric_limits<double>::quiet_NaN();
  r.mass_at_zero_analytic = d.mass_at_zero;
  r.full_power_mass_analytic = d.full_power_mass;
  long zeros = 0, full = 0;
  for (double v : mc.samples) {
    zeros += v == 0.0;
    full += v >= 1.0 - 1e-12;
  }
  r.mass_at_zero_empirical = static_cast<double>(zeros) / static_cast<double>(mc.runs);
  r.full_power_mass_empirical = static_cast<double>(full) / static_cast<double>(mc.runs);
  r.histogram_bins = h.bins();
  r.histogram_rule = h.rule;
  r.tv_distance = histogram_total_variation(d, h);
  r.cluster_tail_mass = d.cluster_tail_mass;
  r.path_tail_mass = d.path_tail_mass;
  r.cluster_terms = static_cast<long>(d.terms.size());
  r.cluster_conditioning_mass = d.cluster_conditioning_mass;
  r.max_quadrature_error = d.max_quadrature_error;
  return r;
}

nlohmann::ordered_json to_json(const ComparisonReport &r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["config"] = {{"cm", r.cm},
                 {"env_class", r.env_class},
                 {"tc_ns", r.tc_ns},
                 {"runs", r.runs},
                 {"seed", r.seed},
                 {"oracle_mode", r.oracle_mode},
                 {"power_scale", r.power_scale},
                 {"analytic_m", r.analytic_m},
                 {"mean_nakagami_m", r.mean_nakagami_m},
                 {"ray_rate_fitted_per_ns", r.ray_rate_fitted}};
  ordered_json rows = ordered_json::array();
  ordered_json flags = ordered_json::object();
  for (const auto &m : r.moment_table) {
    rows.push_back({{"statistic", m.statistic},
                    {"analytic", m.analytic},
                    {"empirical", m.empirical},
                    {"standard_error", m.standard_error},
                    {"analytic_ge_empirical", m.analytic_bounds}});
    flags[m.statistic] = m.analytic_bounds;
  }
  j["moment_table"] = rows;
  j["bound_flags"] = flags;
  j["mean_ratio"] = std::isfinite(r.mean_ratio) ? ordered_json(r.mean_ratio) : ordered_json(nullptr);
  j["point_masses"] = {{"zero_analytic", r.mass_at_zero_analytic},
                       {"zero_empirical", r.mass_at_zero_empirical},
                       {"full_power_analytic", r.full_power_mass_analytic},
                       {"full_power_empirical", r.full_power_mass_empirical}};
  j["histogram"] = {{"rule", r.histogram_rule}, {"bins", r.histogram_bins}, {"tv_distance", r.tv_distance}};
  if (r.path_count) {
    const auto &p = *r.path_count;
    j["path_count"] = {{"clusters", p.clusters},
                       {"runs", p.runs},
                       {"tv_distance", p.tv_distance},
                       {"acceptance_rate", p.acceptance_rate},
                       {"analytic_tail_mass", p.analytic_tail_mass}};
  } else {
    j["path_count"] = nullptr;
  }
  j["truncation"] = {{"cluster_tail_mass", r.cluster_tail_mass},
                     {"path_tail_mass", r.path_tail_mass},
                     {"cluster_terms", r.cluster_terms},
                     {"cluster_conditioning_mass", r.cluster_conditioning_mass},
                     {"max_quadrature_error", r.max_quadrature_error}};
  return j;
}

ComparisonReport report_from_json(const nlohmann::ordered_json &j) {
  ComparisonReport r;
  const auto &c = j.at("config");
  c.at("cm").get_to(r.cm);
  c.at("env_class").get_to(r.env_class);
  c.at("tc_ns").get_to(r.tc_ns);
  c.at("runs").get_to(r.runs);
  c.at("seed").get_to(r.seed);
  c.at("oracle_mode").get_to(r.oracle_mode);
  c.at("power_scale").get_to(r.power_scale);
  c.at("analytic_m").get_to(r.analytic_m);
  c.at("mean_nakagami_m").get_to(r.mean_nakagami_m);
  c.at("ray_rate_fitted_per_ns").get_to(r.ray_rate_fitted);
  for (const auto &row : j.at("moment_table")) {
    MomentRow m;
    row.at("statistic").get_to(m.statistic);
    row.at("analytic").get_to(m.analytic);
    row.at("empirical").get_to(m.empirical);
    row.at("standard_error").get_to(m.standard_error);
    row.at("analytic_ge_empirical").get_to(m.analytic_bounds);
    r.moment_table.push_back(m);
  }
  r.mean_ratio = j.at("mean_ratio").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                               : j.at("mean_ratio").get<double>();
  const auto &pm = j.at("point_masses");
  pm.at("zero_analytic").get_to(r.mass_at_zero_analytic);
  pm.at("zero_empirical").get_to(r.mass_at_zero_empirical);
  pm.at("full_power_analytic").get_to(r.full_power_mass_analytic);
  pm.at("full_power_empirical").get_to(r.full_power_mass_empirical);
  const auto &h = j.at("histogram");
  h.at("rule").get_to(r.histogram_rule);
  h.at("bins").get_to(r.histogram_bins);
  h.at("tv_distance").get_to(r.tv_distance);
  if (!j.at("path_count").is_null()) {
    const auto &p = j.at("path_count");
    PathCountReport pc;
    p.at("clusters").get_to(pc.clusters);
    p.at("runs").get_to(pc.runs);
    p.at("tv_distance").get_to(pc.tv_distance);
    p.at("acceptance_rate").get_to(pc.acceptance_rate);
    p.at("analytic_tail_mass").get_to(pc.analytic_tail_mass);
    r.path_count = pc;
  }
  const auto &t = j.at("truncation");
  t.at("cluster_tail_mass").get_to(r.cluster_tail_mass);
  t.at("path_tail_mass").get_to(r.path_tail_mass);
  t.at("cluster_terms").get_to(r.cluster_terms);
  t.at("cluster_conditioning_mass").get_to(r.cluster_conditioning_mass);
  t.at("max_quadrature_error").get_to(r.max_quadrature_error);
  return r;
}

}  // namespace uwbisi
