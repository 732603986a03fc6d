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

#include "commands.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "uwbisi/error.hpp"
#include "uwbisi/path_count.hpp"

#ifndef UWBISI_DEFAULT_PARAMS
#define UWBISI_DEFAULT_PARAMS "data/ieee802154a.params"
#endif

namespace uwbisi::cli {

namespace {

using nlohmann::ordered_json;

std::ofstream open_output(const std::filesystem::path &dir, const std::string &name) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) fail(ErrorKind::validation, "cannot write " + (dir / name).string());
  return f;
}

void write_json(const std::filesystem::path &dir, const std::string &name, const ordered_json &j) {
  auto f = open_output(dir, name);
  f << j.dump(2) << '\n';
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json params_json(const ChannelParams &p, const std::filesystem::path &path) {
  return {{"params_file", path.string()},
          {"cm", p.name},
          {"env_class", to_string(p.env_class)},
          {"first_cluster_rate_per_ns", p.lambda0},
          {"cluster_rate_per_ns", p.cluster_rate},
          {"ray_rate_1_per_ns", p.ray_rate_1},
          {"ray_rate_2_per_ns", p.ray_rate_2},
          {"ray_mix_beta", p.mix_beta},
          {"ray_rate_fitted_per_ns", p.ray_rate_fitted},
          {"mean_cluster_count", p.mean_clusters},
          {"pdp_decay_ns", p.intra_decay},
          {"analytic_nakagami_m", p.analytic_m},
          {"mean_nakagami_m", mean_nakagami_m(p.nakagami_m0, p.nakagami_m0_hat)}};
}

ordered_json distribution_json(const MixedDistribution &d) {
  ordered_json terms = ordered_json::array();
  for (const auto &t : d.terms) {
    const Eigen::ArrayXd n = Eigen::ArrayXd::LinSpaced(t.path_probs.size(), 1.0, static_cast<double>(t.path_probs.size()));
    terms.push_back({{"clusters", t.L},
                     {"weight", t.weight},
                     {"mean_pdp", t.mean_pdp},
                     {"power_scale", t.scale},
                     {"path_power", t.omega},
                     {"mass_at_zero", t.zero_mass},
                     {"mean_interfering_paths", (n * t.path_probs).sum()},
                     {"path_tail_mass", t.path_tail},
                     {"quadrature_error", t.quadrature_error}});
  }
  ordered_json j;
  j["mean"] = d.mean;
  j["variance"] = d.variance;
  j["mass_at_zero"] = d.mass_at_zero;
  j["full_power_mass"] = d.full_power_mass;
  j["full_power_level"] = d.full_power_level;
  j["continuous_mass"] = d.continuous_mass();
  if (d.grid.size() > 1) {
    j["grid"] = {{"min", d.grid[0]}, {"max", d.grid[d.grid.size() - 1]}, {"points", d.grid.size()}};
    j["grid_integral"] = d.grid_integral();
    j["grid_normalization"] = d.grid_integral() + d.mass_at_zero + d.full_power_mass;
  }
  j["truncation"] = {{"cluster_conditioning_mass", d.cluster_conditioning_mass},
                     {"cluster_tail_mass", d.cluster_tail_mass},
                     {"path_tail_mass", d.path_tail_mass},
                     {"max_quadrature_error", d.max_quadrature_error}};
  j["cluster_terms"] = terms;
  return j;
}

void write_histogram(const std::filesystem::path &dir, const Histogram &h) {
  auto f = open_output(dir, "histogram.csv");
  f << "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < h.bins(); ++i)
    f << format_number(h.edges[i]) << ',' << format_number(h.edges[i + 1]) << ',' << h.counts[i] << '\n';
}

ChannelParams load(const CommonConfig &c) { return load_params(c.params, c.cm); }

std::vector<double> parse_triplet(const std::string &text, const std::string &what) {
  std::vector<double> v;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(':', start);
    const std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
    if (ec != std::errc() || ptr != part.data() + part.size())
      fail(ErrorKind::validation, what + " must look like min:max:step, got \"" + text + "\"");
    v.push_back(x);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (v.size() != 3) fail(ErrorKind::validation, what + " must look like min:max:step, got \"" + text + "\"");
  return v;
}

}  // namespace

std::filesystem::path default_params_path() { return UWBISI_DEFAULT_PARAMS; }

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

AnalyzeResult cmd_analyze(const AnalyzeConfig &config) {
  AnalyzeResult r{load(config), {}};
  const ChipTime tc(config.tc);
  AnalysisOptions options;
  options.scale = config.scale;
  r.distribution = config.grid ? interference_distribution(tc, r.params.env_class, r.params, *config.grid, options)
                               : interference_distribution(tc, r.params.env_class, r.params, options);
  if (config.out.empty()) return r;

  const auto &d = r.distribution;
  const Eigen::ArrayXd cumulative = d.grid_cumulative();
  auto f = open_output(config.out, "density.csv");
  f << "x,density,cumulative\n";
  for (Eigen::Index i = 0; i < d.grid.size(); ++i)
    f << format_number(d.grid[i]) << ',' << format_number(d.density_values[i]) << ',' << format_number(cumulative[i])
      << '\n';

  ordered_json j;
  j["command"] = "analyze";
  j["config"] = params_json(r.params, config.params);
  j["config"]["tc_ns"] = config.tc;
  j["config"]["power_scale"] = to_string(config.scale);
  j["distribution"] = distribution_json(d);
  write_json(config.out, "analysis.json", j);
  return r;
}

SimulateResult cmd_simulate(const SimulateConfig &config) {
  SimulateResult r{load(config), {}, {}};
  McOptions options{config.oracle, config.threads};
  r.estimate = mc_interference(r.params, ChipTime(config.tc), config.runs, config.seed, options);
  r.histogram = freedman_diaconis(r.estimate.samples);
  if (config.out.empty()) return r;

  auto f = open_output(config.out, "samples.csv");
  f << "run_index,interference_power\n";
  for (std::size_t i = 0; i < r.estimate.samples.size(); ++i) f << i << ',' << format_number(r.estimate.samples[i]) << '\n';
  write_histogram(config.out, r.histogram);

  ordered_json j;
  j["command"] = "simulate";
  j["config"] = params_json(r.params, config.params);
  j["config"]["tc_ns"] = config.tc;
  j["config"]["runs"] = config.runs;
  j["config"]["seed"] = config.seed;
  j["config"]["oracle_mode"] = to_string(config.oracle);
  j["mean"] = r.estimate.mean;
  j["variance"] = r.estimate.variance;
  j["standard_error"] = r.estimate.standard_error;
  j["variance_standard_error"] = r.estimate.variance_standard_error;
  j["histogram"] = {{"rule", r.histogram.rule}, {"bins", r.histogram.bins()}};
  write_json(config.out, "simulation.json", j);
  return r;
}

CompareResult cmd_compare(const CompareConfig &config) {
  const ChannelParams params = load(config);
  const ChipTime tc(config.tc);
  AnalysisOptions options;
  options.scale = config.scale;

  CompareResult r;
  r.distribution = config.grid ? interference_distribution(tc, params.env_class, params, *config.grid, options)
                               : interference_distribution(tc, params.env_class, params, options);
  McOptions mc_options{config.oracle, config.threads};
  const McEstimate mc = mc_interference(params, tc, config.runs, config.seed, mc_options);
  r.histogram = freedman_diaconis(mc.samples);
  r.report = compare_moments(r.distribution, mc, r.histogram);
  r.report.cm = params.name;
  r.report.oracle_mode = to_string(config.oracle);
  r.report.mean_nakagami_m = mean_nakagami_m(params.nakagami_m0, params.nakagami_m0_hat);
  r.report.ray_rate_fitted = params.ray_rate_fitted;

  if (config.path_clusters > 0) {
    const Condition cond{ConditionKind::cluster_count, config.path_clusters, false};
    const auto cmc = mc_conditional(params, tc, cond, config.path_runs, config.seed, mc_options);
    const DiscretePmf analytic = paths_given_L_pmf(config.path_clusters, tc, params.env_class, params);
    PathCountReport pc;
    pc.clusters = config.path_clusters;
    pc.runs = config.path_runs;
    pc.tv_distance = total_variation(analytic, cmc.path_pmf);
    pc.acceptance_rate = cmc.acceptance_rate;
    pc.analytic_tail_mass = analytic.tail_mass;
    r.report.path_count = pc;
  }
  if (config.out.empty()) return r;

  write_json(config.out, "report.json", to_json(r.report));
  const auto probs = bin_probabilities(r.distribution, r.histogram.edges);
  auto f = open_output(config.out, "comparison.csv");
  f << "bin_left,bin_right,empirical,analytic\n";
  for (std::size_t i = 0; i < r.histogram.bins(); ++i)
    f << format_number(r.histogram.edges[i]) << ',' << format_number(r.histogram.edges[i + 1]) << ','
      << format_number(static_cast<double>(r.histogram.counts[i]) / static_cast<double>(mc.runs)) << ','
      << format_number(probs[i]) << '\n';
  return r;
}

void SweepConfig::set_range(const std::string &text) {
  const auto v = parse_triplet(text, "--tc-range");
  tc_min = v[0];
  tc_max = v[1];
  tc_step = v[2];
}

SweepResult cmd_sweep(const SweepConfig &config) {
  if (!(config.tc_step > 0.0) || !(config.tc_max >= config.tc_min) || !(config.tc_min >= 0.0))
    fail(ErrorKind::validation, "tc range must be non-empty and ascending with a positive step");
  const ChannelParams params = load(config);
  AnalysisOptions options;
  options.scale = config.scale;
  options.evaluate_density = false;

  SweepResult r;
  const auto steps = static_cast<long>(std::floor((config.tc_max - config.tc_min) / config.tc_step + 1e-9));
  for (long i = 0; i <= steps; ++i) {
    const double tc = config.tc_min + static_cast<double>(i) * config.tc_step;
    const auto d = interference_distribution(ChipTime(tc), params.env_class, params, options);
    r.rows.push_back({tc, d.mean, d.variance, d.mass_at_zero});
    if (!r.selected_tc && d.mean <= config.target) r.selected_tc = tc;
  }
  if (config.out.empty()) return r;

  auto f = open_output(config.out, "sweep.csv");
  f << "tc_ns,mean,variance,mass_at_zero\n";
  for (const auto &row : r.rows)
    f << format_number(row.tc) << ',' << format_number(row.mean) << ',' << format_number(row.variance) << ','
      << format_number(row.mass_at_zero) << '\n';
  ordered_json j;
  j["command"] = "sweep";
  j["config"] = params_json(params, config.params);
  j["config"]["tc_range"] = {config.tc_min, config.tc_max, config.tc_step};
  j["config"]["target_mean_power"] = config.target;
  j["attainable"] = r.selected_tc.has_value();
  j["selected_tc_ns"] = r.selected_tc ? number_or_null(*r.selected_tc) : ordered_json(nullptr);
  write_json(config.out, "sweep.json", j);
  return r;
}

int run(int argc, char **argv) {
  CLI::App app{"Interference-power statistics of IR-UWB links under clustered multipath"};
  app.require_subcommand(1);

  std::string params_path = default_params_path().string();
  std::string cm = "cm1";
  std::string out = ".";
  app.add_option("--params", params_path, "parameter document")->capture_default_str();

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--params", params_path, "parameter document")->capture_default_str();
    sub->add_option("--cm", cm, "parameter block (cm1..cm4)")->capture_default_str();
    sub->add_option("--out", out, "output directory")->capture_default_str();
  };

  double tc = 50.0;
  long runs = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string grid_text, oracle_text = "simplified", scale_text = "unit_energy";
  bool strict = false;
  long path_clusters = 5, path_runs = 20000;
  std::string range_text = "10:100:5";
  double target = 0.05;

  auto *analyze = app.add_subcommand("analyze", "analytic interference-power law");
  add_common(analyze);
  analyze->add_option("--tc", tc, "chip time in ns")->capture_default_str();
  analyze->add_option("--grid", grid_text, "density grid min:max:points (default: automatic)");
  analyze->add_option("--power-scale", scale_text, "unit_energy or absolute")->capture_default_str();

  auto *simulate = app.add_subcommand("simulate", "Monte-Carlo interference power");
  add_common(simulate);
  simulate->add_option("--tc", tc, "chip time in ns")->capture_default_str();
  simulate->add_option("--runs", runs, "realizations")->capture_default_str();
  simulate->add_option("--seed", seed, "random seed")->capture_default_str();
  simulate->add_option("--threads", threads, "worker threads")->capture_default_str();
  simulate->add_option("--oracle", oracle_text, "simplified or full")->capture_default_str();

  auto *compare = app.add_subcommand("compare", "analytic vs Monte-Carlo report");
  add_common(compare);
  compare->add_option("--tc", tc, "chip time in ns")->capture_default_str();
  compare->add_option("--runs", runs, "realizations")->capture_default_str();
  compare->add_option("--seed", seed, "random seed")->capture_default_str();
  compare->add_option("--threads", threads, "worker threads")->capture_default_str();
  compare->add_option("--oracle", oracle_text, "simplified or full")->capture_default_str();
  compare->add_option("--grid", grid_text, "density grid min:max:points (default: automatic)");
  compare->add_option("--power-scale", scale_text, "unit_energy or absolute")->capture_default_str();
  compare->add_option("--path-clusters", path_clusters, "cluster count of the path-count sub-report, 0 = off")
      ->capture_default_str();
  compare->add_option("--path-runs", path_runs, "conditioned realizations for the sub-report")->capture_default_str();
  compare->add_flag("--strict", strict, "exit 4 when an analytic moment falls below the empirical one");

  auto *sweep = app.add_subcommand("sweep", "smallest chip time meeting a mean-interference target");
  add_common(sweep);
  sweep->add_option("--tc-range", range_text, "min:max:step in ns")->capture_default_str();
  sweep->add_option("--target", target, "target mean interference power")->capture_default_str();
  sweep->add_option("--power-scale", scale_text, "unit_energy or absolute")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_validation;
  }

  try {
    const std::optional<GridSpec> grid = grid_text.empty() ? std::nullopt : std::optional(GridSpec::parse(grid_text));
    const PowerScale scale = power_scale_from_string(scale_text);
    const OracleMode oracle = oracle_mode_from_string(oracle_text);
    if (runs < 1) fail(ErrorKind::validation, "--runs must be at least 1");
    if (threads < 1) fail(ErrorKind::validation, "--threads must be at least 1");

    if (analyze->parsed()) {
      AnalyzeConfig c;
      c.params = params_path, c.cm = cm, c.out = out, c.tc = tc, c.grid = grid, c.scale = scale;
      const auto r = cmd_analyze(c);
      std::cout << "mean " << format_number(r.distribution.mean) << "\nvariance "
                << format_number(r.distribution.variance) << "\nmass_at_zero "
                << format_number(r.distribution.mass_at_zero) << '\n';
    } else if (simulate->parsed()) {
      SimulateConfig c;
      c.params = params_path, c.cm = cm, c.out = out, c.tc = tc, c.runs = runs, c.seed = seed, c.threads = threads;
      c.oracle = oracle;
      const auto r = cmd_simulate(c);
      std::cout << "mean " << format_number(r.estimate.mean) << "\nvariance " << format_number(r.estimate.variance)
                << '\n';
    } else if (compare->parsed()) {
      CompareConfig c;
      c.params = params_path, c.cm = cm, c.out = out, c.tc = tc, c.runs = runs, c.seed = seed, c.threads = threads;
      c.oracle = oracle, c.grid = grid, c.scale = scale, c.path_clusters = path_clusters, c.path_runs = path_runs;
      const auto r = cmd_compare(c);
      for (const auto &row : r.report.moment_table)
        std::cout << row.statistic << " analytic " << format_number(row.analytic) << " empirical "
                  << format_number(row.empirical) << (row.analytic_bounds ? " bound ok" : " BOUND VIOLATED") << '\n';
      std::cout << "tv_distance " << format_number(r.report.tv_distance) << '\n';
      if (strict && !r.report.bounds_hold()) return exit_bound_violation;
    } else if (sweep->parsed()) {
      SweepConfig c;
      c.params = params_path, c.cm = cm, c.out = out, c.target = target, c.scale = scale;
      c.set_range(range_text);
      const auto r = cmd_sweep(c);
      if (!r.selected_tc) {
        std::cerr << "target mean power " << format_number(target) << " not reached for tc in [" << c.tc_min << ", "
                  << c.tc_max << "] ns\n";
        return exit_unattainable;
      }
      std::cout << "selected_tc_ns " << format_number(*r.selected_tc) << '\n';
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::numerical:
        return exit_numerical;
      default:
        return exit_validation;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  }
  return exit_ok;
}

}  // namespace uwbisi::cli
