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

#include "uwbisi/params.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "uwbisi/error.hpp"
#include "uwbisi/numerics.hpp"

namespace uwbisi {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

constexpr std::array<const char *, 5> kOracleKeys = {"inter_cluster_decay_ns", "intra_decay_intercept_ns",
                                                     "intra_decay_slope", "cluster_shadowing_db",
                                                     "ray_shadowing_db"};

class BlockReader {
public:
  BlockReader(const std::map<std::string, std::string> &kv, std::string block) : kv_(kv), block_(std::move(block)) {}

  bool has(const std::string &key) const { return kv_.count(key) != 0; }

  const std::string &text(const std::string &key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) fail(ErrorKind::load, "block [" + block_ + "] is missing key \"" + key + "\"");
    return it->second;
  }

  double number(const std::string &key) const {
    const auto &s = text(key);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      fail(ErrorKind::load, "block [" + block_ + "] key \"" + key + "\": not a number: '" + s + "'");
    return v;
  }

private:
  const std::map<std::string, std::string> &kv_;
  std::string block_;
};

void require_positive(double v, const char *field) {
  if (!(v > 0.0) || !std::isfinite(v))
    fail(ErrorKind::validation, std::string(field) + " must be strictly positive and finite, got " + format_double(v));
}

}  // namespace

std::string to_string(EnvClass env) { return env == EnvClass::los ? "LOS" : "NLOS"; }

void ChannelParams::validate() const {
  require_positive(lambda0, "lambda0");
  require_positive(cluster_rate, "cluster_rate");
  require_positive(ray_rate_1, "ray_rate_1");
  require_positive(ray_rate_2, "ray_rate_2");
  require_positive(mean_clusters, "mean_clusters");
  require_positive(intra_decay, "intra_decay");
  if (!(mix_beta >= 0.0 && mix_beta <= 1.0))
    fail(ErrorKind::validation, "mix_beta must lie in [0, 1], got " + format_double(mix_beta));
  if (!(nakagami_m0_hat >= 0.0) || !std::isfinite(nakagami_m0) || !std::isfinite(nakagami_m0_hat))
    fail(ErrorKind::validation, "nakagami_m0_hat must be non-negative and both m0 parameters finite");
  if (!(analytic_m >= 0.5) || !std::isfinite(analytic_m))
    fail(ErrorKind::validation, "analytic_m must be >= 0.5, got " + format_double(analytic_m));
  const double lo = std::min(ray_rate_1, ray_rate_2);
  const double hi = std::max(ray_rate_1, ray_rate_2);
  if (!(ray_rate_fitted >= lo && ray_rate_fitted <= hi))
    fail(ErrorKind::validation, "ray_rate_fitted " + format_double(ray_rate_fitted) + " outside [" +
                                    format_double(lo) + ", " + format_double(hi) + "]");
  if (oracle_extras) {
    require_positive(oracle_extras->inter_cluster_decay_ns, "inter_cluster_decay_ns");
    require_positive(oracle_extras->intra_decay_intercept_ns, "intra_decay_intercept_ns");
    if (!(oracle_extras->intra_decay_slope >= 0.0))
      fail(ErrorKind::validation, "intra_decay_slope must be non-negative");
    if (!(oracle_extras->cluster_shadowing_db >= 0.0) || !(oracle_extras->ray_shadowing_db >= 0.0))
      fail(ErrorKind::validation, "shadowing deviations must be non-negative");
  }
}

ParamDocument ParamDocument::parse(std::istream &in) {
  ParamDocument doc;
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(ErrorKind::load, "line " + std::to_string(lineno) + ": unterminated block header");
      current = lower(trim(std::string_view(t).substr(1, t.size() - 2)));
      if (doc.blocks_.count(current))
        fail(ErrorKind::load, "line " + std::to_string(lineno) + ": duplicate block [" + current + "]");
      doc.blocks_[current];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(ErrorKind::load, "line " + std::to_string(lineno) + ": expected key = value");
    if (current.empty()) fail(ErrorKind::load, "line " + std::to_string(lineno) + ": key outside of a block");
    auto key = lower(trim(std::string_view(t).substr(0, eq)));
    auto value = trim(std::string_view(t).substr(eq + 1));
    if (!doc.blocks_[current].emplace(key, value).second)
      fail(ErrorKind::load, "line " + std::to_string(lineno) + ": duplicate key \"" + key + "\"");
  }
  return doc;
}

ParamDocument ParamDocument::parse(const std::string &text) {
  std::istringstream in(text);
  return parse(in);
}

ParamDocument ParamDocument::from_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::load, "cannot open parameter file " + path.string());
  return parse(in);
}

bool ParamDocument::has_block(const std::string &name) const { return blocks_.count(lower(name)) != 0; }

const std::map<std::string, std::string> &ParamDocument::block(const std::string &name) const {
  auto it = blocks_.find(lower(name));
  if (it == blocks_.end()) fail(ErrorKind::load, "parameter document has no block [" + lower(name) + "]");
  return it->second;
}

ChannelParams load_params(const ParamDocument &doc, const std::string &cm_id) {
  const auto name = lower(cm_id);
  BlockReader r(doc.block(name), name);
  ChannelParams p;
  p.name = name;
  const auto env = lower(r.text("env_class"));
  if (env == "los")
    p.env_class = EnvClass::los;
  else if (env == "nlos")
    p.env_class = EnvClass::nlos;
  else
    fail(ErrorKind::validation, "env_class must be LOS or NLOS, got '" + r.text("env_class") + "'");
  p.lambda0 = r.number("first_cluster_rate_per_ns");
  p.cluster_rate = r.number("cluster_rate_per_ns");
  p.ray_rate_1 = r.number("ray_rate_1_per_ns");
  p.ray_rate_2 = r.number("ray_rate_2_per_ns");
  p.mix_beta = r.number("ray_mix_beta");
  p.mean_clusters = r.number("mean_cluster_count");
  p.intra_decay = r.number("pdp_decay_ns");
  p.nakagami_m0 = r.number("nakagami_m0");
  p.nakagami_m0_hat = r.number("nakagami_m0_hat");
  if (r.has("analytic_nakagami_m")) p.analytic_m = r.number("analytic_nakagami_m");

  const auto present = std::count_if(kOracleKeys.begin(), kOracleKeys.end(), [&](const char *k) { return r.has(k); });
  if (present == static_cast<long>(kOracleKeys.size())) {
    OracleExtras x;
    x.inter_cluster_decay_ns = r.number(kOracleKeys[0]);
    x.intra_decay_intercept_ns = r.number(kOracleKeys[1]);
    x.intra_decay_slope = r.number(kOracleKeys[2]);
    x.cluster_shadowing_db = r.number(kOracleKeys[3]);
    x.ray_shadowing_db = r.number(kOracleKeys[4]);
    p.oracle_extras = x;
  } else if (present != 0) {
    for (const char *k : kOracleKeys) r.text(k);  // throws naming the first missing key
  }

  // Validate the raw rates before fitting, then the derived field.
  p.ray_rate_fitted = std::min(p.ray_rate_1, p.ray_rate_2);
  p.validate();
  p.ray_rate_fitted = fit_single_ray_rate(p.mix_beta, p.ray_rate_1, p.ray_rate_2);
  p.validate();
  return p;
}

ChannelParams load_params(const std::filesystem::path &path, const std::string &cm_id) {
  return load_params(ParamDocument::from_file(path), cm_id);
}

std::string serialize_params(const ChannelParams &p) {
  std::ostringstream out;
  out << '[' << p.name << "]\n";
  out << "env_class = " << to_string(p.env_class) << '\n';
  out << "first_cluster_rate_per_ns = " << format_double(p.lambda0) << '\n';
  out << "cluster_rate_per_ns = " << format_double(p.cluster_rate) << '\n';
  out << "ray_rate_1_per_ns = " << format_double(p.ray_rate_1) << '\n';
  out << "ray_rate_2_per_ns = " << format_double(p.ray_rate_2) << '\n';
  out << "ray_mix_beta = " << format_double(p.mix_beta) << '\n';
  out << "mean_cluster_count = " << format_double(p.mean_clusters) << '\n';
  out << "pdp_decay_ns = " << format_double(p.intra_decay) << '\n';
  out << "nakagami_m0 = " << format_double(p.nakagami_m0) << '\n';
  out << "nakagami_m0_hat = " << format_double(p.nakagami_m0_hat) << '\n';
  out << "analytic_nakagami_m = " << format_double(p.analytic_m) << '\n';
  if (p.oracle_extras) {
    const auto &x = *p.oracle_extras;
    out << "inter_cluster_decay_ns = " << format_double(x.inter_cluster_decay_ns) << '\n';
    out << "intra_decay_intercept_ns = " << format_double(x.intra_decay_intercept_ns) << '\n';
    out << "intra_decay_slope = " << format_double(x.intra_decay_slope) << '\n';
    out << "cluster_shadowing_db = " << format_double(x.cluster_shadowing_db) << '\n';
    out << "ray_shadowing_db = " << format_double(x.ray_shadowing_db) << '\n';
  }
  return out.str();
}

double ray_fit_objective(double beta, double rate1, double rate2, double rate) {
  const double horizon = 10.0 / std::min(rate1, rate2);
  auto sq_err = [&](double t) {
    const double d = beta * rate1 * std::exp(-rate1 * t) + (1.0 - beta) * rate2 * std::exp(-rate2 * t) -
                     rate * std::exp(-rate * t);
    return d * d;
  };
  const auto q = integrate_adaptive(sq_err, 0.0, horizon, 1e-8, 1e-300);
  return q.value;
}

double fit_single_ray_rate(double beta, double rate1, double rate2) {
  if (beta == 1.0 || rate1 == rate2) return rate1;
  if (beta == 0.0) return rate2;
  const double lo = std::min(rate1, rate2);
  const double hi = std::max(rate1, rate2);
  auto objective = [&](double rate) { return ray_fit_objective(beta, rate1, rate2, rate); };
  return golden_section_minimize(objective, lo, hi, 1e-10 * hi, 200).x;
}

double mean_nakagami_m(double m0, double m0_hat) { return std::exp(m0 + 0.5 * m0_hat * m0_hat); }

}  // namespace uwbisi
