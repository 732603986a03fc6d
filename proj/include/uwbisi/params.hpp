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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace uwbisi {

enum class EnvClass { los, nlos };

std::string to_string(EnvClass env);

/// Parameters only the full-fidelity channel oracle needs.
struct OracleExtras {
  double inter_cluster_decay_ns = 0.0;    // cluster energy decay
  double intra_decay_intercept_ns = 0.0;  // gamma_l = intercept + slope * T_l
  double intra_decay_slope = 0.0;
  double cluster_shadowing_db = 0.0;
  double ray_shadowing_db = 0.0;

  bool operator==(const OracleExtras &) const = default;
};

/// Stochastic model of one radio environment. Rates are in 1/ns, times in ns.
struct ChannelParams {
  std::string name;
  EnvClass env_class = EnvClass::los;
  double lambda0 = 0.0;       // first-cluster arrival rate
  double cluster_rate = 0.0;  // cluster inter-arrival rate
  double ray_rate_1 = 0.0;
  double ray_rate_2 = 0.0;
  double mix_beta = 0.0;         // weight of ray_rate_1 in the ray-gap mixture
  double ray_rate_fitted = 0.0;  // single-rate equivalent, see fit_single_ray_rate
  double mean_clusters = 0.0;
  double intra_decay = 0.0;  // PDP decay constant of the single-exponential profile
  double nakagami_m0 = 0.0;
  double nakagami_m0_hat = 0.0;
  double analytic_m = 2.0;  // m-factor used by the analytic chain
  std::optional<OracleExtras> oracle_extras;

  /// Throws Error(validation) naming the offending field.
  void validate() const;

  bool operator==(const ChannelParams &) const = default;
};

/// Flat key/value document: `[block]` headers followed by `key = value` lines.
/// `#` starts a comment.
class ParamDocument {
public:
  static ParamDocument parse(std::istream &in);
  static ParamDocument parse(const std::string &text);
  static ParamDocument from_file(const std::filesystem::path &path);

  bool has_block(const std::string &name) const;
  const std::map<std::string, std::string> &block(const std::string &name) const;

private:
  std::map<std::string, std::map<std::string, std::string>> blocks_;
};

/// Loads and validates the block named `cm_id` (case-insensitive, e.g. "cm1").
/// The single-Poisson ray rate is fitted during the load.
ChannelParams load_params(const ParamDocument &doc, const std::string &cm_id);
ChannelParams load_params(const std::filesystem::path &path, const std::string &cm_id);

/// Serializes one block in the document format, shortest round-trip decimal form.
std::string serialize_params(const ChannelParams &params);

/// Integrated squared error between the two-rate mixture density and a single
/// exponential density of rate `rate`, over [0, 10 / min(rate1, rate2)].
double ray_fit_objective(double beta, double rate1, double rate2, double rate);

/// Single ray rate minimizing ray_fit_objective on [min, max] of the two rates.
double fit_single_ray_rate(double beta, double rate1, double rate2);

/// Mean of a lognormal m-factor: exp(m0 + m0_hat^2 / 2).
double mean_nakagami_m(double m0, double m0_hat);

}  // namespace uwbisi
