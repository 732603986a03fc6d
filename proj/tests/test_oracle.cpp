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

#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/poisson.hpp>
#include <numeric>

#include "test_support.hpp"
#include "uwbisi/oracle.hpp"

using namespace uwbisi;
using namespace uwbisi::test;

namespace {

bool same_realization(const ChannelRealization &a, const ChannelRealization &b) {
  return a.cluster_times == b.cluster_times && a.horizon == b.horizon && a.ray_delays == b.ray_delays &&
         a.tap_gains == b.tap_gains && a.phases == b.phases;
}

// Interference power recomputed from a flat, delay-sorted list of taps.
double interference_power_sorted(const ChannelRealization &r, double tc) {
  std::vector<std::pair<double, double>> taps;
  for (std::size_t l = 0; l < r.ray_delays.size(); ++l)
    for (std::size_t k = 0; k < r.ray_delays[l].size(); ++k)
      taps.emplace_back(r.cluster_times[l] + r.ray_delays[l][k], r.tap_gains[l][k] * r.tap_gains[l][k]);
  std::sort(taps.begin(), taps.end());
  const auto first = std::lower_bound(taps.begin(), taps.end(), std::pair{tc, -1.0});
  double s = 0;
  for (auto it = first; it != taps.end(); ++it) s += it->second;
  return std::min(s, 1.0);
}

}  // namespace

TEST_CASE("realizations are a pure function of (seed, index)") {
  const auto p = cm("cm1");
  for (auto mode : {OracleMode::simplified, OracleMode::full}) {
    const auto a = generate_realization(p, mode, 42, 7);
    generate_realization(p, mode, 42, 8);
    const auto b = generate_realization(p, mode, 42, 7);
    CHECK(same_realization(a, b));
    CHECK_FALSE(same_realization(a, generate_realization(p, mode, 42, 9)));
    CHECK_FALSE(same_realization(a, generate_realization(p, mode, 43, 7)));
  }
  Rng r1 = make_stream(1, 0), r2 = make_stream(1, 1), r3 = make_stream(2, 0);
  const auto x = r1();
  CHECK(x != r2());
  CHECK(x != r3());
}

TEST_CASE("realization structure") {
  for (std::string id : {"cm1", "cm2"}) {
    const auto p = cm(id);
    for (std::uint64_t i = 0; i < 200; ++i) {
      const auto r = generate_realization(p, OracleMode::simplified, 5, i);
      REQUIRE(r.cluster_count() >= 1);
      if (p.env_class == EnvClass::los) CHECK(r.cluster_times[0] == 0.0);
      CHECK(std::is_sorted(r.cluster_times.begin(), r.cluster_times.end()));
      CHECK(r.horizon > r.cluster_times.back());
      CHECK(r.total_energy() == doctest::Approx(1.0).epsilon(1e-12));
      for (long l = 0; l < r.cluster_count(); ++l) {
        const double end = l + 1 < r.cluster_count() ? r.cluster_times[l + 1] : r.horizon;
        REQUIRE_FALSE(r.ray_delays[l].empty());
        CHECK(r.ray_delays[l][0] == 0.0);
        CHECK(r.cluster_times[l] + r.ray_delays[l].back() < end);
        for (std::size_t k = 0; k < r.ray_delays[l].size(); ++k) {
          CHECK(r.phases[l][k] >= 0.0);
          CHECK(r.phases[l][k] < 2 * std::numbers::pi);
          CHECK(r.mean_power[l][k] == doctest::Approx(std::exp(-(r.cluster_times[l] + r.ray_delays[l][k]) / p.intra_decay)));
        }
      }
    }
  }
}

TEST_CASE("full-fidelity mode needs the oracle keys") {
  auto p = cm("cm1");
  const auto r = generate_realization(p, OracleMode::full, 1, 0);
  CHECK(r.total_energy() == doctest::Approx(1.0).epsilon(1e-12));
  p.oracle_extras.reset();
  CHECK(error_kind_of([&] { generate_realization(p, OracleMode::full, 1, 0); }) == ErrorKind::validation);
  CHECK(oracle_mode_from_string("full") == OracleMode::full);
  CHECK(error_kind_of([] { oracle_mode_from_string("fast"); }) == ErrorKind::validation);
}

TEST_CASE("cluster count is a zero-truncated Poisson") {
  const auto p = cm("cm2");
  const boost::math::poisson_distribution<double> pois(p.mean_clusters);
  const double norm = 1.0 - boost::math::pdf(pois, 0);
  Rng rng = make_stream(99, 0);
  const int n = 100000;
  std::vector<long> counts(60, 0);
  for (int i = 0; i < n; ++i) ++counts[std::min<long>(draw_cluster_count(p, rng), 59)];
  CHECK(counts[0] == 0);
  double tv = 0;
  for (long L = 1; L < 60; ++L) tv += std::abs(double(counts[L]) / n - boost::math::pdf(pois, L) / norm);
  CHECK(0.5 * tv < 0.01);
}

TEST_CASE("full-mode ray gaps follow the two-rate mixture") {
  const auto p = cm("cm1");
  std::vector<double> gaps;
  for (std::uint64_t i = 0; gaps.size() < 100000; ++i) {
    const auto r = generate_realization(p, OracleMode::full, 3, i);
    for (const auto &d : r.ray_delays)
      if (d.size() > 1) gaps.push_back(d[1]);
  }
  std::sort(gaps.begin(), gaps.end());
  auto cdf = [&](double x) {
    return p.mix_beta * -std::expm1(-p.ray_rate_1 * x) + (1 - p.mix_beta) * -std::expm1(-p.ray_rate_2 * x);
  };
  double ks = 0;
  const double n = double(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i)
    ks = std::max({ks, std::abs(cdf(gaps[i]) - i / n), std::abs(cdf(gaps[i]) - (i + 1) / n)});
  CHECK(ks < 0.01);
}

TEST_CASE("rays in a gap") {
  Rng rng = make_stream(8, 0);
  const double gap = 4.0, rate = 1.5;
  const int n = 200000;
  std::vector<long> counts(40, 0);
  for (int i = 0; i < n; ++i) ++counts[std::min<long>(rays_in_gap(gap, rate, rng), 39)];
  const boost::math::poisson_distribution<double> pois(gap * rate);
  double tv = 0;
  for (long k = 0; k < 40; ++k) tv += std::abs(double(counts[k]) / n - boost::math::pdf(pois, k));
  CHECK(0.5 * tv < 0.01);
  CHECK(rays_in_gap(0.0, rate, rng) == 0);
}

TEST_CASE("interference power: limits and an independent recomputation") {
  for (std::string id : {"cm1", "cm4"}) {
    const auto p = cm(id);
    for (std::uint64_t i = 0; i < 300; ++i) {
      const auto r = generate_realization(p, OracleMode::simplified, 11, i);
      CHECK(interference_power(r, ChipTime(0.0)) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(interference_power(r, ChipTime(1e7)) == 0.0);
      CHECK(interfering_path_count(r, ChipTime(0.0)) == r.ray_count());
      CHECK_FALSE(excess_pdp_mean(r, ChipTime(1e7)));
      for (double tc : {5.0, 25.0, 50.0, 120.0}) {
        CHECK(interference_power(r, ChipTime(tc)) == doctest::Approx(interference_power_sorted(r, tc)).epsilon(1e-12));
        CHECK(interference_power(r, ChipTime(tc)) <= interference_power(r, ChipTime(tc - 5.0)));
      }
    }
  }
}

TEST_CASE("sample statistics") {
  const auto e = McEstimate::from_samples({1.0, 2.0, 3.0, 4.0}, 9);
  CHECK(e.runs == 4);
  CHECK(e.seed == 9);
  CHECK(e.mean == 2.5);
  CHECK(e.variance == doctest::Approx(5.0 / 3.0));
  CHECK(e.standard_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(McEstimate::from_samples({}, 1).runs == 0);
}

TEST_CASE("Monte-Carlo results do not depend on the thread count") {
  const auto p = cm("cm1");
  const auto a = mc_interference(p, ChipTime(25.0), 3000, 5, {OracleMode::simplified, 1});
  const auto b = mc_interference(p, ChipTime(25.0), 3000, 5, {OracleMode::simplified, 3});
  CHECK(a.samples == b.samples);
  CHECK(a.mean == b.mean);

  const Condition c{ConditionKind::cluster_count, 2, false};
  const auto x = mc_conditional(p, ChipTime(25.0), c, 9000, 5, {OracleMode::simplified, 1});
  const auto y = mc_conditional(p, ChipTime(25.0), c, 9000, 5, {OracleMode::simplified, 4});
  CHECK(x.power.samples == y.power.samples);
  CHECK(x.path_counts == y.path_counts);
  CHECK(x.attempts == y.attempts);
  // the acceptance rate estimates P(L = 2 | L >= 1)
  const double target = 0.5 * 9.0 * std::exp(-3.0) / (1 - std::exp(-3.0));
  CHECK(std::abs(x.acceptance_rate - target) < 4 * std::sqrt(target * (1 - target) / x.attempts));
}

TEST_CASE("conditional sampling: accepted realizations satisfy the condition") {
  const auto p = cm("cm2");
  const Condition c{ConditionKind::chip_in_cluster, 2, true};
  const auto est = mc_conditional(p, ChipTime(30.0), c, 2000, 77);
  CHECK(est.power.runs == 2000);
  CHECK(est.excess_pdp.runs == 2000);
  for (long n : est.path_counts) CHECK(n > 0);
  CHECK(est.path_pmf.satisfies_invariants());
}

TEST_CASE("rare conditions stop with a budget error") {
  const auto p = cm("cm1");
  std::string msg;
  CHECK(error_kind_of([&] { mc_conditional(p, ChipTime(25.0), {ConditionKind::cluster_count, 20, false}, 100, 1); },
                      &msg) == ErrorKind::budget);
  CHECK(msg.find("mc_given_clusters") != std::string::npos);
  CHECK(error_kind_of([&] { mc_conditional(p, ChipTime(1.0), {ConditionKind::chip_in_cluster, 9, false}, 100, 1); }) ==
        ErrorKind::budget);
  CHECK(error_kind_of([&] { mc_interference(p, ChipTime(1.0), 0, 1); }) == ErrorKind::validation);
}

TEST_CASE("direct generation with a fixed cluster count matches rejection on the cluster count") {
  const auto p = cm("cm1");
  const auto direct = mc_given_clusters(p, ChipTime(50.0), 3, 20000, 4);
  const auto rejected = mc_conditional(p, ChipTime(50.0), {ConditionKind::cluster_count, 3, false}, 20000, 4);
  CHECK(direct.attempts == 20000);
  CHECK(direct.acceptance_rate == 1.0);
  CHECK(total_variation(direct.path_pmf, rejected.path_pmf) < 0.03);
  const double se = std::hypot(direct.power.standard_error, rejected.power.standard_error);
  CHECK(std::abs(direct.power.mean - rejected.power.mean) < 4 * se);

  const auto need_path = mc_given_clusters(p, ChipTime(50.0), 1, 3000, 4, true);
  CHECK(need_path.excess_pdp.runs == 3000);
  CHECK(need_path.acceptance_rate < 0.5);
  const auto a = mc_given_clusters(p, ChipTime(25.0), 4, 5000, 8, true, {OracleMode::simplified, 1});
  const auto b = mc_given_clusters(p, ChipTime(25.0), 4, 5000, 8, true, {OracleMode::simplified, 3});
  CHECK(a.excess_pdp.samples == b.excess_pdp.samples);
  CHECK(error_kind_of([&] { mc_given_clusters(p, ChipTime(1.0), 0, 10, 1); }) == ErrorKind::domain);
}
