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

#include <numeric>
#include <random>

#include "test_support.hpp"
#include "uwbisi/pmf.hpp"
#include "uwbisi/report.hpp"

using namespace uwbisi;
using namespace uwbisi::test;

TEST_CASE("Freedman-Diaconis bins and their fallbacks") {
  std::vector<double> u(1000);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (i + 0.5) / 1000.0;
  auto h = freedman_diaconis(u);
  CHECK(h.rule == "freedman-diaconis");
  CHECK(h.bins() == 10);  // width 2 * 0.5 / 1000^(1/3)
  CHECK(std::accumulate(h.counts.begin(), h.counts.end(), 0L) == 1000);
  CHECK(h.edges.front() == u.front());
  CHECK(h.edges.back() == u.back());

  // mostly exact zeros: the spread is taken from the positive samples
  std::vector<double> z(900, 0.0);
  for (int i = 0; i < 100; ++i) z.push_back(0.01 * (i + 1));
  h = freedman_diaconis(z);
  CHECK(h.rule.find("above the minimum") != std::string::npos);
  CHECK(h.counts[0] >= 900);
  CHECK(std::accumulate(h.counts.begin(), h.counts.end(), 0L) == 1000);

  // two distinct values: no spread anywhere, Sturges
  std::vector<double> two(800, 0.0);
  two.insert(two.end(), 200, 1.0);
  h = freedman_diaconis(two);
  CHECK(h.rule == "sturges");
  CHECK(h.bins() == 11);
  CHECK(h.counts.front() == 800);
  CHECK(h.counts.back() == 200);

  h = freedman_diaconis(std::vector<double>(50, 0.3));
  CHECK(h.bins() == 1);
  CHECK(h.counts[0] == 50);

  CHECK(freedman_diaconis(u, 4).bins() == 4);
  CHECK(error_kind_of([] { freedman_diaconis(std::vector<double>{}); }) == ErrorKind::domain);
}

TEST_CASE("bin probabilities carry both point masses") {
  const auto p = cm("cm2");
  const auto d = interference_distribution(ChipTime(30.0), EnvClass::nlos, p);
  REQUIRE(d.full_power_mass > 0.0);
  REQUIRE(d.mass_at_zero > 0.0);
  std::vector<double> edges;
  for (int i = 0; i <= 20; ++i) edges.push_back(0.05 * i);
  const auto probs = bin_probabilities(d, edges);
  CHECK(probs.front() >= d.mass_at_zero);
  CHECK(probs.back() >= d.full_power_mass);  // last bin is closed at 1
  CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(d.cdf(1.0)).epsilon(1e-10));
  for (double q : probs) CHECK(q >= 0.0);

  // a histogram reproducing the analytic probabilities has TV equal to half the mass outside its range
  Histogram h;
  h.edges = edges;
  const long n = 100000000;
  for (double q : probs) h.counts.push_back(std::lround(q * n / d.cdf(1.0)));
  const double outside = d.total_mass() - d.cdf(1.0);
  CHECK(histogram_total_variation(d, h) == doctest::Approx(0.5 * (outside + (1 - d.cdf(1.0)))).epsilon(1e-3).scale(1e-6));
}

TEST_CASE("discrete pmf helpers") {
  std::vector<long> s{2, 3, 3, 5, 5, 5};
  const auto pmf = DiscretePmf::from_samples(s);
  CHECK(pmf.n_min == 2);
  CHECK(pmf.n_max() == 5);
  CHECK(pmf.at(3) == doctest::Approx(2.0 / 6));
  CHECK(pmf.at(4) == 0.0);
  CHECK(pmf.at(9) == 0.0);
  CHECK(pmf.mean() == doctest::Approx(23.0 / 6));
  CHECK(pmf.cdf(3) == doctest::Approx(0.5));
  CHECK(pmf.satisfies_invariants());
  CHECK(total_variation(pmf, pmf) == 0.0);

  DiscretePmf other;
  other.n_min = 4;
  other.probs = Eigen::ArrayXd::Constant(2, 0.5);
  // shared mass only at n = 4, 5: |0 - 0.5| + |0.5 - 0.5| + 1/6 + 1/3 = 1
  CHECK(total_variation(pmf, other) == doctest::Approx(0.5));
  DiscretePmf tailed = other;
  tailed.probs *= 0.9;
  tailed.tail_mass = 0.1;
  CHECK(total_variation(other, tailed) == doctest::Approx(0.1));
}

TEST_CASE("comparison report survives a JSON round trip") {
  const auto p = cm("cm1");
  const auto d = interference_distribution(ChipTime(50.0), EnvClass::los, p);
  const auto mc = mc_interference(p, ChipTime(50.0), 2000, 3);
  const auto h = freedman_diaconis(mc.samples);
  auto r = compare_moments(d, mc, h);
  r.cm = "cm1";
  r.path_count = PathCountReport{5, 200, 0.1, 0.2, 1e-9};
  REQUIRE(r.moment_table.size() == 2);
  CHECK(r.moment_table[0].statistic == "mean");
  CHECK(r.moment_table[0].analytic == d.mean);
  CHECK(r.moment_table[1].empirical == mc.variance);
  CHECK(r.bounds_hold() == (r.moment_table[0].analytic_bounds && r.moment_table[1].analytic_bounds));

  const auto j = to_json(r);
  const auto back = report_from_json(nlohmann::ordered_json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(back.tv_distance == r.tv_distance);
  REQUIRE(back.path_count);
  CHECK(back.path_count->runs == 200);

  r.mean_ratio = std::nan("");
  r.path_count.reset();
  const auto jn = to_json(r);
  CHECK(jn["mean_ratio"].is_null());
  CHECK(jn["path_count"].is_null());
  const auto back_nan = report_from_json(jn);
  CHECK(std::isnan(back_nan.mean_ratio));
  CHECK_FALSE(back_nan.path_count);
}
