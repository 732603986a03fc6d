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

#include <boost/math/distributions/poisson.hpp>
#include <random>
#include <vector>

#include "test_support.hpp"
#include "uwbisi/path_count.hpp"

using namespace uwbisi;
using namespace uwbisi::test;

namespace {

std::vector<double> convolve(const std::vector<double> &a, const std::vector<double> &b, std::size_t cap) {
  std::vector<double> out(std::min(cap, a.size() + b.size() - 1), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Geometric law of rays inside one cluster gap, written out directly.
std::vector<double> geometric(double ray_rate, double cluster_rate, std::size_t size) {
  std::vector<double> g(size);
  const double p = cluster_rate / (ray_rate + cluster_rate);
  for (std::size_t n = 0; n < size; ++n) g[n] = p * std::pow(1.0 - p, double(n));
  return g;
}

}  // namespace

TEST_CASE("rays in a fixed gap are Poisson") {
  const boost::math::poisson_distribution<double> pois(0.6 * 12.0);
  for (long n : {0L, 3L, 7L, 30L}) CHECK(prob_paths_given_gap(n, 12.0, 0.6) == doctest::Approx(boost::math::pdf(pois, n)));
  CHECK(prob_paths_given_gap(0, 0.0, 0.6) == 1.0);
  CHECK(prob_paths_given_gap(2, 0.0, 0.6) == 0.0);
}

TEST_CASE("rays in one cluster: equal rates give halving probabilities") {
  for (long n = 0; n < 20; ++n) CHECK(prob_paths_in_cluster(n, 0.3, 0.3) == doctest::Approx(std::ldexp(1.0, -int(n) - 1)));
  double s = 0;
  for (long n = 0; n < 2000; ++n) s += prob_paths_in_cluster(n, 1.54, 0.047);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rays over several clusters: negative binomial equals the convolution of geometrics") {
  for (auto [lam, Lam] : {std::pair{0.2, 0.047}, std::pair{1.77, 0.12}, std::pair{0.5, 0.5}}) {
    const std::size_t size = 201;
    const auto g = geometric(lam, Lam, 4000);
    auto conv = std::vector<double>(g.begin(), g.begin() + size);
    for (long r = 0; r <= 10; ++r) {
      if (r > 0) conv = convolve(conv, g, size);
      for (long n = 0; n < long(size); ++n) {
        INFO("r=" << r << " n=" << n);
        CHECK(std::abs(prob_paths_over_clusters(r, n, lam, Lam) - conv[n]) < 1e-12);
      }
    }
  }
}

TEST_CASE("negative binomial mean and normalization") {
  const double lam = 0.4, Lam = 0.12;
  for (long r : {0L, 2L, 6L}) {
    double s = 0, m = 0;
    for (long n = 0; n < 5000; ++n) {
      const double p = prob_paths_over_clusters(r, n, lam, Lam);
      s += p;
      m += n * p;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m == doctest::Approx((r + 1) * lam / Lam).epsilon(1e-10));
  }
}

TEST_CASE("paths given k and L: support, normalization and mean") {
  const auto p = cm("cm1");
  for (long L : {1L, 3L, 8L}) {
    for (long k = 0; k < L; ++k) {
      CHECK(prob_paths_given_k_L(L - k - 1, k, L, p) == 0.0);
      double s = 0, m = 0;
      for (long n = 0; n < 20000; ++n) {
        const double q = prob_paths_given_k_L(n, k, L, p);
        s += q;
        m += n * q;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(m == doctest::Approx(mean_paths_given_k_L(k, L, p)).epsilon(1e-8));
    }
  }
}

TEST_CASE("paths given k and L agree with simulated cluster gaps") {
  // each later cluster holds its leading ray plus the Poisson rays of its gap
  auto p = cm("cm1");
  p.ray_rate_fitted = 0.3;
  const long k = 2, L = 4;
  std::mt19937_64 rng(17);
  std::exponential_distribution<double> gap(p.cluster_rate), ray(p.ray_rate_fitted);
  const int runs = 400000;
  std::vector<long> counts(200, 0);
  for (int i = 0; i < runs; ++i) {
    long n = 0;
    for (long c = 0; c < L - k; ++c) {
      const double g = gap(rng);
      ++n;
      for (double t = ray(rng); t < g; t += ray(rng)) ++n;
    }
    if (n < long(counts.size())) ++counts[n];
  }
  for (long n : {2L, 5L, 10L, 20L}) {
    const double q = prob_paths_given_k_L(n, k, L, p);
    INFO("n=" << n);
    CHECK(std::abs(double(counts[n]) / runs - q) < 4 * std::sqrt(q * (1 - q) / runs) + 1e-6);
  }
}

TEST_CASE("zero-path probability is a Poisson upper tail") {
  const auto p = cm("cm2");
  const double mu = p.cluster_rate * 40.0;
  const boost::math::poisson_distribution<double> pois(mu);
  for (long L : {1L, 2L, 5L}) {
    CHECK(prob_zero_paths(L, ChipTime(40.0), EnvClass::los, p) ==
          doctest::Approx(boost::math::cdf(boost::math::complement(pois, L - 1))).epsilon(1e-12));
    CHECK(prob_zero_paths(L, ChipTime(40.0), EnvClass::nlos, p) ==
          doctest::Approx(boost::math::cdf(boost::math::complement(pois, L))).epsilon(1e-12));
  }
  CHECK(prob_zero_paths(3, ChipTime(0.0), EnvClass::los, p) == 0.0);
  CHECK(full_power_leg_mass(ChipTime(40.0), EnvClass::nlos, p) == doctest::Approx(std::exp(-mu)).epsilon(1e-14));
  CHECK(full_power_leg_mass(ChipTime(40.0), EnvClass::los, p) == 0.0);
}

TEST_CASE("path-count pmf given L: invariants and composition") {
  for (std::string id : {"cm1", "cm2", "cm4"}) {
    const auto p = cm(id);
    for (double tc : {0.0, 25.0, 50.0, 100.0}) {
      const ChipTime t(tc);
      for (long L : {1L, 3L, 6L}) {
        const auto pmf = paths_given_L_pmf(L, t, p.env_class, p);
        INFO(id << " tc=" << tc << " L=" << L);
        CHECK(pmf.n_min == 0);
        CHECK(pmf.satisfies_invariants(1e-9, 1e-7));
        CHECK(pmf.at(0) == doctest::Approx(prob_zero_paths(L, t, p.env_class, p)));
        const double leg = full_power_leg_mass(t, p.env_class, p);
        for (long n : {1L, 4L, 20L}) {
          if (n > pmf.n_max()) continue;  // truncated tail
          const double expected = prob_paths_given_L(n, L, t, p.env_class, p) + leg * prob_paths_given_k_L(n, 0, L, p);
          CHECK(pmf.at(n) == doctest::Approx(expected).epsilon(1e-12).scale(1e-300));
        }
      }
    }
  }
}

TEST_CASE("more clusters means stochastically more interfering paths") {
  for (std::string id : {"cm1", "cm2"}) {
    const auto p = cm(id);
    const ChipTime t(50.0);
    auto prev = paths_given_L_pmf(1, t, p.env_class, p);
    for (long L = 2; L <= 10; ++L) {
      const auto cur = paths_given_L_pmf(L, t, p.env_class, p);
      for (long n = 0; n < 400; n += 3) CHECK(cur.cdf(n) <= prev.cdf(n) + 2e-8);  // enumeration stops at 1 - 1e-8
      CHECK(cur.mean() > prev.mean());
      prev = cur;
    }
  }
}
