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

#include "uwbisi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "uwbisi/error.hpp"
#include "uwbisi/numerics.hpp"

namespace uwbisi {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs f(i) for i in [begin, end) on up to `threads` workers. Each index is
// handled exactly once; callers store results by index.
template <typename F>
void parallel_for(long begin, long end, int threads, F &&f) {
  const long n = end - begin;
  if (n <= 0) return;
  const long workers = std::clamp<long>(threads, 1, n);
  if (workers == 1) {
    for (long i = begin; i < end; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (long w = 0; w < workers; ++w) {
    const long lo = begin + n * w / workers;
    const long hi = begin + n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &f] {
      for (long i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto &t : pool) t.join();
}

double exponential(double rate, Rng &rng) { return std::exponential_distribution<double>(rate)(rng); }

double first_cluster_delay(const ChannelParams &params, Rng &rng) {
  return params.env_class == EnvClass::los ? 0.0 : exponential(params.lambda0, rng);
}

// Fading, phase and unit-energy normalization shared by both modes.
void finish_realization(ChannelRealization &real, const ChannelParams &params, Rng &rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  CompensatedSum energy;
  real.tap_gains.resize(real.mean_power.size());
  real.phases.resize(real.mean_power.size());
  for (std::size_t l = 0; l < real.mean_power.size(); ++l) {
    const auto &omega = real.mean_power[l];
    auto &gains = real.tap_gains[l];
    auto &phases = real.phases[l];
    gains.resize(omega.size());
    phases.resize(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k) {
      const double m = std::exp(params.nakagami_m0 + params.nakagami_m0_hat * normal(rng));
      const double power = std::gamma_distribution<double>(m, omega[k] / m)(rng);
      gains[k] = power;  // squared amplitude for now
      phases[k] = angle(rng);
      energy += power;
    }
  }
  const double total = energy.value();
  for (auto &gains : real.tap_gains)
    for (auto &g : gains) g = total > 0.0 ? std::sqrt(g / total) : 0.0;
}

void simplified_rays(ChannelRealization &real, const ChannelParams &params, Rng &rng) {
  const long L = real.cluster_count();
  real.ray_delays.assign(L, {});
  real.mean_power.assign(L, {});
  for (long l = 0; l < L; ++l) {
    const double start = real.cluster_times[l];
    const double end = l + 1 < L ? real.cluster_times[l + 1] : real.horizon;
    auto &delays = real.ray_delays[l];
    for (double tau = 0.0; start + tau < end; tau += exponential(params.ray_rate_fitted, rng)) {
      delays.push_back(tau);
      real.mean_power[l].push_back(std::exp(-(start + tau) / params.intra_decay));
    }
  }
}

void full_rays(ChannelRealization &real, const ChannelParams &params, Rng &rng) {
  if (!params.oracle_extras)
    fail(ErrorKind::validation, "parameter block " + params.name + " has no oracle keys; full-fidelity mode unavailable");
  const auto &x = *params.oracle_extras;
  std::normal_distribution<double> normal;
  std::bernoulli_distribution first_rate(params.mix_beta);
  const long L = real.cluster_count();
  real.ray_delays.assign(L, {});
  real.mean_power.assign(L, {});
  const double ray_norm = (1.0 - params.mix_beta) * params.ray_rate_1 + params.mix_beta * params.ray_rate_2 + 1.0;
  for (long l = 0; l < L; ++l) {
    const double t = real.cluster_times[l];
    const double cluster_energy = std::exp(-t / x.inter_cluster_decay_ns) * std::pow(10.0, x.cluster_shadowing_db * normal(rng) / 10.0);
    const double decay = x.intra_decay_intercept_ns + x.intra_decay_slope * t;
    const double last = decay * std::log(1e5);
    auto &delays = real.ray_delays[l];
    for (double tau = 0.0; tau <= last;) {
      delays.push_back(tau);
      const double shadow = x.ray_shadowing_db > 0.0 ? std::pow(10.0, x.ray_shadowing_db * normal(rng) / 10.0) : 1.0;
      real.mean_power[l].push_back(cluster_energy * std::exp(-tau / decay) / (decay * ray_norm) * shadow);
      tau += exponential(first_rate(rng) ? params.ray_rate_1 : params.ray_rate_2, rng);
    }
  }
}

ChannelRealization realization_with_clusters(const ChannelParams &params, OracleMode mode, long L, Rng &rng) {
  ChannelRealization real;
  double t = first_cluster_delay(params, rng);
  real.cluster_times.reserve(L);
  for (long l = 0; l < L; ++l) {
    real.cluster_times.push_back(t);
    t += exponential(params.cluster_rate, rng);
  }
  real.horizon = t;
  if (mode == OracleMode::simplified)
    simplified_rays(real, params, rng);
  else
    full_rays(real, params, rng);
  finish_realization(real, params, rng);
  return real;
}

constexpr double kMinAcceptance = 1e-4;

bool condition_holds(const ChannelRealization &real, ChipTime tc, const Condition &c) {
  if (c.kind == ConditionKind::cluster_count) {
    if (real.cluster_count() != c.value) return false;
  } else {
    const long ell = c.value;
    if (ell < 1 || ell > real.cluster_count()) return false;
    const double lo = real.cluster_times[ell - 1];
    const double hi = ell < real.cluster_count() ? real.cluster_times[ell] : real.horizon;
    if (!(lo <= tc.ns() && tc.ns() < hi)) return false;
  }
  return !c.require_interfering_path || interfering_path_count(real, tc) > 0;
}

// Draws realizations 0, 1, 2, ... in blocks and keeps the first `runs` that
// `draw` accepts, in index order, so the result is independent of the thread count.
template <typename Draw>
ConditionalEstimate sample_until(ChipTime tc, long runs, std::uint64_t seed, const McOptions &options, Draw &&draw) {
  struct Outcome {
    bool accepted = false;
    double power = 0.0;
    long paths = 0;
    std::optional<double> pdp;
  };
  ConditionalEstimate out;
  std::vector<double> powers, pdps;
  const long block = 8192;
  const long max_attempts = static_cast<long>(std::ceil(runs / kMinAcceptance)) + block;
  std::vector<Outcome> outcomes(block);
  long attempts = 0;
  while (static_cast<long>(powers.size()) < runs) {
    if (attempts >= 100000 && static_cast<double>(powers.size()) < kMinAcceptance * attempts) {
      std::ostringstream msg;
      msg << "conditional sampling accepted " << powers.size() << " of " << attempts
          << " attempts (below 1e-4); use mc_given_clusters for direct generation";
      fail(ErrorKind::budget, msg.str());
    }
    if (attempts >= max_attempts) fail(ErrorKind::budget, "conditional sampling exhausted its attempt budget");
    parallel_for(0, block, options.threads, [&](long i) {
      const auto [real, accepted] = draw(static_cast<std::uint64_t>(attempts + i));
      Outcome &o = outcomes[i];
      o.accepted = accepted;
      if (!o.accepted) return;
      o.power = interference_power(real, tc);
      o.paths = interfering_path_count(real, tc);
      o.pdp = excess_pdp_mean(real, tc);
    });
    // first `runs` acceptances in attempt order, whatever the block split
    for (long i = 0; i < block && static_cast<long>(powers.size()) < runs; ++i) {
      const Outcome &o = outcomes[i];
      ++out.attempts;
      if (!o.accepted) continue;
      powers.push_back(o.power);
      out.path_counts.push_back(o.paths);
      if (o.pdp) pdps.push_back(*o.pdp);
    }
    attempts += block;
  }
  out.acceptance_rate = static_cast<double>(powers.size()) / static_cast<double>(out.attempts);
  out.power = McEstimate::from_samples(std::move(powers), seed);
  out.excess_pdp = McEstimate::from_samples(std::move(pdps), seed);
  out.path_pmf = DiscretePmf::from_samples(out.path_counts);
  return out;
}


}  // namespace

std::string to_string(OracleMode mode) { return mode == OracleMode::simplified ? "simplified" : "full"; }

OracleMode oracle_mode_from_string(const std::string &text) {
  if (text == "simplified") return OracleMode::simplified;
  if (text == "full") return OracleMode::full;
  fail(ErrorKind::validation, "unknown oracle mode \"" + text + "\" (expected simplified or full)");
}

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

long ChannelRealization::ray_count() const {
  long n = 0;
  for (const auto &d : ray_delays) n += static_cast<long>(d.size());
  return n;
}

double ChannelRealization::total_energy() const {
  CompensatedSum s;
  for (const auto &gains : tap_gains)
    for (double g : gains) s += g * g;
  return s.value();
}

long draw_cluster_count(const ChannelParams &params, Rng &rng) {
  std::poisson_distribution<long> poisson(params.mean_clusters);
  long L = 0;
  while (L < 1) L = poisson(rng);
  return L;
}

ChannelRealization generate_realization(const ChannelParams &params, OracleMode mode, Rng &rng) {
  const long L = draw_cluster_count(params, rng);
  return realization_with_clusters(params, mode, L, rng);
}

ChannelRealization generate_realization_with_clusters(const ChannelParams &params, OracleMode mode, long L, Rng &rng) {
  if (L < 1) fail(ErrorKind::domain, "a realization needs at least one cluster");
  return realization_with_clusters(params, mode, L, rng);
}

ChannelRealization generate_realization(const ChannelParams &params, OracleMode mode, std::uint64_t seed,
                                        std::uint64_t index) {
  Rng rng = make_stream(seed, index);
  return generate_realization(params, mode, rng);
}

long rays_in_gap(double gap, double rate, Rng &rng) {
  long n = 0;
  for (double t = exponential(rate, rng); t < gap; t += exponential(rate, rng)) ++n;
  return n;
}

double interference_power(const ChannelRealization &real, ChipTime tc) {
  CompensatedSum s;
  for (std::size_t l = 0; l < real.ray_delays.size(); ++l)
    for (std::size_t k = 0; k < real.ray_delays[l].size(); ++k)
      if (real.cluster_times[l] + real.ray_delays[l][k] >= tc.ns()) s += real.tap_gains[l][k] * real.tap_gains[l][k];
  return std::clamp(s.value(), 0.0, 1.0);
}

long interfering_path_count(const ChannelRealization &real, ChipTime tc) {
  long n = 0;
  for (std::size_t l = 0; l < real.ray_delays.size(); ++l)
    for (double tau : real.ray_delays[l])
      if (real.cluster_times[l] + tau >= tc.ns()) ++n;
  return n;
}

std::optional<double> excess_pdp_mean(const ChannelRealization &real, ChipTime tc) {
  CompensatedSum s;
  long n = 0;
  for (std::size_t l = 0; l < real.ray_delays.size(); ++l)
    for (std::size_t k = 0; k < real.ray_delays[l].size(); ++k)
      if (real.cluster_times[l] + real.ray_delays[l][k] >= tc.ns()) {
        s += real.mean_power[l][k];
        ++n;
      }
  if (n == 0) return std::nullopt;
  return s.value() / static_cast<double>(n);
}

McEstimate McEstimate::from_samples(std::vector<double> samples, std::uint64_t seed) {
  McEstimate e;
  e.seed = seed;
  e.runs = static_cast<long>(samples.size());
  e.samples = std::move(samples);
  if (e.runs == 0) return e;
  CompensatedSum s;
  for (double v : e.samples) s += v;
  e.mean = s.value() / e.runs;
  CompensatedSum c2, c4;
  for (double v : e.samples) {
    const double d = (v - e.mean) * (v - e.mean);
    c2 += d;
    c4 += d * d;
  }
  const double n = static_cast<double>(e.runs);
  if (e.runs > 1) {
    e.variance = c2.value() / (n - 1.0);
    e.standard_error = std::sqrt(e.variance / n);
    // large-sample standard error of the sample variance: sqrt((mu4 - sigma^4) / n)
    const double mu4 = c4.value() / n;
    const double s2 = c2.value() / n;
    e.variance_standard_error = std::sqrt(std::max(0.0, mu4 - s2 * s2) / n);
  }
  return e;
}

McEstimate mc_interference(const ChannelParams &params, ChipTime tc, long runs, std::uint64_t seed,
                           const McOptions &options) {
  if (runs < 1) fail(ErrorKind::validation, "runs must be at least 1");
  std::vector<double> samples(runs);
  parallel_for(0, runs, options.threads, [&](long i) {
    const auto real = generate_realization(params, options.mode, seed, static_cast<std::uint64_t>(i));
    samples[i] = interference_power(real, tc);
  });
  return McEstimate::from_samples(std::move(samples), seed);
}

ConditionalEstimate mc_conditional(const ChannelParams &params, ChipTime tc, const Condition &condition, long runs,
                                   std::uint64_t seed, const McOptions &options) {
  if (runs < 1) fail(ErrorKind::validation, "runs must be at least 1");
  if (condition.kind == ConditionKind::cluster_count) {
    if (condition.value < 1) fail(ErrorKind::domain, "conditioning cluster count must be at least 1");
    const double target = poisson_pmf(condition.value, params.mean_clusters) / -std::expm1(-params.mean_clusters);
    if (target < kMinAcceptance) {
      std::ostringstream msg;
      msg << "P(L = " << condition.value << ") = " << target << " is below the 1e-4 rejection budget; use "
          << "mc_given_clusters (direct generation with a fixed cluster count) instead";
      fail(ErrorKind::budget, msg.str());
    }
  }
  return sample_until(tc, runs, seed, options, [&](std::uint64_t index) {
    auto real = generate_realization(params, options.mode, seed, index);
    const bool ok = condition_holds(real, tc, condition);
    return std::pair{std::move(real), ok};
  });
}

ConditionalEstimate mc_given_clusters(const ChannelParams &params, ChipTime tc, long L, long runs, std::uint64_t seed,
                                      bool require_interfering_path, const McOptions &options) {
  if (runs < 1) fail(ErrorKind::validation, "runs must be at least 1");
  if (L < 1) fail(ErrorKind::domain, "conditioning cluster count must be at least 1");
  return sample_until(tc, runs, seed, options, [&](std::uint64_t index) {
    Rng rng = make_stream(seed, index);
    auto real = generate_realization_with_clusters(params, options.mode, L, rng);
    const bool ok = !require_interfering_path || interfering_path_count(real, tc) > 0;
    return std::pair{std::move(real), ok};
  });
}

}  // namespace uwbisi
