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

#include "uwbisi/pmf.hpp"

#include <algorithm>
#include <cmath>

namespace uwbisi {

namespace {

Eigen::ArrayXd support(const DiscretePmf &p) {
  return Eigen::ArrayXd::LinSpaced(p.size(), static_cast<double>(p.n_min), static_cast<double>(p.n_max()));
}

}  // namespace

double DiscretePmf::cdf(long n) const {
  const long i = n - n_min;
  if (i < 0) return 0.0;
  if (i >= size()) return enumerated_mass();
  return probs.head(i + 1).sum();
}

double DiscretePmf::mean() const { return (support(*this) * probs).sum(); }

double DiscretePmf::second_moment() const { return (support(*this).square() * probs).sum(); }

double DiscretePmf::variance() const {
  const double m = mean();
  return second_moment() - m * m;
}

bool DiscretePmf::satisfies_invariants(double tol, double tail_limit) const {
  if (size() > 0 && (probs < 0.0).any()) return false;
  if (!(tail_mass >= 0.0) || tail_mass >= tail_limit) return false;
  return std::abs(enumerated_mass() + tail_mass - 1.0) <= tol;
}

DiscretePmf DiscretePmf::from_samples(std::span<const long> samples) {
  DiscretePmf out;
  if (samples.empty()) return out;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  out.n_min = *lo;
  out.probs = Eigen::ArrayXd::Zero(*hi - *lo + 1);
  for (long s : samples) out.probs[s - out.n_min] += 1.0;
  out.probs /= static_cast<double>(samples.size());
  return out;
}

double total_variation(const DiscretePmf &a, const DiscretePmf &b) {
  const long lo = std::min(a.n_min, b.n_min);
  const long hi = std::max(a.n_max(), b.n_max());
  double l1 = 0.0;
  for (long n = lo; n <= hi; ++n) l1 += std::abs(a.at(n) - b.at(n));
  return 0.5 * (l1 + a.tail_mass + b.tail_mass);
}

}  // namespace uwbisi
