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

#include <Eigen/Core>
#include <span>

namespace uwbisi {

/// Probability mass function on the integers n_min, n_min+1, ... with the
/// mass left out by truncation kept in `tail_mass`.
struct DiscretePmf {
  long n_min = 0;
  Eigen::ArrayXd probs;
  double tail_mass = 0.0;

  long size() const { return static_cast<long>(probs.size()); }
  long n_max() const { return n_min + size() - 1; }

  /// Zero outside the enumerated support.
  double at(long n) const {
    const long i = n - n_min;
    return (i < 0 || i >= size()) ? 0.0 : probs[i];
  }

  double enumerated_mass() const { return probs.sum(); }
  double cdf(long n) const;
  double mean() const;
  double second_moment() const;
  double variance() const;

  /// Non-negative entries, entries + tail = 1 within `tol`, tail below `tail_limit`.
  bool satisfies_invariants(double tol = 1e-9, double tail_limit = 1e-6) const;

  static DiscretePmf from_samples(std::span<const long> samples);
};

/// Half the L1 distance over the union of both supports; unenumerated tails
/// count at full weight so the result never understates the distance.
double total_variation(const DiscretePmf &a, const DiscretePmf &b);

}  // namespace uwbisi
