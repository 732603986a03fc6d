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

#include "uwbisi/numerics.hpp"

namespace uwbisi {

double poisson_upper_tail(long k, double mean) {
  if (k <= 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  CompensatedSum s;
  if (static_cast<double>(k) > mean) {
    // terms decrease from k onwards
    double term = poisson_pmf(k, mean);
    for (long j = k; term > 0.0; ++j) {
      s += term;
      if (term < 1e-18 * s.value()) break;
      term *= mean / static_cast<double>(j + 1);
    }
    return std::min(1.0, s.value());
  }
  for (long j = 0; j < k; ++j) s += poisson_pmf(j, mean);
  return std::max(0.0, 1.0 - s.value());
}

}  // namespace uwbisi
