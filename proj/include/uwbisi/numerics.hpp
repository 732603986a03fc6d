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

// Small numerical toolbox shared by the analytic modules: adaptive
// Gauss-Kronrod quadrature, golden-section search, compensated summation
// and a few log-domain probability helpers.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "uwbisi/error.hpp"

namespace uwbisi {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum &operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment &o) const noexcept { return error < o.error; }
};

template <typename F>
Segment kronrod15(F &f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, resk * half, std::abs((resk - resg) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
/// Stops once the summed error estimate is below max(abs_tol, rel_tol*|I|).
template <typename F>
QuadratureResult integrate_adaptive(F &&f, double a, double b, double rel_tol, double abs_tol = 0.0,
                                    int max_intervals = 4000) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Segment> heap;
  auto first = detail::kronrod15(f, a, b);
  heap.push(first);
  out.evaluations = 15;
  double total = first.value;
  double err = first.error;
  long splits = 0;
  while (true) {
    const double target = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= target) {
      out.converged = true;
      break;
    }
    if (static_cast<int>(heap.size()) >= max_intervals) break;
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval exhausted in double precision
    heap.pop();
    const auto left = detail::kronrod15(f, worst.a, mid);
    const auto right = detail::kronrod15(f, mid, worst.b);
    out.evaluations += 30;
    heap.push(left);
    heap.push(right);
    total += (left.value + right.value) - worst.value;
    err += (left.error + right.error) - worst.error;
    if (++splits % 100 == 0) {
      // periodic re-sum keeps rounding drift out of the running totals
      CompensatedSum s, e;
      auto copy = heap;
      while (!copy.empty()) {
        s += copy.top().value;
        e += copy.top().error;
        copy.pop();
      }
      total = s.value();
      err = e.value();
    }
  }
  out.value = total;
  out.abs_error = err;
  out.intervals = static_cast<int>(heap.size());
  return out;
}

struct MinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Golden-section search for a unimodal function on [lo, hi].
template <typename F>
MinimizeResult golden_section_minimize(F &&f, double lo, double hi, double x_tol, int max_iterations = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  for (; it < max_iterations && (b - a) > x_tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  if ((b - a) > x_tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "golden-section search did not converge after " << it << " iterations; bracket [" << a << ", "
        << b << "], width " << (b - a) << " > " << x_tol;
    fail(ErrorKind::numerical, msg.str());
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

inline double log_factorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double poisson_log_pmf(long k, double mean) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (mean == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return static_cast<double>(k) * std::log(mean) - mean - log_factorial(k);
}

inline double poisson_pmf(long k, double mean) { return std::exp(poisson_log_pmf(k, mean)); }

/// P(X >= k) for X ~ Poisson(mean), without forming 1 - (head) when the head is large.
double poisson_upper_tail(long k, double mean);

/// Log of the binomial coefficient C(n, k).
inline double log_binomial(long n, long k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); }

}  // namespace uwbisi
