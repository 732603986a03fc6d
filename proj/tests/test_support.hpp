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

#include <cmath>
#include <string>

#include "uwbisi/error.hpp"
#include "uwbisi/params.hpp"

#ifndef UWBISI_DATA_DIR
#define UWBISI_DATA_DIR "data"
#endif

namespace uwbisi::test {

inline std::string bundled_params() { return std::string(UWBISI_DATA_DIR) + "/ieee802154a.params"; }

inline ChannelParams cm(const std::string &id) { return load_params(std::filesystem::path(bundled_params()), id); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Runs f and returns the kind of the uwbisi::Error it throws.
template <typename F>
ErrorKind error_kind_of(F &&f, std::string *message = nullptr) {
  try {
    f();
  } catch (const Error &e) {
    if (message) *message = e.what();
    return e.kind();
  }
  throw std::runtime_error("expected an uwbisi::Error");
}

}  // namespace uwbisi::test
