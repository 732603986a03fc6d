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

#include <stdexcept>
#include <string>

namespace uwbisi {

enum class ErrorKind {
  load,        // malformed or incomplete parameter document
  validation,  // value outside its admissible range
  domain,      // operation called outside its precondition
  numerical,   // quadrature / minimizer did not converge
  budget,      // Monte-Carlo rejection budget exhausted
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

}  // namespace uwbisi
