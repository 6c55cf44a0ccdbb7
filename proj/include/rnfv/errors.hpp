// Copyright 2026 the rnfv authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RNFV_ERRORS_HPP
#define RNFV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rnfv {

// Malformed input text. line/column are 1-based; column 0 means "whole line".
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) +
                           (column > 0 ? ", column " + std::to_string(column) : "") +
                           ": " + msg),
        line(line),
        column(column) {}
  int line;
  int column;
};

// Structurally valid input that violates a model invariant
// (dangling reference, out-of-range probability, disconnected graph, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A demand (or model) that cannot be satisfied at all.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// An exact procedure whose search space exceeds its enumeration guard.
class GuardExceeded : public std::runtime_error {
 public:
  explicit GuardExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rnfv

#endif  // RNFV_ERRORS_HPP
