// Copyright 2026 The QNE Solver Authors. All rights reserved.
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

#ifndef QNE_ERRORS_H_
#define QNE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace qne {

// Precondition violated by the caller (bad sizes, out-of-range parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A box-with-hyperplane set whose hyperplane misses the box.
class InfeasibleSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent or incomplete experiment / scheme configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation outside the domain of a game's objective (e.g. log of a
// nonpositive quantity, congestion beyond link capacity).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A reference-solution oracle failed to meet its tolerance.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The game does not expose the evaluator the operation needs.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qne

#endif  // QNE_ERRORS_H_
