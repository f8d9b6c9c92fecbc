// Copyright 2026 The Airborne Authors
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

#ifndef AIRBORNE_ERRORS_H_
#define AIRBORNE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace airborne {

// Non-finite numeric input where a finite value is required.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid configuration: non-positive dt, inverted limits, unknown keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid call arguments (empty sequences, too-short series).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or shape-inconsistent model file / parameters.
class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training data that cannot be normalized or split.
class TrainingConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// plan_cycle called with no time left before landing.
class PlanningWindowExpired : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ballistic flight with no non-negative landing time.
class InfeasibleTrajectory : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace airborne

#endif  // AIRBORNE_ERRORS_H_
