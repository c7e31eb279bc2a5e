// Copyright 2026 The nlcausal Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace nlcausal {

/// Argument outside the mathematical domain of an operation
/// (wrong scenario shape, visibility outside [0,1], ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Requested enumeration exceeds the configured strategy cap.
class SizeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// A numerical routine failed to converge (LP cycling, optimizer stall).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Plug-in estimation impossible from the supplied counts.
class EstimationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace nlcausal
