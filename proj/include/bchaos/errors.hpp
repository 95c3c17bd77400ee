// Copyright 2026 The bchaos Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception types shared by all bchaos modules.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace bchaos {

/// Matrix or vector shapes do not fit together.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A precondition on the numerical content of an input (e.g. unitarity) failed.
class ContractViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Dense dimension above the configured cap.
class CapacityError : public std::runtime_error {
  public:
    CapacityError(const std::string &what, long long requested, long long cap)
        : std::runtime_error(what), requested_(requested), cap_(cap) {}
    [[nodiscard]] long long requested() const noexcept { return requested_; }
    [[nodiscard]] long long cap() const noexcept { return cap_; }

  private:
    long long requested_;
    long long cap_;
};

/// A brute-force enumeration would exceed its term budget.
class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace bchaos
