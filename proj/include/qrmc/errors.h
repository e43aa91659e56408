// Copyright 2026 The qrmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRMC_ERRORS_H
#define QRMC_ERRORS_H

#include <stdexcept>
#include <string>

namespace qrmc {

/// Invalid user-facing parameters (non-coprime modulus, bad widths, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A request would exceed the configured simulation memory cap.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A documented precondition on a value (not a parameter) was violated,
/// e.g. reading a basis index out of a superposed state.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace qrmc

#endif
