// Copyright 2026 The weakrand Authors
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

#ifndef WEAKRAND_ERRORS_H
#define WEAKRAND_ERRORS_H

#include <stdexcept>
#include <string>

namespace weakrand {

/// Raised when an input violates a documented precondition or invariant.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation that is guaranteed to succeed does not
/// (e.g. an LP reported infeasible although a feasible point is known).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace weakrand

#endif  // WEAKRAND_ERRORS_H
