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

#ifndef WEAKRAND_CLI_H
#define WEAKRAND_CLI_H

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace weakrand::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

/// Runs one subcommand; `args` excludes the program name. Tabular output
/// goes to `--out` or `out`; diagnostics and usage go to `err`.
int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Runs `body` and maps escaping exceptions to exit codes: ValidationError and
/// JSON errors give kConfigError, NumericalError and anything else
/// kNumericalError. The message goes to `err`.
int guarded(const std::function<int()> &body, std::ostream &err);

}  // namespace weakrand::cli

#endif  // WEAKRAND_CLI_H
