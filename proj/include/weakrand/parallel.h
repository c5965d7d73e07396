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

#ifndef WEAKRAND_PARALLEL_H
#define WEAKRAND_PARALLEL_H

#include <cstddef>
#include <functional>

namespace weakrand {

/// Worker count: WEAKRAND_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Calls fn(i) for i in [0, n) on up to worker_count() threads. Work is
/// handed out by an atomic counter; callers write results into slot i so
/// the outcome is independent of scheduling. The first exception thrown by
/// any call is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

/// Binomial proportion with a Wilson score interval.
struct Proportion {
    std::size_t successes = 0;
    std::size_t trials = 0;
    double rate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// z = 1.96 by default; trials = 0 yields all zeros.
Proportion wilson(std::size_t successes, std::size_t trials, double z = 1.96);

}  // namespace weakrand

#endif  // WEAKRAND_PARALLEL_H
