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

// Monte Carlo oracles shared by the unit tests and the acceptance suite.

#ifndef WEAKRAND_TESTS_ORACLES_H
#define WEAKRAND_TESTS_ORACLES_H

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "weakrand/rng.h"

namespace weakrand::oracle {

/// Fair +-1 walk of n steps (R = 1, W_n = n). Returns, per threshold,
/// the fraction of trials whose running maximum reached it.
inline std::vector<double> walk_max_tail(std::size_t n, const std::vector<double> &betas, std::size_t trials,
                                         std::uint64_t seed) {
    Rng master(seed);
    std::vector<std::size_t> hits(betas.size(), 0);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = master.split(t);
        long x = 0, mx = 0;
        std::size_t left = n;
        while (left > 0) {
            std::uint64_t bits = rng();
            const std::size_t take = std::min<std::size_t>(64, left);
            for (std::size_t i = 0; i < take; ++i, bits >>= 1) {
                x += (bits & 1) ? 1 : -1;
                mx = std::max(mx, x);
            }
            left -= take;
        }
        for (std::size_t k = 0; k < betas.size(); ++k) hits[k] += mx >= betas[k];
    }
    std::vector<double> out(betas.size());
    for (std::size_t k = 0; k < betas.size(); ++k) out[k] = static_cast<double>(hits[k]) / trials;
    return out;
}

/// Adaptive binary sequence whose conditional mean depends on the running
/// average (or is 1/2 when `iid`). Returns the fraction of trials with
/// |L_n - Lbar_n| >= delta.
inline double adaptive_deviation_tail(std::size_t n, double delta, std::size_t trials, std::uint64_t seed,
                                      bool iid = false) {
    Rng master(seed);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = master.split(t);
        double sum_b = 0, sum_p = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double avg = i == 0 ? 0.5 : sum_b / i;
            const double p = iid ? 0.5 : 0.2 + 0.6 * avg;
            sum_p += p;
            sum_b += rng.uniform() < p ? 1.0 : 0.0;
        }
        hits += std::abs(sum_b - sum_p) / n >= delta;
    }
    return static_cast<double>(hits) / trials;
}

}  // namespace weakrand::oracle

#endif  // WEAKRAND_TESTS_ORACLES_H
