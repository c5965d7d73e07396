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

#ifndef WEAKRAND_SV_SOURCE_H
#define WEAKRAND_SV_SOURCE_H

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "weakrand/rng.h"

namespace weakrand {

struct SvParams {
    double epsilon = 0.0;

    /// Throws ValidationError unless 0 <= epsilon < 0.5.
    void validate() const;
};

namespace strategy {

struct Honest {};

/// Pushes bit i toward targets[i] with full bias. Positions past the end
/// wrap around when `cyclic`, otherwise they are honest.
struct MaxBiasToward {
    std::vector<std::uint8_t> targets;
    bool cyclic = true;
};

/// Pushes toward a fixed bit string, honest afterwards.
struct TargetString {
    std::vector<std::uint8_t> bits;
};

/// Arbitrary history-dependent bias. Keys are histories written as strings
/// of '0'/'1' (oldest first); missing histories use `default_p0`.
struct HistoryTable {
    std::map<std::string, double> p0;
    double default_p0 = 0.5;
};

}  // namespace strategy

using SourceStrategy =
    std::variant<strategy::Honest, strategy::MaxBiasToward, strategy::TargetString, strategy::HistoryTable>;

/// P(next bit = 0 | history) under `s`. Throws ValidationError when the
/// value is outside [1/2 - eps, 1/2 + eps] (tolerance 1e-12).
double bias_for(const SourceStrategy &s, double epsilon, std::span<const std::uint8_t> history);

std::string history_key(std::span<const std::uint8_t> history);

class SvStream {
   public:
    SvStream(SvParams params, SourceStrategy strategy, std::uint64_t seed);

    std::uint8_t next_bit();
    /// Draws log2(num_settings) bits and reads them big-endian.
    std::uint32_t sample_setting(std::uint32_t num_settings);
    /// Uniform-ish index in [0, n) from ceil(log2 n) bits, rejecting values >= n.
    std::uint32_t sample_index(std::uint32_t n);

    const SvParams &params() const { return params_; }
    const SourceStrategy &strategy() const { return strategy_; }
    const std::vector<std::uint8_t> &history() const { return history_; }

   private:
    SvParams params_;
    SourceStrategy strategy_;
    std::vector<std::uint8_t> history_;
    Rng rng_;
};

bool is_power_of_two(std::uint64_t n);
/// log2 of a power of two; ValidationError otherwise.
unsigned log2_exact(std::uint64_t n);
/// Smallest k with 2^k >= n (n >= 1).
unsigned ceil_log2(std::uint64_t n);

/// (1 / (2 (N+1))) * ((1 - 2 eps) / (1 + 2 eps))^(2 log2(N+1)).
double min_setting_prob(double epsilon, unsigned n_ladder);

nlohmann::json to_json(const SourceStrategy &s);
SourceStrategy strategy_from_json(const nlohmann::json &j);

}  // namespace weakrand

#endif  // WEAKRAND_SV_SOURCE_H
