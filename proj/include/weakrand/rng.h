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

#ifndef WEAKRAND_RNG_H
#define WEAKRAND_RNG_H

#include <cstdint>
#include <limits>

namespace weakrand {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: output k is a hash of (key, k). `split(i)`
/// derives an independent stream, so parallel trials can be keyed by index
/// and the result does not depend on scheduling.
class Rng {
   public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix64(key_ ^ mix64(counter_++)); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    Rng split(std::uint64_t stream_id) const {
        Rng r;
        r.key_ = mix64(key_ + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
        return r;
    }

    std::uint64_t counter() const { return counter_; }

   private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace weakrand

#endif  // WEAKRAND_RNG_H
