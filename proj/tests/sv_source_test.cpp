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

#include "weakrand/sv_source.h"

#include <gtest/gtest.h>

#include <cmath>

#include "weakrand/errors.h"

using namespace weakrand;

TEST(sv_source, params_band) {
    EXPECT_NO_THROW(SvParams{0.0}.validate());
    EXPECT_NO_THROW(SvParams{0.49}.validate());
    EXPECT_THROW(SvParams{0.5}.validate(), ValidationError);
    EXPECT_THROW(SvParams{-0.1}.validate(), ValidationError);
    EXPECT_THROW(SvParams{NAN}.validate(), ValidationError);
}

TEST(sv_source, bias_values) {
    std::vector<std::uint8_t> h;
    EXPECT_DOUBLE_EQ(bias_for(strategy::Honest{}, 0.0, h), 0.5);
    EXPECT_DOUBLE_EQ(bias_for(strategy::MaxBiasToward{{0}, true}, 0.09, h), 0.59);
    EXPECT_DOUBLE_EQ(bias_for(strategy::MaxBiasToward{{1}, true}, 0.09, h), 0.41);
    strategy::HistoryTable bad;
    bad.default_p0 = 0.7;
    EXPECT_THROW(bias_for(bad, 0.1, h), ValidationError);
    SvStream s(SvParams{0.1}, bad, 1);
    EXPECT_THROW(s.next_bit(), ValidationError);
}

TEST(sv_source, honest_frequency) {
    SvStream s(SvParams{0.0}, strategy::Honest{}, 3);
    int zeros = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) zeros += s.next_bit() == 0;
    EXPECT_NEAR(zeros / double(n), 0.5, 3 * 0.5 / std::sqrt(n));
    EXPECT_EQ(s.history().size(), static_cast<std::size_t>(n));
}

TEST(sv_source, target_string_hit_probability) {
    const double eps = 0.2;
    const std::vector<std::uint8_t> target = {1, 0, 0, 1, 1, 0, 1, 0};
    const double p = std::pow(0.5 + eps, 8);
    const int trials = 1000000;
    Rng master(99);
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        SvStream s(SvParams{eps}, strategy::TargetString{target}, master());
        bool all = true;
        for (auto b : target) all &= s.next_bit() == b;
        hits += all;
    }
    const double sd = std::sqrt(p * (1 - p) / trials);
    EXPECT_NEAR(hits / double(trials), p, 3 * sd);
}

TEST(sv_source, sample_setting_big_endian) {
    SvStream s(SvParams{0.0}, strategy::Honest{}, 5);
    for (int i = 0; i < 100; ++i) {
        const auto v = s.sample_setting(4);
        const auto &h = s.history();
        EXPECT_EQ(v, (h[h.size() - 2] << 1u) | h[h.size() - 1]);
    }
    const auto before = s.history().size();
    const auto v2 = s.sample_setting(2);
    EXPECT_EQ(v2, s.history().back());
    EXPECT_EQ(s.history().size(), before + 1);
    EXPECT_THROW(s.sample_setting(3), ValidationError);
    EXPECT_EQ(s.sample_setting(1), 0u);
}

TEST(sv_source, sample_setting_uniform_at_eps0) {
    SvStream s(SvParams{0.0}, strategy::Honest{}, 17);
    const int n = 100000;
    int counts[4] = {};
    for (int i = 0; i < n; ++i) ++counts[s.sample_setting(4)];
    const double sd = std::sqrt(0.25 * 0.75 / n);
    for (int c : counts) EXPECT_NEAR(c / double(n), 0.25, 3 * sd);
}

TEST(sv_source, sample_index_in_range) {
    SvStream s(SvParams{0.3}, strategy::MaxBiasToward{{1}, true}, 2);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(s.sample_index(5), 5u);
    EXPECT_EQ(s.sample_index(1), 0u);
}

TEST(sv_source, min_setting_prob_values) {
    EXPECT_DOUBLE_EQ(min_setting_prob(0.0, 1), 0.25);
    EXPECT_DOUBLE_EQ(min_setting_prob(0.0, 3), 0.125);
    // Extreme two-bit histories: smallest over largest pair probability.
    const double lo = 0.41 * 0.41, hi = 0.59 * 0.59;
    EXPECT_NEAR(min_setting_prob(0.09, 1), 0.25 * lo / hi, 1e-15);
    EXPECT_NEAR(min_setting_prob(0.09, 1), 0.12073, 1e-5);
    EXPECT_THROW(min_setting_prob(0.1, 2), ValidationError);
}

TEST(sv_source, min_setting_prob_monotone) {
    for (unsigned n : {1u, 3u, 7u, 15u}) {
        double prev = 1.0;
        for (double e = 0.0; e < 0.5; e += 0.05) {
            const double v = min_setting_prob(e, n);
            EXPECT_LT(v, prev);
            prev = v;
        }
        EXPECT_GT(min_setting_prob(0.1, n), min_setting_prob(0.1, 2 * n + 1));
    }
}

// Every joint setting string of length 2 log2(N+1) has probability within
// [(1/2-eps)^k, (1/2+eps)^k] for any history-dependent strategy.
TEST(sv_source, pair_probability_band_exhaustive) {
    Rng rng(8);
    for (double eps : {0.0, 0.1, 0.25, 0.45}) {
        for (unsigned bits : {2u, 4u}) {
            for (int rep = 0; rep < 20; ++rep) {
                strategy::HistoryTable h;
                for (unsigned len = 0; len < bits; ++len)
                    for (unsigned v = 0; v < (1u << len); ++v) {
                        std::vector<std::uint8_t> hist(len);
                        for (unsigned i = 0; i < len; ++i) hist[i] = (v >> (len - 1 - i)) & 1;
                        h.p0[history_key(hist)] = 0.5 - eps + 2 * eps * rng.uniform();
                    }
                const double lo = std::pow(0.5 - eps, bits), hi = std::pow(0.5 + eps, bits);
                double total = 0;
                for (unsigned v = 0; v < (1u << bits); ++v) {
                    std::vector<std::uint8_t> hist;
                    double p = 1;
                    for (unsigned i = 0; i < bits; ++i) {
                        const std::uint8_t b = (v >> (bits - 1 - i)) & 1;
                        const double p0 = bias_for(h, eps, hist);
                        p *= b == 0 ? p0 : 1 - p0;
                        hist.push_back(b);
                    }
                    EXPECT_GE(p, lo - 1e-15);
                    EXPECT_LE(p, hi + 1e-15);
                    total += p;
                }
                EXPECT_NEAR(total, 1.0, 1e-12);
            }
        }
    }
}

TEST(sv_source, bias_band_random_draws) {
    Rng rng(4);
    for (int i = 0; i < 10000; ++i) {
        const double eps = 0.49 * rng.uniform();
        std::vector<std::uint8_t> hist(rng() % 12);
        for (auto &b : hist) b = rng() & 1;
        const SourceStrategy strats[] = {strategy::Honest{}, strategy::MaxBiasToward{{0, 1, 1}, true},
                                         strategy::TargetString{{1, 1, 0}}};
        for (const auto &s : strats) {
            const double p = bias_for(s, eps, hist);
            EXPECT_LE(std::abs(p - 0.5), eps + 1e-12);
        }
    }
}

TEST(sv_source, json_round_trip) {
    strategy::HistoryTable h;
    h.p0["01"] = 0.4;
    h.default_p0 = 0.55;
    const SourceStrategy all[] = {strategy::Honest{}, strategy::MaxBiasToward{{0, 1}, false},
                                  strategy::TargetString{{1, 0, 1}}, h};
    for (const auto &s : all) {
        const auto j = to_json(s);
        EXPECT_EQ(to_json(strategy_from_json(j)), j);
    }
    EXPECT_THROW(strategy_from_json(nlohmann::json{{"type", "nope"}}), ValidationError);
    EXPECT_THROW(strategy_from_json(nlohmann::json{{"type", "honest"}, {"x", 1}}), ValidationError);
    EXPECT_THROW(strategy_from_json(nlohmann::json{{"type", "target_string"}, {"bits", {2}}}), ValidationError);
}
