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

#include "weakrand/security_bounds.h"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.h"
#include "weakrand/errors.h"
#include "weakrand/hardy_quantum.h"
#include "weakrand/ns_box.h"

using namespace weakrand;

TEST(security_bounds, defaults) {
    const auto p = SecurityParams::defaults(0.05, 7, 5.0);
    EXPECT_DOUBLE_EQ(p.t, 0.99);
    EXPECT_DOUBLE_EQ(p.delta2, std::pow(8.0, -0.99));
    EXPECT_DOUBLE_EQ(p.delta_az, p.delta2);
    EXPECT_DOUBLE_EQ(p.delta3, std::pow(8.0, -0.01));
    EXPECT_DOUBLE_EQ(p.kappa, std::pow(8.0, -0.99));
    EXPECT_FALSE(p.delta1.has_value());
    EXPECT_DOUBLE_EQ(p.delta1_for(100), std::pow(100.0, -0.99));
    EXPECT_DOUBLE_EQ(p.runs(), std::pow(8.0, 5.0));
    EXPECT_THROW(SecurityParams::defaults(0.5, 1, 4), ValidationError);
}

TEST(security_bounds, freedman_values) {
    EXPECT_DOUBLE_EQ(freedman_tail(0, 1, 1), 1.0);
    EXPECT_NEAR(freedman_tail(3, 1e-4, 1), std::exp(-4.5 / 1.0001), 1e-15);
    EXPECT_NEAR(std::log(freedman_tail(3, 1e-4, 1)), -4.4996, 1e-4);
    EXPECT_THROW(freedman_tail(-1, 1, 1), ValidationError);
    EXPECT_THROW(freedman_tail(1, 0, 1), ValidationError);
}

TEST(security_bounds, azuma_values) {
    EXPECT_NEAR(azuma_tail(200, 0.1), 2 * std::exp(-1.0), 1e-15);
    EXPECT_NEAR(azuma_tail(200, 0.1), 0.7358, 1e-4);
    EXPECT_THROW(azuma_tail(0, 0.1), ValidationError);
}

TEST(security_bounds, freedman_dominates_walk) {
    const std::vector<double> betas = {50, 100, 200};
    const auto freq = oracle::walk_max_tail(10000, betas, 20000, 1);
    for (std::size_t k = 0; k < betas.size(); ++k) EXPECT_LE(freq[k], freedman_tail(betas[k], 10000, 1)) << betas[k];
}

TEST(security_bounds, azuma_dominates_deviation) {
    EXPECT_LE(oracle::adaptive_deviation_tail(200, 0.1, 20000, 2), azuma_tail(200, 0.1));
    EXPECT_LE(oracle::adaptive_deviation_tail(1000, 0.05, 5000, 3), azuma_tail(1000, 0.05));
    EXPECT_LE(oracle::adaptive_deviation_tail(200, 0.1, 20000, 4, true), azuma_tail(200, 0.1));
}

TEST(security_bounds, t_prime_values) {
    EXPECT_NEAR(t_prime(0.0, 4.0), 2.02, 1e-14);
    EXPECT_NEAR(t_prime(0.09, 6.0939), 3.0911, 1e-4);
    double prev = -INFINITY;
    for (double e = 0; e < 0.49; e += 0.01) {
        EXPECT_GT(t_prime(e, 5), prev);
        prev = t_prime(e, 5);
    }
}

TEST(security_bounds, bad_run_bounds) {
    const auto p = SecurityParams::defaults(0.0, 3, 4.0);
    const auto b1 = bad_runs_bound_test1(p);
    EXPECT_NEAR(b1.bound, 4 * std::pow(3.0, 0.01) * std::pow(4.0, 2.02), 1e-12);
    EXPECT_NEAR(b1.probability, 1 - std::exp(-(3.0 / 14) * std::pow(4.0, 0.03)), 1e-15);
    EXPECT_GT(bad_runs_bound_test1(SecurityParams::defaults(0.1, 3, 4.0)).bound, b1.bound);

    const auto q = SecurityParams::defaults(0.05, 7, 5.0);
    const double tp = 0.05 + 1.98 + 2 * std::log2(0.55) - 2 * std::log2(0.45);
    const auto tb = total_bad_bound(q);
    EXPECT_NEAR(tb.bound, 3.75 * std::pow(8.0, 5 - 2.98) + 9 * std::pow(8.0, tp + 0.01), 1e-9);
    EXPECT_NEAR(tb.probability,
                1 - 2 * std::exp(-0.25 * std::pow(8.0, 1.02)) - std::exp(-(3.0 / 14) * std::pow(8.0, 0.04)), 1e-15);

    // First term dominates once r - 2.98 > t' + 0.01.
    const auto big = SecurityParams::defaults(0.0, 15, 8.0);
    EXPECT_GT(3.75 * std::pow(16.0, 8 - 2.98), 9 * std::pow(16.0, t_prime(0, 8) + 0.01));
    double prev = -INFINITY;
    for (unsigned n : {15u, 63u, 255u, 1023u}) {
        const double pr = total_bad_bound(SecurityParams::defaults(0.0, n, 4.5)).probability;
        EXPECT_GT(pr, prev);
        prev = pr;
    }
    EXPECT_LE(prev, 1.0);
    (void)big;
}

TEST(security_bounds, r_exponent_and_e_identities) {
    EXPECT_NEAR(r_exponent(0.09), 6.094078, 1e-6);
    EXPECT_THROW(r_exponent(0.0), ValidationError);
    EXPECT_GT(r_exponent(1e-6), 1e4);
    for (double e = 0.005; e < 0.1; e += 0.005) {
        EXPECT_GT(r_exponent(e), 3.98);
        const auto p = SecurityParams::defaults(e, 7, r_exponent(e));
        const auto s = prob_bad_run_selected(p);
        EXPECT_NEAR(s.e1, -0.01 * (1 + std::log2(0.5 + e)), 1e-12);
        EXPECT_NEAR(s.c, std::pow(1.5, 6 + std::log2(0.5 + e)), 1e-15);
    }
    EXPECT_NEAR(e2_at_optimal_r(0.09), -0.015343, 1e-5);
    EXPECT_GT(e2_at_optimal_r(0.095), 0.0);
}

TEST(security_bounds, thresholds) {
    const double td = threshold_eps_distance();
    EXPECT_NEAR(td, 0.0849453, 1e-6);
    EXPECT_NEAR(distance_exponent(td), 0.0, 1e-12);
    EXPECT_LT(distance_exponent(0.08), 0);
    EXPECT_GT(distance_exponent(0.09), 0);
    const double tn = threshold_eps_ns();
    EXPECT_NEAR(tn, 0.0902874, 1e-6);
    EXPECT_LT(e2_at_optimal_r(tn - 0.001), 0);
    EXPECT_GT(e2_at_optimal_r(tn + 0.001), 0);
    EXPECT_LT(td, tn);
}

TEST(security_bounds, distance_bounds) {
    for (unsigned n : {1u, 7u, 63u}) {
        EXPECT_DOUBLE_EQ(distance_bound_ns(SecurityParams::defaults(0.0, n, 5)), std::pow(n + 1.0, -0.01));
    }
    EXPECT_NEAR(distance_exponent(0.0), -0.99, 1e-15);
    double prev = 2;
    for (unsigned n : {1u, 3u, 15u, 255u}) {
        const double b = distance_bound_ns(SecurityParams::defaults(0.07, n, 5));
        EXPECT_LT(b, prev);
        prev = b;
    }
    EXPECT_DOUBLE_EQ(alpha_measure(0.0, 7), 1.0);
    EXPECT_NEAR(alpha_measure(0.49, 1), std::pow(0.01 / 0.99, 2), 1e-18);
    EXPECT_NEAR(alpha_measure(0.49, 1), 1.0203e-4, 1e-8);
    EXPECT_DOUBLE_EQ(quantum_distance_bound(0.0, 3, 0.2, 0.1), 0.2);
    EXPECT_DOUBLE_EQ(quantum_distance_bound(0.0, 3, 0.05, 0.1), 0.1);
    // I0 = 0: bound is delta for any eps, and vanishes with N at eps = 0.49.
    double last = 1;
    for (unsigned n : {3u, 15u, 63u, 255u, 1023u}) {
        const double d = std::pow(n + 1.0, -0.99);
        const double b = quantum_distance_bound(0.49, n, 0.0, d);
        EXPECT_DOUBLE_EQ(b, d);
        EXPECT_LT(b, last);
        last = b;
    }
}

TEST(security_bounds, quantum_bound_with_compiled_box) {
    for (unsigned n : {3u, 7u, 15u, 63u}) {
        const auto box = strategy_to_box(build_strategy(n, optimize_x(n).x_star));
        const double i0 = bell_I0(box);
        EXPECT_LE(i0, 1e-9);
        const double delta = std::pow(n + 1.0, -0.99);
        for (double e = 0.0; e <= 0.49 + 1e-12; e += 0.07) {
            const double b = quantum_distance_bound(e, n, i0, delta);
            if (n >= 4) EXPECT_LE(b, 2 * delta) << n << " " << e;
        }
    }
}

// Two-branch adversary: branch-dependent SV-band inputs over a PR box and a
// deterministic box. The observed box satisfies I0 / alpha >= 2 P(00|NN) - 1.
TEST(security_bounds, alpha_chain_on_mixture) {
    const unsigned n = 1;
    for (double eps : {0.0, 0.1, 0.3, 0.45}) {
        const auto [lo, hi] = sv_band(eps, n);
        const CondBox branch[2] = {pr_ladder_box(n), deterministic_box(n, 0b00, 0b00)};
        const double weight[2] = {0.7, 0.3};
        const InputDist in[2] = {{hi, lo, lo, 1 - hi - 2 * lo}, {lo, lo, hi, 1 - hi - 2 * lo}};
        CondBox obs(n);
        for (unsigned x = 0; x <= n; ++x)
            for (unsigned y = 0; y <= n; ++y) {
                const std::size_t k = x * 2 + y;
                const double pxy = weight[0] * in[0][k] + weight[1] * in[1][k];
                for (unsigned a = 0; a < 2; ++a)
                    for (unsigned b = 0; b < 2; ++b)
                        obs(a, b, x, y) =
                            (weight[0] * in[0][k] * branch[0](a, b, x, y) + weight[1] * in[1][k] * branch[1](a, b, x, y)) /
                            pxy;
            }
        EXPECT_GE(bell_I0(obs) / alpha_measure(eps, n), 2 * hardy_prob(obs) - 1 - 1e-12) << eps;
    }
}
