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

#ifndef WEAKRAND_SECURITY_BOUNDS_H
#define WEAKRAND_SECURITY_BOUNDS_H

#include <cstddef>
#include <optional>

namespace weakrand {

/// Exponent bookkeeping for Protocol I with M = (N+1)^r runs.
struct SecurityParams {
    double epsilon = 0.0;
    unsigned n_ladder = 1;
    double r_exponent = 4.0;
    double t = 0.99;
    /// Unset means |S_H|^(-0.99), resolved once |S_H| is known.
    std::optional<double> delta1;
    double delta2 = 0.0;
    double delta3 = 0.0;
    double delta_az = 0.0;
    double kappa = 0.0;

    /// delta2 = delta_az = (N+1)^-0.99, delta3 = (N+1)^-0.01, kappa = (N+1)^-t.
    static SecurityParams defaults(double epsilon, unsigned n_ladder, double r_exponent);

    double runs() const;
    double delta1_for(std::size_t s_h_size) const;
    /// Throws ValidationError on out-of-range fields.
    void validate() const;
};

struct BoundWithProb {
    double bound = 0.0;
    double probability = 0.0;
};

struct SelectionBound {
    double bound = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double c = 0.0;
};

/// exp(-(beta^2 / 2) / (sigma2 + R beta / 3)).
double freedman_tail(double beta, double sigma2, double R);
/// 2 exp(-n delta^2 / 2).
double azuma_tail(std::size_t n, double delta);

/// 0.01 r + 1.98 + 2 log2(1/2+eps) - 2 log2(1/2-eps).
double t_prime(double epsilon, double r);

/// 4 * 3^0.01 * (N+1)^t', holding with probability 1 - exp(-(3/14)(N+1)^(0.01(r-1))).
BoundWithProb bad_runs_bound_test1(const SecurityParams &p);
/// (15/4)(N+1)^(r-2.98) + 9 (N+1)^(t'+0.01), with probability
/// 1 - 2 exp(-(N+1)^(r-3.98)/4) - exp(-(3/14)(N+1)^(0.01(r-1))).
BoundWithProb total_bad_bound(const SecurityParams &p);
/// c [(N+1)^e1 + (N+1)^e2], c = (3/2)^(6 + log2(1/2+eps)).
SelectionBound prob_bad_run_selected(const SecurityParams &p);

/// (2.98 + 2 log2(1/2+eps)) / (1 + log2(1/2+eps)) - 0.01; requires eps > 0.
double r_exponent(double epsilon);
/// e2 evaluated at r = r_exponent(eps).
double e2_at_optimal_r(double epsilon);

/// -0.99 + 2 log2(1/2+eps) - 2 log2(1/2-eps).
double distance_exponent(double epsilon);
/// max{(N+1)^-0.01, (N+1)^distance_exponent}.
double distance_bound_ns(const SecurityParams &p);
/// max{delta, I0 ((1/2+eps)/(1/2-eps))^(2 log2(N+1))}.
double quantum_distance_bound(double epsilon, unsigned n_ladder, double i0_value, double delta);
/// ((1/2-eps)/(1/2+eps))^(2 log2(N+1)).
double alpha_measure(double epsilon, unsigned n_ladder);

/// Root of e2_at_optimal_r on (0.001, 0.25) by bisection, |error| < 1e-10.
double threshold_eps_ns();
/// Closed-form root of distance_exponent.
double threshold_eps_distance();

}  // namespace weakrand

#endif  // WEAKRAND_SECURITY_BOUNDS_H
