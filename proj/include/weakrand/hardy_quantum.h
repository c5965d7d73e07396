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

#ifndef WEAKRAND_HARDY_QUANTUM_H
#define WEAKRAND_HARDY_QUANTUM_H

#include <vector>

#include "json.hpp"
#include "weakrand/ns_box.h"

namespace weakrand {

/// Two-qubit strategy for the ladder test: state alpha|00> - beta|11>
/// and real projective measurements with outcome-0 vector (cos t, sin t).
struct LadderStrategy {
    unsigned n_ladder = 1;
    double x_ratio = 0.5;  // alpha / beta
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> angles_a;
    std::vector<double> angles_b;

    /// Normalization and angle recurrences; throws ValidationError.
    void validate() const;
};

enum class AngleBranch { kPrincipal, kNegated };

/// x^2/(1+x^2) * ((1 - x^(2N)) / (1 + x^(2N+1)))^2.
double hardy_prob_closed_form(unsigned n_ladder, double x);

struct HardyOptimum {
    double x_star = 0.0;
    double p_h_star = 0.0;
};

/// Grid bracket followed by golden-section search on [0, 1] (tolerance 1e-12).
HardyOptimum optimize_x(unsigned n_ladder);

/// 0.384 * N^(-0.99).
double ansatz_gap(unsigned n_ladder);
/// Trial ratio c^(N^(-0.99)) with -ln(c)/2 = 0.384.
double ansatz_x(unsigned n_ladder);

LadderStrategy build_strategy(unsigned n_ladder, double x, AngleBranch branch = AngleBranch::kPrincipal);

/// Born-rule box. Throws NumericalError naming the failed check if the box
/// signals, a Hardy zero exceeds 1e-9, or P(0,0|N,N) departs from the
/// closed form by more than 1e-9.
CondBox strategy_to_box(const LadderStrategy &s);

nlohmann::json to_json(const LadderStrategy &s);
LadderStrategy strategy_from_json_ladder(const nlohmann::json &j);

}  // namespace weakrand

#endif  // WEAKRAND_HARDY_QUANTUM_H
